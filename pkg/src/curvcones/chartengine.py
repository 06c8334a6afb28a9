"""Metric charts: loading, sampling and finite-difference curvature.

A chart file is JSON:

	{
		"name": "unit sphere",                   (optional)
		"compact": true,                         (optional, user-asserted, default true)
		"dimension": 2,
		"coordinates": ["x1", "x2"],
		"metric": [["1", "0"], ["0", "sin(x1)^2"]],
		"samples": {"grid": {"ranges": [[0.5, 2.5], [0, 6]], "counts": [3, 2]}},
		"domain": [[0, 3.14159], [-10, 10]]      (optional)
	}

``samples`` may instead hold ``"points": [[...], ...]``.
"""

import itertools
import json
import logging
import math
import re
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import NDArray

from .config import DEFAULT_STEP, FD_ACCEPTANCE, FD_VALIDATION_TOLERANCE
from .errors import (
	ChartError,
	ChartSchemaError,
	EmptySampleError,
	EvaluationError,
	IndefiniteMetricError,
	RangeError,
	SingularMetricError,
	StencilError,
)
from .expression import RESERVED_NAMES, Expression, ParseError, parse_expression
from .riemcurv import MIN_DIMENSION, RiemannTensor, assemble_operator, eigen_spectrum
from .symcone import Spectrum

logger = logging.getLogger(__name__)

# Constants
MIN_METRIC_EIGENVALUE = 1e-10
MAX_CONDITION_NUMBER = 1e12
SYMMETRY_TOLERANCE = 1e-12
STENCIL_MARGIN = 2.0
_IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

type Point = tuple[float, ...]


@dataclass(frozen=True)
class BoxDomain:
	"""Axis-aligned box: each coordinate x_i in [lo_i, hi_i]."""

	bounds: tuple[tuple[float, float], ...]

	def contains(self, point: Sequence[float], margin: float = 0.0) -> bool:
		return all(lo + margin <= x <= hi - margin for x, (lo, hi) in zip(point, self.bounds, strict=True))


@dataclass(frozen=True)
class GridSample:
	ranges: tuple[tuple[float, float], ...]
	counts: tuple[int, ...]


@dataclass(frozen=True)
class PointSample:
	points: tuple[Point, ...]


@dataclass(frozen=True, eq=False)
class MetricChart:
	"""A coordinate chart with a symmetric matrix of component expressions."""

	dimension: int
	coordinates: tuple[str, ...]
	metric: tuple[tuple[Expression, ...], ...]
	samples: GridSample | PointSample
	domain: BoxDomain | None = None
	name: str = "chart"
	compact: bool = True
	text_symmetric: bool = field(init=False)

	def __post_init__(self) -> None:
		symmetric = all(
			self.metric[i][j].to_text() == self.metric[j][i].to_text()
			for i, j in itertools.combinations(range(self.dimension), 2)
		)
		object.__setattr__(self, "text_symmetric", symmetric)

	@classmethod
	def from_dict(cls, data: Any) -> "MetricChart":  # noqa: ANN401
		"""Validate a decoded chart document.

		Raises:
			ChartSchemaError: With the schema path of the first offending value
		"""
		if not isinstance(data, dict):
			msg = "chart must be a JSON object"
			raise ChartSchemaError(msg, "$")

		dimension = data.get("dimension")
		if not isinstance(dimension, int) or isinstance(dimension, bool) or dimension < MIN_DIMENSION:
			msg = f"dimension must be an integer >= {MIN_DIMENSION}, got {dimension!r}"
			raise ChartSchemaError(msg, "$.dimension")

		coordinates = _coordinates(data.get("coordinates"), dimension)
		metric = _metric(data.get("metric"), dimension, coordinates)
		samples = _samples(data.get("samples"), dimension)

		domain = None
		if data.get("domain") is not None:
			domain = BoxDomain(_ranges(data["domain"], dimension, "$.domain"))

		name = data.get("name", "chart")
		if not isinstance(name, str):
			msg = f"name must be a string, got {name!r}"
			raise ChartSchemaError(msg, "$.name")
		compact = data.get("compact", True)
		if not isinstance(compact, bool):
			msg = f"compact must be a boolean, got {compact!r}"
			raise ChartSchemaError(msg, "$.compact")

		return cls(
			dimension=dimension,
			coordinates=coordinates,
			metric=metric,
			samples=samples,
			domain=domain,
			name=name,
			compact=compact,
		)

	@classmethod
	def load(cls, path: str | Path) -> "MetricChart":
		"""Read and validate a chart file.

		Raises:
			ChartSchemaError: If the file is not valid UTF-8 JSON or violates the schema
		"""
		try:
			text = Path(path).read_text(encoding="utf-8")
		except UnicodeDecodeError as e:
			msg = f"not UTF-8 text: invalid byte at offset {e.start}"
			raise ChartSchemaError(msg, "$") from e
		try:
			data = json.loads(text)
		except json.JSONDecodeError as e:
			msg = f"invalid JSON: {e.msg} (line {e.lineno}, column {e.colno})"
			raise ChartSchemaError(msg, "$") from e
		chart = cls.from_dict(data)
		logger.debug(f"loaded chart {chart.name!r} from {path}: n={chart.dimension}")
		return chart

	def metric_at(self, point: Sequence[float]) -> NDArray[np.float64]:
		"""Evaluate g_ij at a point.

		Raises:
			EvaluationError: If a component cannot be evaluated there
			ChartError: If the components are not numerically symmetric
		"""
		env = dict(zip(self.coordinates, (float(x) for x in point), strict=True))
		n = self.dimension
		g = np.empty((n, n))
		for i in range(n):
			g[i, i] = self.metric[i][i].evaluate(env)
			for j in range(i + 1, n):
				g[i, j] = self.metric[i][j].evaluate(env)
				g[j, i] = g[i, j] if self.text_symmetric else self.metric[j][i].evaluate(env)
		if not self.text_symmetric:
			residual = float(np.abs(g - g.T).max())
			if residual > SYMMETRY_TOLERANCE * max(1.0, float(np.abs(g).max())):
				msg = f"metric is not symmetric at {tuple(point)}: residual {residual:.3e}"
				raise ChartError(msg)
			g = 0.5 * (g + g.T)
		return g


def _number(value: Any, path: str) -> float:  # noqa: ANN401
	if isinstance(value, bool) or not isinstance(value, int | float) or not math.isfinite(value):
		msg = f"expected a finite number, got {value!r}"
		raise ChartSchemaError(msg, path)
	return float(value)


def _list(value: Any, length: int, path: str) -> list:  # noqa: ANN401
	if not isinstance(value, list) or len(value) != length:
		msg = f"expected a list of {length} entries, got {value!r}"
		raise ChartSchemaError(msg, path)
	return value


def _coordinates(value: Any, dimension: int) -> tuple[str, ...]:  # noqa: ANN401
	names = _list(value, dimension, "$.coordinates")
	for index, name in enumerate(names):
		path = f"$.coordinates[{index}]"
		if not isinstance(name, str) or not _IDENTIFIER.match(name):
			msg = f"coordinate names must be identifiers, got {name!r}"
			raise ChartSchemaError(msg, path)
		if name in RESERVED_NAMES:
			msg = f"coordinate name {name!r} clashes with a built-in function or constant"
			raise ChartSchemaError(msg, path)
	if len(set(names)) != len(names):
		msg = f"coordinate names must be unique, got {names}"
		raise ChartSchemaError(msg, "$.coordinates")
	return tuple(names)


def _metric(value: Any, dimension: int, coordinates: tuple[str, ...]) -> tuple[tuple[Expression, ...], ...]:  # noqa: ANN401
	rows = _list(value, dimension, "$.metric")
	metric = []
	for i, row in enumerate(rows):
		entries = _list(row, dimension, f"$.metric[{i}]")
		parsed = []
		for j, text in enumerate(entries):
			path = f"$.metric[{i}][{j}]"
			if isinstance(text, int | float) and not isinstance(text, bool):
				text = repr(float(text))  # noqa: PLW2901
			if not isinstance(text, str):
				msg = f"metric components must be expression strings, got {text!r}"
				raise ChartSchemaError(msg, path)
			try:
				parsed.append(parse_expression(text, coordinates))
			except ParseError as e:
				msg = f"{e} (byte offset {e.offset})"
				raise ChartSchemaError(msg, path) from e
		metric.append(tuple(parsed))
	return tuple(metric)


def _ranges(value: Any, dimension: int, path: str) -> tuple[tuple[float, float], ...]:  # noqa: ANN401
	ranges = []
	for axis, bounds in enumerate(_list(value, dimension, path)):
		lo, hi = (_number(v, f"{path}[{axis}][{k}]") for k, v in enumerate(_list(bounds, 2, f"{path}[{axis}]")))
		if lo > hi:
			msg = f"range is reversed: [{lo}, {hi}]"
			raise ChartSchemaError(msg, f"{path}[{axis}]")
		ranges.append((lo, hi))
	return tuple(ranges)


def _samples(value: Any, dimension: int) -> GridSample | PointSample:  # noqa: ANN401
	if not isinstance(value, dict) or len(value.keys() & {"grid", "points"}) != 1:
		msg = "samples must be an object with exactly one of 'grid' or 'points'"
		raise ChartSchemaError(msg, "$.samples")

	if "grid" in value:
		grid = value["grid"]
		if not isinstance(grid, dict):
			msg = "grid must be an object with 'ranges' and 'counts'"
			raise ChartSchemaError(msg, "$.samples.grid")
		ranges = _ranges(grid.get("ranges"), dimension, "$.samples.grid.ranges")
		counts = []
		for axis, count in enumerate(_list(grid.get("counts"), dimension, "$.samples.grid.counts")):
			if not isinstance(count, int) or isinstance(count, bool) or count < 0:
				msg = f"counts must be non-negative integers, got {count!r}"
				raise ChartSchemaError(msg, f"$.samples.grid.counts[{axis}]")
			counts.append(count)
		return GridSample(ranges=ranges, counts=tuple(counts))

	points = value["points"]
	if not isinstance(points, list):
		msg = "points must be a list of coordinate lists"
		raise ChartSchemaError(msg, "$.samples.points")
	parsed = []
	for p, point in enumerate(points):
		coordinates = _list(point, dimension, f"$.samples.points[{p}]")
		parsed.append(tuple(_number(x, f"$.samples.points[{p}][{axis}]") for axis, x in enumerate(coordinates)))
	return PointSample(tuple(parsed))


def sample(chart: MetricChart) -> list[Point]:
	"""Sample points in deterministic order (row-major for grids, the last axis varying fastest).

	Raises:
		EmptySampleError: If the specification yields no points
	"""
	match chart.samples:
		case GridSample(ranges=ranges, counts=counts):
			if any(count == 0 for count in counts):
				msg = f"grid counts {list(counts)} yield no points"
				raise EmptySampleError(msg)
			axes = [np.linspace(lo, hi, count).tolist() for (lo, hi), count in zip(ranges, counts, strict=True)]
			return [tuple(point) for point in itertools.product(*axes)]
		case PointSample(points=points):
			if not points:
				msg = "explicit point list is empty"
				raise EmptySampleError(msg)
			return list(points)
	msg = f"unsupported sample specification {chart.samples!r}"
	raise EmptySampleError(msg)


def _check_metric(g: NDArray[np.float64], point: Sequence[float]) -> None:
	eigenvalues = np.linalg.eigvalsh(g)
	if eigenvalues[0] <= MIN_METRIC_EIGENVALUE:
		msg = f"metric is not positive definite at {tuple(point)}: smallest eigenvalue {eigenvalues[0]:.3e}"
		raise IndefiniteMetricError(msg)
	condition = eigenvalues[-1] / eigenvalues[0]
	if condition > MAX_CONDITION_NUMBER:
		msg = f"metric is singular at {tuple(point)}: condition number {condition:.3e}"
		raise SingularMetricError(msg)


def _stencil(chart: MetricChart, point: NDArray[np.float64], step: float) -> Callable[..., NDArray[np.float64]]:
	"""Memoized metric evaluation at point + step·(offsets)."""
	cache: dict[tuple[tuple[int, int], ...], NDArray[np.float64]] = {}

	def at(*offsets: tuple[int, int]) -> NDArray[np.float64]:
		key = tuple(sorted(offsets))
		if key not in cache:
			shifted = point.copy()
			for axis, sign in offsets:
				shifted[axis] += sign * step
			try:
				cache[key] = chart.metric_at(shifted)
			except EvaluationError as e:
				msg = f"stencil point {tuple(shifted.tolist())} cannot be evaluated: {e}"
				raise StencilError(msg) from e
		return cache[key]

	return at


def metric_jet(
	chart: MetricChart, point: Sequence[float], step: float = DEFAULT_STEP
) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
	"""g, ∂_k g_ij and ∂_k∂_l g_ij at a point by central differences.

	Returns:
		(g, dg, ddg) with dg[k, i, j] = ∂_k g_ij and ddg[k, l, i, j] = ∂_k ∂_l g_ij
	"""
	n = chart.dimension
	x = np.asarray(point, dtype=float)
	at = _stencil(chart, x, step)
	g = at()
	dg = np.empty((n, n, n))
	ddg = np.empty((n, n, n, n))
	for k in range(n):
		plus, minus = at((k, 1)), at((k, -1))
		dg[k] = (plus - minus) / (2.0 * step)
		ddg[k, k] = (plus - 2.0 * g + minus) / step**2
		for l in range(k + 1, n):  # noqa: E741
			cross = at((k, 1), (l, 1)) - at((k, 1), (l, -1)) - at((k, -1), (l, 1)) + at((k, -1), (l, -1))
			ddg[k, l] = ddg[l, k] = cross / (4.0 * step**2)
	return g, dg, ddg


def _first_kind(dg: NDArray[np.float64]) -> NDArray[np.float64]:
	"""Γ_{lij} = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij), indexed [l, i, j]."""
	return 0.5 * (np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg)


def christoffel(g: NDArray[np.float64], dg: NDArray[np.float64]) -> NDArray[np.float64]:
	"""Γ^k_ij = ½ g^{kl}(∂_i g_jl + ∂_j g_il − ∂_l g_ij), indexed [k, i, j]."""
	return np.einsum("kl,lij->kij", np.linalg.inv(g), _first_kind(dg))


def riemann_from_jet(g: NDArray[np.float64], dg: NDArray[np.float64], ddg: NDArray[np.float64]) -> NDArray[np.float64]:
	"""Coordinate components R_{ijkl} = g(R(∂_i, ∂_j)∂_k, ∂_l) from the 2-jet of the metric.

	R^l_{ijk} = ∂_iΓ^l_jk − ∂_jΓ^l_ik + Γ^l_im Γ^m_jk − Γ^l_jm Γ^m_ik, with ∂Γ differentiated
	through the jet so the result is the exact curvature of the quadratic Taylor metric.
	"""
	ginv = np.linalg.inv(g)
	lowered = _first_kind(dg)
	gamma = np.einsum("kl,lij->kij", ginv, lowered)

	d_lowered = 0.5 * (np.einsum("mijl->mlij", ddg) + np.einsum("mjil->mlij", ddg) - ddg)
	d_ginv = -np.einsum("ka,mab,bl->mkl", ginv, dg, ginv)
	d_gamma = np.einsum("mkl,lij->mkij", d_ginv, lowered) + np.einsum("kl,mlij->mkij", ginv, d_lowered)

	upper = (
		np.einsum("iljk->lijk", d_gamma)
		- np.einsum("jlik->lijk", d_gamma)
		+ np.einsum("lim,mjk->lijk", gamma, gamma)
		- np.einsum("ljm,mik->lijk", gamma, gamma)
	)
	return np.einsum("ml,mijk->ijkl", g, upper)


def orthonormal_frame(g: NDArray[np.float64]) -> NDArray[np.float64]:
	"""Gram–Schmidt of the coordinate frame against g, in coordinate order; columns are the frame."""
	L = np.linalg.cholesky(g)
	return np.linalg.inv(L).T


def curvature_at(chart: MetricChart, point: Sequence[float], step: float = DEFAULT_STEP) -> RiemannTensor:
	"""Finite-difference Riemann tensor at a point, in the orthonormal frame of the coordinate basis.

	Raises:
		RangeError: If the point has the wrong length or the step is not positive
		StencilError: If a stencil point leaves the domain or cannot be evaluated
		IndefiniteMetricError: If g is not positive definite at the point
		SingularMetricError: If g is too badly conditioned
	"""
	if len(point) != chart.dimension:
		msg = f"point {tuple(point)} has {len(point)} coordinates, chart has {chart.dimension}"
		raise RangeError(msg)
	if not step > 0:
		msg = f"step must be positive, got {step}"
		raise RangeError(msg)
	if chart.domain is not None and not chart.domain.contains(point, STENCIL_MARGIN * step):
		msg = f"point {tuple(point)} is closer than {STENCIL_MARGIN}·step to the chart boundary"
		raise StencilError(msg)

	g, dg, ddg = metric_jet(chart, point, step)
	_check_metric(g, point)
	coordinate = riemann_from_jet(g, dg, ddg)
	F = orthonormal_frame(g)
	components = np.einsum("ijkl,ia,jb,kc,ld->abcd", coordinate, F, F, F, F)
	logger.debug(f"curvature_at {tuple(point)}: max |R| = {np.abs(components).max():.6g}")
	return RiemannTensor(components, tolerance=FD_VALIDATION_TOLERANCE)


@dataclass(frozen=True, eq=False)
class PointResult:
	"""Curvature at one sample point, or the reason the point was skipped."""

	point: Point
	tensor: RiemannTensor | None = None
	skipped: str | None = None


def _evaluate_point(chart: MetricChart, point: Point, step: float) -> PointResult:
	try:
		return PointResult(point=point, tensor=curvature_at(chart, point, step))
	except ChartError as e:
		logger.warning(f"skipping {point}: {e}")
		return PointResult(point=point, skipped=str(e))


def analyze_chart(chart: MetricChart, step: float = DEFAULT_STEP, threads: int = 1) -> list[PointResult]:
	"""Curvature at every sample point, in sample order regardless of ``threads``."""
	points = sample(chart)
	logger.info(f"analyzing {len(points)} points of {chart.name!r} with {threads} thread(s)")
	if threads <= 1:
		return [_evaluate_point(chart, point, step) for point in points]
	with ThreadPoolExecutor(max_workers=threads) as pool:
		return list(pool.map(lambda point: _evaluate_point(chart, point, step), points))


def snap_spectrum(spectrum: Spectrum, acceptance: float = FD_ACCEPTANCE) -> Spectrum:
	"""Zero the eigenvalues of a finite-difference spectrum that lie within its error band.

	The band is ``acceptance`` times the largest eigenvalue magnitude, and never narrower than
	``acceptance`` itself.
	"""
	values = spectrum.array
	band = acceptance * max(1.0, float(np.abs(values).max()))
	return Spectrum.from_values(np.where(np.abs(values) <= band, 0.0, values))


def spectrum_error(chart: MetricChart, point: Sequence[float], exact: Sequence[float], step: float) -> float:
	"""Largest eigenvalue deviation of the FD curvature operator from ``exact``."""
	values = eigen_spectrum(assemble_operator(curvature_at(chart, point, step))).spectrum.array
	return float(np.abs(values - np.sort(np.asarray(exact, dtype=float))).max())


def convergence_factor(
	chart: MetricChart, point: Sequence[float], exact: Sequence[float], step: float = DEFAULT_STEP
) -> float:
	"""Ratio of spectrum errors at ``step`` and ``step/2``; about 4 for second-order stencils."""
	coarse = spectrum_error(chart, point, exact, step)
	fine = spectrum_error(chart, point, exact, step / 2.0)
	logger.debug(f"convergence at {tuple(point)}: error {coarse:.3e} -> {fine:.3e}")
	return coarse / fine if fine > 0 else math.inf
