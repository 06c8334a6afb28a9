"""Elementary symmetric functions, shift thresholds and shifted cone membership.

A spectrum Λ = (λ_1 ≤ … ≤ λ_N) with total T = Σλ_i is shifted to Λ_α = Λ − αT(1, …, 1).
Membership of Λ_α in Γ_j⁺ = {σ_1 > 0, …, σ_j > 0} is reported as a `ConeVerdict` with an
absolute tolerance on the σ values.
"""

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .config import DEFAULT_TOLERANCE
from .errors import ConsistencyError, DomainError, RangeError

logger = logging.getLogger(__name__)

# Constants
MIN_RIEMANNIAN_SIZE = 3
MIN_KAHLER_DIMENSION = 2


class ShiftKind(StrEnum):
	"""Where a shift parameter comes from."""

	RIEMANNIAN = "riemannian"
	KAHLER = "kahler"
	EXPLICIT = "explicit"


class ConeStatus(StrEnum):
	"""Position of a point relative to a cone Γ_j⁺."""

	INTERIOR = "Interior"
	BOUNDARY = "Boundary"
	OUTSIDE = "Outside"


class DichotomyCase(StrEnum):
	"""Outcome of the k-positivity dichotomy on a certified spectrum."""

	STRICTLY_POSITIVE_SUM = "StrictlyPositiveSum"
	DEGENERATE_EQUAL_TAIL = "DegenerateEqualTail"
	VIOLATION = "Violation"


@dataclass(frozen=True)
class Spectrum:
	"""Eigenvalues of a curvature operator, stored in non-decreasing order."""

	values: tuple[float, ...]
	total: float = field(init=False)

	def __post_init__(self) -> None:
		"""Sort the values and cache their sum."""
		values = tuple(sorted(float(v) for v in self.values))
		if not values:
			msg = "a spectrum needs at least one eigenvalue"
			raise RangeError(msg)
		if not all(math.isfinite(v) for v in values):
			msg = f"spectrum values must be finite, got {values}"
			raise RangeError(msg)
		object.__setattr__(self, "values", values)
		object.__setattr__(self, "total", math.fsum(values))

	@classmethod
	def from_values(cls, values: Iterable[float] | ArrayLike) -> "Spectrum":
		"""Build a spectrum from any sequence or array of reals."""
		return cls(tuple(np.asarray(values, dtype=float).ravel().tolist()))

	@property
	def length(self) -> int:
		return len(self.values)

	@property
	def array(self) -> NDArray[np.float64]:
		return np.asarray(self.values, dtype=float)

	def scaled(self, factor: float) -> "Spectrum":
		"""Return the spectrum multiplied by ``factor``."""
		return Spectrum(tuple(factor * v for v in self.values))

	def __len__(self) -> int:
		return len(self.values)


@dataclass(frozen=True)
class ShiftParameter:
	"""A shift α together with its provenance.

	``size`` is the length of the spectra the shift is calibrated for (N, or n² in the Kähler case).
	"""

	alpha: float
	kind: ShiftKind
	size: int | None = None
	k: int | None = None

	def __post_init__(self) -> None:
		"""Check 0 ≤ α and αN < 1."""
		if not math.isfinite(self.alpha) or self.alpha < 0:
			msg = f"shift parameter must be a non-negative real, got {self.alpha}"
			raise RangeError(msg)
		if self.size is not None and self.alpha * self.size >= 1:
			msg = f"shift parameter {self.alpha} violates alpha * N < 1 for N = {self.size}"
			raise RangeError(msg)

	@classmethod
	def explicit(cls, alpha: float, size: int | None = None) -> "ShiftParameter":
		"""Wrap a caller-chosen α."""
		return cls(alpha=float(alpha), kind=ShiftKind.EXPLICIT, size=size)


@dataclass(frozen=True)
class ConeVerdict:
	"""Classification of σ_1..σ_j against a tolerance."""

	status: ConeStatus
	sigmas: tuple[float, ...]
	tolerance: float

	@classmethod
	def from_sigmas(cls, sigmas: Sequence[float], tolerance: float) -> "ConeVerdict":
		"""Classify σ values: Interior if all exceed the tolerance, Boundary if none is below -tolerance."""
		sigmas = tuple(float(s) for s in sigmas)
		if all(s > tolerance for s in sigmas):
			status = ConeStatus.INTERIOR
		elif all(s >= -tolerance for s in sigmas):
			status = ConeStatus.BOUNDARY
		else:
			status = ConeStatus.OUTSIDE
		return cls(status=status, sigmas=sigmas, tolerance=tolerance)

	@property
	def in_closure(self) -> bool:
		return self.status is not ConeStatus.OUTSIDE


@dataclass(frozen=True)
class BoundaryPoint:
	"""The S^k×S¹ reference spectrum (0^k, 1^{N-k}) and its shift by α_k."""

	spectrum: Spectrum
	shifted: Spectrum
	a: float
	b: float
	sigma1: float


def _as_array(values: "Spectrum | Sequence[float] | ArrayLike") -> NDArray[np.float64]:
	if isinstance(values, Spectrum):
		return values.array
	return np.asarray(values, dtype=float).ravel()


def _recurrence(values: NDArray[np.float64], j: int) -> NDArray[np.float64]:
	"""Run e_i ← e_i + v·e_{i-1} over the last axis; returns σ_0..σ_j for every row."""
	rows = values.reshape(-1, values.shape[-1])
	sigmas = np.zeros((rows.shape[0], j + 1))
	sigmas[:, 0] = 1.0
	for column in rows.T:
		sigmas[:, 1:] = sigmas[:, 1:] + column[:, None] * sigmas[:, :-1]
	return sigmas


def elementary_symmetric(values: "Spectrum | Sequence[float] | ArrayLike", j: int) -> float:
	"""Evaluate σ_j by the one-row recurrence.

	Args:
		values: The vector (a spectrum or any sequence of reals)
		j: Index with 0 ≤ j ≤ len(values)

	Returns:
		σ_j(values); σ_0 = 1

	Raises:
		RangeError: If j is out of range
	"""
	array = _as_array(values)
	if not 0 <= j <= array.size:
		msg = f"index j={j} out of range 0..{array.size}"
		raise RangeError(msg)
	if j == 0:
		return 1.0
	return float(_recurrence(array, j)[0, j])


def elementary_symmetric_batch(values: ArrayLike, j: int) -> NDArray[np.float64]:
	"""Evaluate σ_0..σ_j for every row of a 2-D array; returns shape (rows, j + 1)."""
	array = np.atleast_2d(np.asarray(values, dtype=float))
	if not 0 <= j <= array.shape[-1]:
		msg = f"index j={j} out of range 0..{array.shape[-1]}"
		raise RangeError(msg)
	return _recurrence(array, j)


def sigma2_from_moments(values: "Spectrum | Sequence[float] | ArrayLike") -> float:
	"""σ_2 via 2σ_2 = σ_1² − Σλ²."""
	array = _as_array(values)
	return 0.5 * (float(array.sum()) ** 2 - float(np.dot(array, array)))


def shift_threshold(dim_param: int, k: int, kind: ShiftKind | str) -> ShiftParameter:
	"""Return α_k (Riemannian, dim_param = N) or β_k (Kähler, dim_param = n, spectra of length n²).

	Both are 1/N − (1/N)·√(k/((N−1)(N−k))), with N replaced by n² in the Kähler case.

	Raises:
		DomainError: If N < 3 (Riemannian) or n < 2 (Kähler)
		RangeError: If k is outside 1..N−1
	"""
	kind = ShiftKind(kind)
	if kind is ShiftKind.RIEMANNIAN:
		if dim_param < MIN_RIEMANNIAN_SIZE:
			msg = f"Riemannian shift needs N >= {MIN_RIEMANNIAN_SIZE}, got N = {dim_param}"
			raise DomainError(msg)
		size = dim_param
	elif kind is ShiftKind.KAHLER:
		if dim_param < MIN_KAHLER_DIMENSION:
			msg = f"Kähler shift needs n >= {MIN_KAHLER_DIMENSION}, got n = {dim_param}"
			raise DomainError(msg)
		size = dim_param * dim_param
	else:
		msg = "explicit shifts are built with ShiftParameter.explicit"
		raise DomainError(msg)

	if not 1 <= k <= size - 1:
		msg = f"k={k} out of range 1..{size - 1}"
		raise RangeError(msg)

	alpha = (1.0 - math.sqrt(k / ((size - 1) * (size - k)))) / size
	return ShiftParameter(alpha=alpha, kind=kind, size=size, k=k)


def shift(spectrum: Spectrum, alpha: ShiftParameter | float) -> Spectrum:
	"""Return Λ − αT(1, …, 1); the total of the result is (1 − αN)T.

	Raises:
		ConsistencyError: If a calibrated shift is applied to a spectrum of another length
	"""
	if isinstance(alpha, ShiftParameter):
		if alpha.kind is not ShiftKind.EXPLICIT and alpha.size != spectrum.length:
			msg = f"shift calibrated for N = {alpha.size} applied to a spectrum of length {spectrum.length}"
			raise ConsistencyError(msg)
		value = alpha.alpha
	else:
		value = float(alpha)
	if value == 0.0:
		return spectrum
	offset = value * spectrum.total
	return Spectrum(tuple(v - offset for v in spectrum.values))


def shift_batch(values: ArrayLike, alpha: float) -> NDArray[np.float64]:
	"""Shift every row of a 2-D array by α times its own total."""
	array = np.atleast_2d(np.asarray(values, dtype=float))
	return array - alpha * array.sum(axis=1, keepdims=True)


def shifted_sigma_closed_form(spectrum: Spectrum, alpha: float) -> tuple[float, float]:
	"""σ_1 and σ_2 of Λ_α from T and Σλ² alone.

	σ_1 = (1 − Nα)T and 2σ_2 = T²(1 − 2(N−1)α + N(N−1)α²) − Σλ².
	"""
	N = spectrum.length
	T = spectrum.total
	squares = math.fsum(v * v for v in spectrum.values)
	sigma1 = (1.0 - N * alpha) * T
	sigma2 = 0.5 * (T * T * (1.0 - 2.0 * (N - 1) * alpha + N * (N - 1) * alpha * alpha) - squares)
	return sigma1, sigma2


def cone_membership(spectrum: Spectrum, j: int, tolerance: float = DEFAULT_TOLERANCE) -> ConeVerdict:
	"""Classify a spectrum against Γ_j⁺.

	Raises:
		RangeError: If j is outside 1..N or the tolerance is not positive
	"""
	if not 1 <= j <= spectrum.length:
		msg = f"cone index j={j} out of range 1..{spectrum.length}"
		raise RangeError(msg)
	if not tolerance > 0:
		msg = f"tolerance must be positive, got {tolerance}"
		raise RangeError(msg)
	sigmas = _recurrence(spectrum.array, j)[0, 1:]
	return ConeVerdict.from_sigmas(sigmas.tolist(), tolerance)


def cone_masks(values: ArrayLike, j: int, tolerance: float = DEFAULT_TOLERANCE) -> tuple[NDArray, NDArray]:
	"""Vectorized membership: (interior mask, closure mask) for every row."""
	sigmas = elementary_symmetric_batch(values, j)[:, 1:]
	interior = np.all(sigmas > tolerance, axis=1)
	closure = np.all(sigmas >= -tolerance, axis=1)
	return interior, closure


def k_smallest_sum(spectrum: Spectrum, k: int) -> float:
	"""λ_1 + … + λ_k, the minimum over all k-element sub-sums.

	Raises:
		RangeError: If k is outside 1..N
	"""
	if not 1 <= k <= spectrum.length:
		msg = f"k={k} out of range 1..{spectrum.length}"
		raise RangeError(msg)
	return math.fsum(spectrum.values[:k])


def dichotomy_check(spectrum: Spectrum, k: int, tolerance: float = DEFAULT_TOLERANCE) -> DichotomyCase:
	"""Decide which side of the k-positivity dichotomy a certified spectrum falls on.

	The caller certifies Λ_{α_k} ∈ closure(Γ_2⁺). Then either λ_1 + … + λ_k > 0, or the first k
	eigenvalues vanish and the remaining ones are equal and non-negative. ``Violation`` means
	neither holds, which never happens on a correctly certified input.

	Raises:
		RangeError: If k is outside 1..N−1
	"""
	if not 1 <= k <= spectrum.length - 1:
		msg = f"k={k} out of range 1..{spectrum.length - 1}"
		raise RangeError(msg)

	head = spectrum.values[:k]
	tail = spectrum.values[k:]
	if math.fsum(head) > tolerance:
		return DichotomyCase.STRICTLY_POSITIVE_SUM
	if all(abs(v) <= tolerance for v in head) and tail[-1] - tail[0] <= tolerance and tail[0] >= -tolerance:
		return DichotomyCase.DEGENERATE_EQUAL_TAIL

	logger.warning(f"dichotomy violated for k={k}: {spectrum.values}")
	return DichotomyCase.VIOLATION


def dichotomy_batch(values: ArrayLike, k: int, tolerance: float = DEFAULT_TOLERANCE) -> NDArray[np.str_]:
	"""Row-wise `dichotomy_check` on a 2-D array of spectra; rows are sorted first."""
	array = np.sort(np.atleast_2d(np.asarray(values, dtype=float)), axis=1)
	if not 1 <= k <= array.shape[1] - 1:
		msg = f"k={k} out of range 1..{array.shape[1] - 1}"
		raise RangeError(msg)
	head, tail = array[:, :k], array[:, k:]
	positive = head.sum(axis=1) > tolerance
	degenerate = (
		np.all(np.abs(head) <= tolerance, axis=1)
		& (tail[:, -1] - tail[:, 0] <= tolerance)
		& (tail[:, 0] >= -tolerance)
	)
	cases = np.full(array.shape[0], DichotomyCase.VIOLATION.value, dtype="<U32")
	cases[degenerate] = DichotomyCase.DEGENERATE_EQUAL_TAIL.value
	cases[positive] = DichotomyCase.STRICTLY_POSITIVE_SUM.value
	return cases


def product_boundary_point(size: int, k: int) -> BoundaryPoint:
	"""Spectrum of S^k×S¹ type, (0^k, 1^{N−k}), with its α_k shift (a^k, b^{N−k}).

	a = −α_k(N−k), b = a + 1 and σ_1 of the shifted point equals √(k(N−k)/(N−1)).
	"""
	alpha = shift_threshold(size, k, ShiftKind.RIEMANNIAN)
	spectrum = Spectrum((0.0,) * k + (1.0,) * (size - k))
	a = -alpha.alpha * (size - k)
	return BoundaryPoint(
		spectrum=spectrum,
		shifted=shift(spectrum, alpha),
		a=a,
		b=a + 1.0,
		sigma1=math.sqrt(k * (size - k) / (size - 1)),
	)
