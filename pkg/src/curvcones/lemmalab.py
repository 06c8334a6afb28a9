"""Numerical checks of the interpolation argument behind the k-positivity dichotomy.

For a spectrum Λ normalized to T = N − k, the path A_t = tΛ_{α_k} + (1 − t)A_0 runs from the
S^k×S¹ reference point A_0 = (a^k, b^{N−k}) to the shifted spectrum, and f(t) = σ_2(A_t) is an
exact quadratic with f(0) = 0.
"""

import logging
import math
import time
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import DomainError, HypothesisError, RangeError
from .riemcurv import CurvatureOperatorMatrix, kernel_coefficients
from .symcone import (
	DichotomyCase,
	ShiftKind,
	ShiftParameter,
	Spectrum,
	cone_masks,
	dichotomy_batch,
	elementary_symmetric,
	shift_threshold,
)

logger = logging.getLogger(__name__)

# Constants
FD_STEP = 1e-4
HYPOTHESIS_TOLERANCE = 1e-10
PROFILE_TOLERANCE = 1e-8
MIN_RIEMANNIAN_N = 3
MIN_KAHLER_N = 2
RIEMANNIAN_SPLITTING_LIMIT = 2
KAHLER_SPLITTING_LIMIT = 1
SWEEP_CHUNK = 2000


@dataclass(frozen=True)
class InterpolationProblem:
	"""A normalized spectrum with its shift and reference endpoint."""

	spectrum: Spectrum
	k: int
	alpha: ShiftParameter
	scale: float = 1.0

	@classmethod
	def normalize(cls, spectrum: Spectrum, k: int) -> "InterpolationProblem":
		"""Rescale Λ by (N − k)/T.

		Raises:
			RangeError: If k is outside 1..N−2
			DomainError: If T ≤ 0
		"""
		N = spectrum.length
		if not 1 <= k <= N - 2:
			msg = f"k={k} out of range 1..{N - 2}"
			raise RangeError(msg)
		if spectrum.total <= 0:
			msg = f"interpolation needs a positive eigenvalue sum, got T = {spectrum.total:.6g}"
			raise DomainError(msg)
		scale = (N - k) / spectrum.total
		alpha = shift_threshold(N, k, ShiftKind.RIEMANNIAN)
		return cls(spectrum=spectrum.scaled(scale), k=k, alpha=alpha, scale=scale)

	@property
	def N(self) -> int:
		return self.spectrum.length

	@property
	def a(self) -> float:
		return -self.alpha.alpha * (self.N - self.k)

	@property
	def b(self) -> float:
		return self.a + 1.0

	@property
	def shifted(self) -> NDArray[np.float64]:
		return self.spectrum.array - self.alpha.alpha * (self.N - self.k)

	@property
	def endpoint(self) -> NDArray[np.float64]:
		return np.array([self.a] * self.k + [self.b] * (self.N - self.k))


def f_value(problem: InterpolationProblem, t: float) -> float:
	"""f(t) = σ_2(tΛ_{α_k} + (1 − t)A_0).

	Raises:
		RangeError: If t is outside [0, 1]
	"""
	if not 0.0 <= t <= 1.0:
		msg = f"t={t} out of range [0, 1]"
		raise RangeError(msg)
	return elementary_symmetric(t * problem.shifted + (1.0 - t) * problem.endpoint, 2)


def f_prime_zero(problem: InterpolationProblem) -> float:
	"""f′(0) = λ_1 + … + λ_k."""
	return math.fsum(problem.spectrum.values[: problem.k])


def f_double_prime_zero(problem: InterpolationProblem) -> float:
	"""f″(0) = −Σ_{i≤k} λ_i² − Σ_{j>k} (λ_j − 1)², valid when λ_1 + … + λ_k = 0.

	Raises:
		HypothesisError: If the head sum is not zero within 1e-10
	"""
	head_sum = f_prime_zero(problem)
	if abs(head_sum) > HYPOTHESIS_TOLERANCE:
		msg = f"f''(0) closed form needs λ1 + … + λk = 0, got {head_sum:.3e}"
		raise HypothesisError(msg)
	values = problem.spectrum.values
	return -math.fsum(v * v for v in values[: problem.k]) - math.fsum((v - 1.0) ** 2 for v in values[problem.k :])


def f_prime_fd(problem: InterpolationProblem, step: float = FD_STEP) -> float:
	"""Second-order one-sided difference (−3f(0) + 4f(h) − f(2h)) / 2h."""
	return (-3.0 * f_value(problem, 0.0) + 4.0 * f_value(problem, step) - f_value(problem, 2.0 * step)) / (2.0 * step)


def f_double_prime_fd(problem: InterpolationProblem, step: float = FD_STEP) -> float:
	"""(f(0) − 2f(h) + f(2h)) / h²."""
	return (f_value(problem, 0.0) - 2.0 * f_value(problem, step) + f_value(problem, 2.0 * step)) / step**2


def quadratic_residual(problem: InterpolationProblem, probe: float = 0.25) -> float:
	"""Deviation at ``probe`` of the parabola through f(0), f(1/2), f(1)."""
	f0, f_half, f1 = f_value(problem, 0.0), f_value(problem, 0.5), f_value(problem, 1.0)
	# Lagrange basis on nodes 0, 1/2, 1
	t = probe
	fitted = f0 * 2.0 * (t - 0.5) * (t - 1.0) - f_half * 4.0 * t * (t - 1.0) + f1 * 2.0 * t * (t - 0.5)
	return abs(f_value(problem, t) - fitted)


def has_degenerate_profile(problem: InterpolationProblem, tolerance: float = PROFILE_TOLERANCE) -> bool:
	"""First k eigenvalues zero and the tail constant."""
	values = problem.spectrum.values
	head, tail = values[: problem.k], values[problem.k :]
	return all(abs(v) <= tolerance for v in head) and max(tail) - min(tail) <= tolerance


def _kind(kind: ShiftKind | str) -> ShiftKind:
	kind = ShiftKind(kind)
	if kind is ShiftKind.EXPLICIT:
		msg = "expected 'riemannian' or 'kahler'"
		raise RangeError(msg)
	return kind


def _check_dimension(n: int, kind: ShiftKind) -> None:
	minimum = MIN_RIEMANNIAN_N if kind is ShiftKind.RIEMANNIAN else MIN_KAHLER_N
	if n < minimum:
		msg = f"{kind} pinching needs n >= {minimum}, got n = {n}"
		raise RangeError(msg)


def pinching_bounds(n: int, a: float, kind: ShiftKind | str = ShiftKind.RIEMANNIAN) -> tuple[float, float]:
	"""Sectional (or bisectional) pinching for Einstein metrics with kernel 2 and tail a.

	((1 − 4/n)a, a) in the Riemannian case, ((1 − 2/n)a, a) in the Kähler case.
	"""
	kind = _kind(kind)
	_check_dimension(n, kind)
	if not a > 0:
		msg = f"tail eigenvalue must be positive, got {a}"
		raise RangeError(msg)
	factor = 4.0 if kind is ShiftKind.RIEMANNIAN else 2.0
	return (1.0 - factor / n) * a, a


def einstein_constant(n: int, a: float, kind: ShiftKind | str = ShiftKind.RIEMANNIAN) -> float:
	"""(n² − n − 4)a/n in the Riemannian case, a(n − 2/n) in the Kähler case."""
	kind = _kind(kind)
	_check_dimension(n, kind)
	if not a > 0:
		msg = f"tail eigenvalue must be positive, got {a}"
		raise RangeError(msg)
	if kind is ShiftKind.RIEMANNIAN:
		return (n * n - n - 4) * a / n
	return a * (n - 2.0 / n)


def splitting_bound(n: int, m: int, kind: ShiftKind | str = ShiftKind.RIEMANNIAN) -> tuple[int, bool]:
	"""m(n − m) and whether a product with factor dimensions (m, n − m) can carry a kernel of dimension 2."""
	kind = _kind(kind)
	if not 1 <= m <= n - 1:
		msg = f"factor dimension m={m} out of range 1..{n - 1}"
		raise RangeError(msg)
	product = m * (n - m)
	limit = RIEMANNIAN_SPLITTING_LIMIT if kind is ShiftKind.RIEMANNIAN else KAHLER_SPLITTING_LIMIT
	return product, product <= limit


def einstein_tail_sectionals(
	matrix: CurvatureOperatorMatrix, a: float, kernel_dim: int = 2
) -> dict[tuple[int, int], float]:
	"""Sectional curvatures a·Σ_{α>kernel_dim}(c_{ij}^α)² of the operator with the same kernel and tail a."""
	weights = kernel_coefficients(matrix, kernel_dim)
	return {plane: a * (1.0 - weight) for plane, weight in weights.items()}


# Batch sweeps


@dataclass(frozen=True)
class LemmaSweep:
	"""Worst-case figures over a batch of certified interpolation problems."""

	N: int
	k: int
	problems: int
	max_f0: float
	max_f_prime_error: float
	max_f_double_prime_error: float
	hypothesis_problems: int
	min_f: float
	max_quadratic_residual: float
	violations: int
	profile_mismatches: int
	elapsed: float


def _sigma2_rows(values: NDArray[np.float64]) -> NDArray[np.float64]:
	total = values.sum(axis=-1)
	return 0.5 * (total * total - (values * values).sum(axis=-1))


def _normalize_rows(values: NDArray[np.float64], N: int, k: int) -> NDArray[np.float64]:
	totals = values.sum(axis=1)
	values = values[totals > 0]
	return values * ((N - k) / values.sum(axis=1))[:, None]


def certified_problems(N: int, k: int, count: int, rng: np.random.Generator) -> NDArray[np.float64]:
	"""Normalized sorted spectra whose α_k shift lies in the closure of Γ_2⁺.

	Half are perturbations of the reference point (0^k, 1^{N−k}), half of the constant spectrum; a
	handful of exact reference points are always included.
	"""
	alpha = shift_threshold(N, k, ShiftKind.RIEMANNIAN).alpha
	reference = np.array([0.0] * k + [1.0] * (N - k))
	found = [np.tile(reference, (min(count, 8), 1))]
	have = found[0].shape[0]
	while have < count:
		batch = 4 * (count - have) + 64
		scales = rng.uniform(1e-3, 0.3, size=(batch, 1))
		centres = np.where(rng.random((batch, 1)) < 0.5, reference, 1.0)
		candidates = _normalize_rows(centres + scales * rng.standard_normal((batch, N)), N, k)
		_, closure = cone_masks(candidates - alpha * (N - k), 2, tolerance=0.0)
		accepted = np.sort(candidates[closure], axis=1)
		found.append(accepted)
		have += accepted.shape[0]
	return np.concatenate(found)[:count]


def hypothesis_problems(N: int, k: int, count: int, rng: np.random.Generator) -> NDArray[np.float64]:
	"""Normalized spectra whose first k entries sum to zero (not certified, not sorted)."""
	head = rng.uniform(-0.3, 0.0, size=(count, k))
	head[:, -1] = -head[:, :-1].sum(axis=1)
	tail = 1.0 + rng.uniform(-0.2, 0.2, size=(count, N - k))
	tail += (1.0 - tail.mean(axis=1))[:, None]
	return np.concatenate([head, tail], axis=1)


def lemma_sweep(N: int, k: int, count: int, seed: int = 0, grid: int = 101) -> LemmaSweep:
	"""Check f(0) = 0, f′(0), f″(0), f ≥ 0 on [0, 1], exact quadraticity and the dichotomy on a batch."""
	started = time.perf_counter()
	rng = np.random.default_rng(seed)
	alpha = shift_threshold(N, k, ShiftKind.RIEMANNIAN).alpha
	endpoint = np.array([-alpha * (N - k)] * k + [1.0 - alpha * (N - k)] * (N - k))
	ts = np.linspace(0.0, 1.0, grid)
	h = FD_STEP

	spectra = certified_problems(N, k, count, rng)
	max_f0 = max_fp = max_quad = 0.0
	min_f = math.inf
	mismatches = 0
	for start in range(0, spectra.shape[0], SWEEP_CHUNK):
		chunk = spectra[start : start + SWEEP_CHUNK]
		shifted = chunk - alpha * (N - k)
		path = ts[None, :, None] * shifted[:, None, :] + (1.0 - ts)[None, :, None] * endpoint[None, None, :]
		f = _sigma2_rows(path)
		min_f = min(min_f, float(f.min()))
		max_f0 = max(max_f0, float(np.abs(f[:, 0]).max()))

		probes = np.array([h, 2.0 * h, 0.25, 0.5])
		at = _sigma2_rows(probes[None, :, None] * shifted[:, None, :] + (1.0 - probes)[None, :, None] * endpoint)
		fd = (-3.0 * f[:, 0] + 4.0 * at[:, 0] - at[:, 1]) / (2.0 * h)
		closed = chunk[:, :k].sum(axis=1)
		max_fp = max(max_fp, float(np.abs(fd - closed).max()))

		# parabola through t = 0, 1/2, 1 evaluated at 1/4
		fitted = 0.375 * f[:, 0] + 0.75 * at[:, 3] - 0.125 * f[:, -1]
		max_quad = max(max_quad, float(np.abs(at[:, 2] - fitted).max()))

		flat_start = np.abs(closed) <= HYPOTHESIS_TOLERANCE
		if flat_start.any():
			rows = chunk[flat_start]
			degenerate = np.all(np.abs(rows[:, :k]) <= PROFILE_TOLERANCE, axis=1) & (
				rows[:, k:].max(axis=1) - rows[:, k:].min(axis=1) <= PROFILE_TOLERANCE
			)
			mismatches += int((~degenerate).sum())

	violations = int((dichotomy_batch(spectra, k) == DichotomyCase.VIOLATION.value).sum())

	extra = hypothesis_problems(N, k, max(count // 10, 10), rng)
	shifted = extra - alpha * (N - k)
	probes = np.array([0.0, h, 2.0 * h])
	at = _sigma2_rows(probes[None, :, None] * shifted[:, None, :] + (1.0 - probes)[None, :, None] * endpoint)
	fd2 = (at[:, 0] - 2.0 * at[:, 1] + at[:, 2]) / h**2
	closed2 = -(extra[:, :k] ** 2).sum(axis=1) - ((extra[:, k:] - 1.0) ** 2).sum(axis=1)
	max_fpp = float(np.abs(fd2 - closed2).max())

	sweep = LemmaSweep(
		N=N,
		k=k,
		problems=int(spectra.shape[0]),
		max_f0=max_f0,
		max_f_prime_error=max_fp,
		max_f_double_prime_error=max_fpp,
		hypothesis_problems=int(extra.shape[0]),
		min_f=min_f,
		max_quadratic_residual=max_quad,
		violations=violations,
		profile_mismatches=mismatches,
		elapsed=time.perf_counter() - started,
	)
	logger.debug(f"lemma sweep: {sweep}")
	return sweep


def monotonicity_counterexamples(N: int, count: int, seed: int = 0) -> int:
	"""Spectra in Γ_2⁺(α_{k1}) but not in Γ_2⁺(α_{k2}) for some k1 ≤ k2 ≤ N − 2."""
	rng = np.random.default_rng(seed)
	spectra = 1.0 + rng.uniform(0.05, 2.0, size=(count, 1)) * rng.standard_normal((count, N))
	totals = spectra.sum(axis=1, keepdims=True)
	interior = []
	for k in range(1, N - 1):
		alpha = shift_threshold(N, k, ShiftKind.RIEMANNIAN).alpha
		interior.append(cone_masks(spectra - alpha * totals, 2)[0])
	counterexamples = 0
	for k1 in range(len(interior)):
		for k2 in range(k1 + 1, len(interior)):
			counterexamples += int((interior[k1] & ~interior[k2]).sum())
	logger.debug(f"monotonicity N={N}: {counterexamples} counterexamples in {count} spectra")
	return counterexamples


def nesting_counterexamples(N: int, count: int, seed: int = 0) -> int:
	"""Spectra Interior for Γ_{j2}⁺ but not for some Γ_{j1}⁺ with j1 ≤ j2."""
	rng = np.random.default_rng(seed)
	spectra = rng.uniform(-0.5, 2.0, size=(count, N))
	interior = [cone_masks(spectra, j)[0] for j in range(1, N + 1)]
	counterexamples = 0
	for j2 in range(N):
		for j1 in range(j2):
			counterexamples += int((interior[j2] & ~interior[j1]).sum())
	return counterexamples
