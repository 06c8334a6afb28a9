"""Reproduction suite: every numeric claim the toolkit is built on, checked end to end."""

import logging
import math
import time
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import NDArray

from . import models
from .chartengine import MetricChart, convergence_factor, curvature_at, spectrum_error
from .classify import Conclusion, Evidence, GeometryKind, betti_vanishing, classify
from .config import DEFAULT_STEP, FD_ACCEPTANCE, IDENTITY_TOLERANCE, VALIDATION_TOLERANCE
from .errors import CurvConesError
from .kahlercurv import (
	KahlerCurvatureTensor,
	assemble_kahler_operator,
	frame_coefficients,
	hermitian_basis,
	kahler_spectrum,
	orthogonal_bisectional_identity,
	quadratic_form,
	random_kahler_tensor,
	random_unitary,
)
from .lemmalab import (
	einstein_constant,
	einstein_tail_sectionals,
	lemma_sweep,
	monotonicity_counterexamples,
	nesting_counterexamples,
	pinching_bounds,
	splitting_bound,
)
from .riemcurv import assemble_operator, kernel_coefficients, scalar, vertex_kernel_sums
from .symcone import (
	ConeStatus,
	ShiftKind,
	cone_membership,
	elementary_symmetric,
	product_boundary_point,
	shift,
	shift_threshold,
)

logger = logging.getLogger(__name__)

# Constants
GOLDEN_TOLERANCE = 1e-8
SCALAR_TOLERANCE = 1e-8
F0_TOLERANCE = 1e-12
F_PRIME_TOLERANCE = 1e-6
F_DOUBLE_PRIME_TOLERANCE = 1e-5
CONVERGENCE_RANGE = (3.5, 4.5)
CONVERGENCE_STEP = 1e-2  # truncation-dominated for both reference charts
LEMMA_SIZES = range(3, 11)
SAMPLING_SIZES = (3, 6, 10)
KAHLER_IDENTITY_TENSORS = 1000

SPHERE_CHART = {
	"name": "unit 2-sphere",
	"dimension": 2,
	"coordinates": ["theta", "phi"],
	"metric": [["1", "0"], ["0", "sin(theta)^2"]],
	"samples": {"points": [[1.0, 0.5]]},
}
STEREOGRAPHIC_CHART = {
	"name": "unit 3-sphere, stereographic",
	"dimension": 3,
	"coordinates": ["x", "y", "z"],
	"metric": [
		["4/(1+x^2+y^2+z^2)^2", "0", "0"],
		["0", "4/(1+x^2+y^2+z^2)^2", "0"],
		["0", "0", "4/(1+x^2+y^2+z^2)^2"],
	],
	"samples": {"points": [[0.3, -0.2, 0.4]]},
}


def catalog_golden_spectrum() -> tuple[float, ...]:
	"""The CP² operator spectrum the catalog is checked against."""
	return models.CP2_GOLDEN_SPECTRUM


@dataclass(frozen=True)
class CheckResult:
	"""Outcome of one reproduction check."""

	name: str
	passed: bool
	statement: str
	measured: str
	elapsed: float

	def to_dict(self) -> dict[str, Any]:
		"""Report entry without the timing, which only goes to the log."""
		return {
			"name": self.name,
			"passed": self.passed,
			"statement": self.statement,
			"measured": self.measured,
		}

	def __str__(self) -> str:
		result = "PASS" if self.passed else "FAIL"
		return f"[{result}] {self.name}: {self.measured} ({self.elapsed:.2f}s)"


type Outcome = tuple[bool, str]


class ReproductionSuite:
	"""Runs every reproduction check in order.

	Args:
		samples: Random problems per (N, k) in the lemma sweeps
		draws: Rejection-sampled spectra per size in the monotonicity and nesting checks
		seed: Seed for every random generator
		golden: Lookup of the CP² reference spectrum; tests replace it to inject faults
	"""

	_instance = None

	def __init__(
		self,
		samples: int = 10_000,
		draws: int = 100_000,
		seed: int = 0,
		golden: Callable[[], tuple[float, ...]] = catalog_golden_spectrum,
	) -> None:
		self.samples = samples
		self.draws = draws
		self.seed = seed
		self.golden = golden
		self.checks: list[tuple[str, str, Callable[[], Outcome]]] = [
			("cp2-golden-spectrum", "CP² operator spectrum ∝ (0, 0, 1, 1, 1, 3)", self.check_golden_spectrum),
			("product-boundary", "S^k×S¹ sits on σ_2 = 0 with σ_1 = √(k(N−k)/(N−1))", self.check_product_boundary),
			("round-sphere", "round Sⁿ: identity operator, Interior at every α_k", self.check_round_sphere),
			("scalar-trace", "scalar curvature equals twice the operator trace", self.check_scalar_trace),
			("lemma-machinery", "interpolation f(t): values, derivatives and dichotomy", self.check_lemma_machinery),
			("monotonicity-nesting", "Γ_2⁺(α_k) grows with k and Γ_j⁺ shrinks with j", self.check_monotonicity),
			("fd-engine", "FD curvature of S² and S³ charts, second-order convergence", self.check_fd_engine),
			("kahler-suite", "Kähler identity, Fubini–Study spectra and trichotomy branches", self.check_kahler),
			("betti-table", "vanishing Betti numbers for k-positive operators", self.check_betti_table),
			("splitting-pinching", "product splitting, pinching and Einstein constants", self.check_splitting),
		]

	@classmethod
	def get_instance(cls) -> "ReproductionSuite":
		"""Get a singleton suite with the default sample sizes.

		Returns:
			ReproductionSuite: The singleton instance
		"""
		if cls._instance is None:
			cls._instance = cls()
		return cls._instance

	def run(self, names: list[str] | None = None) -> list[CheckResult]:
		"""Run the checks (all of them, or those named) and log each outcome."""
		results = []
		for name, statement, check in self.checks:
			if names is not None and name not in names:
				continue
			started = time.perf_counter()
			try:
				passed, measured = check()
			except CurvConesError as e:
				passed, measured = False, f"error: {e}"
			result = CheckResult(name, passed, statement, measured, time.perf_counter() - started)
			if result.passed:
				logger.info(str(result))
			else:
				logger.warning(str(result))
			results.append(result)
		return results

	# Checks

	def check_golden_spectrum(self) -> Outcome:
		measured = models.build(models.FubiniStudy(2)).riemannian_spectrum().array
		golden = np.asarray(self.golden(), dtype=float)
		if golden.shape != measured.shape:
			return False, f"golden spectrum has {golden.size} entries, operator has {measured.size}"
		scale = measured[-1] / golden[-1]
		error = float(np.abs(measured - scale * golden).max() / abs(scale))
		return error <= GOLDEN_TOLERANCE, f"spectrum {np.round(measured, 12).tolist()}, ratio error {error:.2e}"

	def check_product_boundary(self) -> Outcome:
		worst_sigma1 = worst_sigma2 = worst_spectrum = 0.0
		for n in range(3, 9):
			k = n - 1
			N = n * (n - 1) // 2
			spectrum = models.build(models.Product(models.RoundSphere(k), models.Flat(1))).riemannian_spectrum()
			reference = product_boundary_point(N, k)
			worst_spectrum = max(worst_spectrum, float(np.abs(spectrum.array - reference.spectrum.array).max()))
			shifted = shift(spectrum, shift_threshold(N, k, ShiftKind.RIEMANNIAN))
			worst_sigma1 = max(worst_sigma1, abs(elementary_symmetric(shifted, 1) - reference.sigma1))
			worst_sigma2 = max(worst_sigma2, abs(elementary_symmetric(shifted, 2)))
		passed = max(worst_sigma1, worst_sigma2, worst_spectrum) <= VALIDATION_TOLERANCE
		return passed, f"max |Δσ_1| {worst_sigma1:.1e}, max |σ_2| {worst_sigma2:.1e}, n = 3..8"

	def check_round_sphere(self) -> Outcome:
		worst = 0.0
		failures = []
		for n in range(3, 9):
			tensors = models.build(models.RoundSphere(n))
			operator = assemble_operator(tensors.real_tensor())
			worst = max(worst, float(np.abs(operator.entries - np.eye(operator.N)).max()))
			spectrum = tensors.riemannian_spectrum()
			for k in range(1, operator.N):
				shifted = shift(spectrum, shift_threshold(operator.N, k, ShiftKind.RIEMANNIAN))
				if cone_membership(shifted, 2).status is not ConeStatus.INTERIOR:
					failures.append(f"S^{n} at k={k}")
			verdict = classify(Evidence.collect([spectrum], GeometryKind.RIEMANNIAN, n, 2))
			if verdict.conclusion is not Conclusion.SPHERICAL_SPACE_FORM:
				failures.append(f"S^{n} classified {verdict.conclusion}")
		passed = worst <= VALIDATION_TOLERANCE and not failures
		measured = f"max |M − I| {worst:.1e}" + (f"; failures: {', '.join(failures)}" if failures else "")
		return passed, measured

	def check_scalar_trace(self) -> Outcome:
		names = ["s3", "s2xs1", "skxs1:3", "sphere:5:2", "flat:4", "cpn:2", "cp1xcp1", "hyperbolic:4"]
		tensors = [models.build(models.parse_catalog_name(name)).real_tensor() for name in names]
		tensors.append(curvature_at(MetricChart.from_dict(SPHERE_CHART), (1.0, 0.5), DEFAULT_STEP))
		tensors.append(curvature_at(MetricChart.from_dict(STEREOGRAPHIC_CHART), (0.3, -0.2, 0.4), DEFAULT_STEP))
		worst = 0.0
		for tensor in tensors:
			total = scalar(tensor)
			trace = assemble_operator(tensor).trace
			worst = max(worst, abs(total - 2.0 * trace) / max(1.0, abs(total)))
		return worst <= SCALAR_TOLERANCE, f"max relative error {worst:.1e} over {len(tensors)} tensors"

	def check_lemma_machinery(self) -> Outcome:
		problems = violations = mismatches = 0
		f0 = fp = fpp = quad = 0.0
		min_f = math.inf
		for N in LEMMA_SIZES:
			for k in range(1, N - 1):
				sweep = lemma_sweep(N, k, self.samples, seed=self.seed)
				problems += sweep.problems
				violations += sweep.violations
				mismatches += sweep.profile_mismatches
				f0 = max(f0, sweep.max_f0)
				fp = max(fp, sweep.max_f_prime_error)
				fpp = max(fpp, sweep.max_f_double_prime_error)
				quad = max(quad, sweep.max_quadratic_residual)
				min_f = min(min_f, sweep.min_f)
		passed = (
			f0 <= F0_TOLERANCE
			and fp <= F_PRIME_TOLERANCE
			and fpp <= F_DOUBLE_PRIME_TOLERANCE
			and min_f >= -VALIDATION_TOLERANCE
			and violations == 0
			and mismatches == 0
		)
		measured = (
			f"{problems} problems; |f(0)| ≤ {f0:.1e}, f′ error {fp:.1e}, f″ error {fpp:.1e}, "
			f"min f {min_f:.1e}, quadratic residual {quad:.1e}, violations {violations}"
		)
		return passed, measured

	def check_monotonicity(self) -> Outcome:
		monotone = nested = 0
		for N in SAMPLING_SIZES:
			monotone += monotonicity_counterexamples(N, self.draws, seed=self.seed)
			nested += nesting_counterexamples(N, self.draws, seed=self.seed + 1)
		measured = f"{monotone} monotonicity and {nested} nesting counterexamples in {self.draws} draws per N"
		return monotone == 0 and nested == 0, measured

	def check_fd_engine(self) -> Outcome:
		cases = [
			(MetricChart.from_dict(SPHERE_CHART), (1.0, 0.5), (1.0,)),
			(MetricChart.from_dict(STEREOGRAPHIC_CHART), (0.3, -0.2, 0.4), (1.0, 1.0, 1.0)),
		]
		errors = []
		factors = []
		for chart, point, exact in cases:
			errors.append(spectrum_error(chart, point, exact, DEFAULT_STEP))
			factors.append(convergence_factor(chart, point, exact, CONVERGENCE_STEP))
		low, high = CONVERGENCE_RANGE
		passed = max(errors) <= FD_ACCEPTANCE and all(low <= factor <= high for factor in factors)
		measured = (
			f"errors {', '.join(f'{e:.1e}' for e in errors)}; "
			f"convergence factors {', '.join(f'{f:.2f}' for f in factors)}"
		)
		return passed, measured

	def check_kahler(self) -> Outcome:
		rng = np.random.default_rng(self.seed)
		worst_identity = 0.0
		worst_frame = 0.0
		for index in range(KAHLER_IDENTITY_TENSORS):
			n = 2 + index % 3
			tensor = random_kahler_tensor(n, rng)
			i, j = rng.choice(n, size=2, replace=False)
			lhs, rhs = orthogonal_bisectional_identity(tensor, int(i), int(j))
			worst_identity = max(worst_identity, abs(lhs - rhs) / max(1.0, abs(lhs)))
			coefficients = frame_coefficients(assemble_kahler_operator(tensor.in_frame(random_unitary(n, rng))))
			norms = (np.abs(coefficients) ** 2).sum(axis=2)
			worst_frame = max(worst_frame, float(np.abs(norms - 1.0).max()))

		worst_spectrum = 0.0
		for n in range(2, 5):
			tensor = models.build(models.FubiniStudy(n)).kahler_tensor()
			measured = kahler_spectrum(tensor).array
			worst_spectrum = max(worst_spectrum, float(np.abs(measured - _brute_force_spectrum(tensor)).max()))
			expected = np.array([1.0] * (n * n - 1) + [n + 1.0]) * models.FUBINI_STUDY_SCALE
			worst_spectrum = max(worst_spectrum, float(np.abs(measured - expected).max()))

		product = models.build(models.parse_catalog_name("cp1xcp1")).kahler_spectrum()
		boundary = abs(elementary_symmetric(shift(product, shift_threshold(2, 2, ShiftKind.KAHLER)), 2))

		branches = {
			"cpn:2": Conclusion.BIHOLOMORPHIC_CPN,
			"cp1xcp1": Conclusion.CP1XCP1,
			"cflat:2": Conclusion.FLAT_TORUS,
		}
		wrong = []
		for name, expected_conclusion in branches.items():
			spectrum = models.build(models.parse_catalog_name(name)).kahler_spectrum()
			verdict = classify(Evidence.collect([spectrum], GeometryKind.KAHLER, 2, 2))
			if verdict.conclusion is not expected_conclusion:
				wrong.append(f"{name} → {verdict.conclusion}")

		passed = (
			worst_identity <= IDENTITY_TOLERANCE
			and worst_frame <= VALIDATION_TOLERANCE
			and worst_spectrum <= VALIDATION_TOLERANCE
			and boundary <= VALIDATION_TOLERANCE
			and not wrong
		)
		measured = (
			f"identity error {worst_identity:.1e} over {KAHLER_IDENTITY_TENSORS} tensors; "
			f"frame normalization error {worst_frame:.1e}; "
			f"spectrum error {worst_spectrum:.1e}; CP¹×CP¹ |σ_2| {boundary:.1e}"
			+ (f"; wrong branches: {', '.join(wrong)}" if wrong else "")
		)
		return passed, measured

	def check_betti_table(self) -> Outcome:
		mismatches = []
		for n in range(3, 11):
			for k in range(1, n):
				if k <= math.ceil(n / 2):
					expected = {p for p in range(1, n) if 1 <= p <= n - 1}
				else:
					expected = {p for p in range(1, n) if p <= n - k or k <= p <= n - 1}
				if set(betti_vanishing(n, k).indices) != expected:
					mismatches.append((n, k))
		return not mismatches, f"{len(mismatches)} mismatches over 3 ≤ n ≤ 10" + (
			f": {mismatches}" if mismatches else ""
		)

	def check_splitting(self) -> Outcome:
		real = {
			(m, n)
			for n in range(3, 13)
			for m in range(2, n)
			if m >= n - m and splitting_bound(n, m, ShiftKind.RIEMANNIAN)[1]
		}
		complex_ = {
			(m, n)
			for n in range(2, 13)
			for m in range(1, n)
			if m >= n - m and splitting_bound(n, m, ShiftKind.KAHLER)[1]
		}

		rng = np.random.default_rng(self.seed)
		formula_error = 0.0
		for _ in range(10):
			n = int(rng.integers(3, 12))
			a = float(rng.uniform(0.1, 5.0))
			low, high = pinching_bounds(n, a, ShiftKind.RIEMANNIAN)
			formula_error = max(formula_error, abs(low - (1 - 4 / n) * a), abs(high - a))
			low, high = pinching_bounds(n, a, ShiftKind.KAHLER)
			formula_error = max(formula_error, abs(low - (1 - 2 / n) * a), abs(high - a))
			formula_error = max(formula_error, abs(einstein_constant(n, a) - (n * n - n - 4) * a / n))
			formula_error = max(formula_error, abs(einstein_constant(n, a, ShiftKind.KAHLER) - a * (n - 2 / n)))

		# CP² kernel: weights per direction and the pinching of the constant-tail operator
		operator = assemble_operator(models.build(models.FubiniStudy(2)).real_tensor())
		n = operator.n
		weights = kernel_coefficients(operator, 2)
		kernel_error = max(abs(total - 4 / n) for total in vertex_kernel_sums(weights, n))
		low, high = pinching_bounds(n, 1.0)
		sectionals = einstein_tail_sectionals(operator, 1.0).values()
		pinched = all(low - VALIDATION_TOLERANCE <= s <= high + VALIDATION_TOLERANCE for s in sectionals)

		passed = (
			real == {(2, 3)}
			and complex_ == {(1, 2)}
			and formula_error <= VALIDATION_TOLERANCE
			and kernel_error <= VALIDATION_TOLERANCE
			and pinched
		)
		measured = (
			f"admissible {sorted(real)} (real), {sorted(complex_)} (Kähler); formula error {formula_error:.1e}; "
			f"CP² kernel weight error {kernel_error:.1e}; pinched {pinched}"
		)
		return passed, measured


def _brute_force_spectrum(tensor: KahlerCurvatureTensor) -> NDArray[np.float64]:
	"""Eigenvalues of the Kähler operator rebuilt entry by entry by polarizing the quadratic form."""
	basis, _ = hermitian_basis(tensor.n)
	size = len(basis)
	matrix = np.zeros((size, size))
	for a in range(size):
		for b in range(a, size):
			value = 0.5 * (
				quadratic_form(tensor, basis[a] + basis[b])
				- quadratic_form(tensor, basis[a])
				- quadratic_form(tensor, basis[b])
			)
			matrix[a, b] = matrix[b, a] = value
	return np.linalg.eigvalsh(matrix)


def results_summary(results: list[CheckResult]) -> dict[str, Any]:
	"""Counts for a results list: total, passed and the names of failed checks."""
	failed = [result.name for result in results if not result.passed]
	return {"total": len(results), "passed": len(results) - len(failed), "failed": failed}
