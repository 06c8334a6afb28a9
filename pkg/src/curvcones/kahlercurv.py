"""Kähler curvature tensors and the Kähler curvature operator restricted to u(n).

Components are R_{ij̄kl̄} = R(e_i, ē_j, e_k, ē_l) in a unitary frame. A (1,1)-form is identified
with its Hermitian coefficient matrix A and the operator is the real quadratic form

	Q(A) = Σ R_{ij̄kl̄} A_ij A_kl

on the space of Hermitian matrices, written in the orthonormal basis

	E_ii,  (E_ij + E_ji)/√2,  i(E_ij − E_ji)/√2   (i < j)

with the n diagonal units first and then one (real, imaginary) pair per lexicographic (i, j).
Under this pairing e_i∧ē_j has diagonal value R_{ij̄jī}.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from functools import cache

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .config import IDENTITY_TOLERANCE, VALIDATION_TOLERANCE
from .errors import ArgumentError, DomainError, PreconditionError, RangeError, ValidationError
from .riemcurv import eigen_spectrum
from .symcone import Spectrum

logger = logging.getLogger(__name__)

# Constants
MIN_COMPLEX_DIMENSION = 1


@cache
def hermitian_basis(n: int) -> tuple[NDArray[np.complex128], tuple[str, ...]]:
	"""Orthonormal basis of n×n Hermitian matrices with human readable labels."""
	basis: list[NDArray[np.complex128]] = []
	labels: list[str] = []
	for i in range(n):
		unit = np.zeros((n, n), dtype=complex)
		unit[i, i] = 1.0
		basis.append(unit)
		labels.append(f"e{i}∧ē{i}")
	for i, j in itertools.combinations(range(n), 2):
		real = np.zeros((n, n), dtype=complex)
		real[i, j] = real[j, i] = 1.0 / math.sqrt(2.0)
		imag = np.zeros((n, n), dtype=complex)
		imag[i, j] = 1j / math.sqrt(2.0)
		imag[j, i] = -1j / math.sqrt(2.0)
		basis.extend((real, imag))
		labels.extend((f"re({i},{j})", f"im({i},{j})"))
	stacked = np.stack(basis)
	stacked.setflags(write=False)
	return stacked, tuple(labels)


def kahler_symmetry_residuals(components: NDArray[np.complex128]) -> dict[str, float]:
	"""Largest violation of each Kähler symmetry, relative to the largest component."""
	R = components
	scale = float(np.abs(R).max()) if R.size else 0.0
	scale = scale if scale > 0 else 1.0
	residuals = {
		"first/third index symmetry": np.abs(R - R.transpose(2, 1, 0, 3)).max(),
		"second/fourth index symmetry": np.abs(R - R.transpose(0, 3, 2, 1)).max(),
		"hermitian symmetry": np.abs(R - np.conj(R.transpose(1, 0, 3, 2))).max(),
	}
	return {name: float(value) / scale for name, value in residuals.items()}


@dataclass(frozen=True, eq=False)
class KahlerCurvatureTensor:
	"""Components R_{ij̄kl̄} at one point in a unitary frame."""

	components: NDArray[np.complex128]
	tolerance: float = VALIDATION_TOLERANCE

	def __post_init__(self) -> None:
		"""Validate shape and Kähler symmetries; the stored array is read-only."""
		components = np.array(self.components, dtype=complex)
		if components.ndim != 4 or len(set(components.shape)) != 1:  # noqa: PLR2004
			msg = f"Kähler components must have shape (n, n, n, n), got {components.shape}"
			raise DomainError(msg)
		if components.shape[0] < MIN_COMPLEX_DIMENSION:
			msg = "Kähler tensors need n >= 1"
			raise DomainError(msg)

		residuals = kahler_symmetry_residuals(components)
		worst = max(residuals, key=residuals.__getitem__)
		if residuals[worst] > self.tolerance:
			msg = f"Kähler tensor violates {worst}: residual {residuals[worst]:.3e} > {self.tolerance:.1e}"
			raise ValidationError(msg, residual=residuals[worst], identity=worst)

		components.setflags(write=False)
		object.__setattr__(self, "components", components)

	@property
	def n(self) -> int:
		return self.components.shape[0]

	@property
	def real_size(self) -> int:
		return self.n * self.n

	def in_frame(self, frame: ArrayLike) -> "KahlerCurvatureTensor":
		"""Express the tensor in the unitary frame whose vectors are the columns of ``frame``."""
		U = np.asarray(frame, dtype=complex)
		V = np.conj(U)
		rotated = np.einsum("ijkl,ia,jb,kc,ld->abcd", self.components, U, V, U, V)
		return KahlerCurvatureTensor(rotated, self.tolerance)


@dataclass(frozen=True, eq=False)
class KahlerOperatorMatrix:
	"""Real symmetric n²×n² matrix of the Kähler curvature operator in the Hermitian basis."""

	n: int
	entries: NDArray[np.float64]

	@property
	def size(self) -> int:
		return self.entries.shape[0]

	@property
	def labels(self) -> tuple[str, ...]:
		return hermitian_basis(self.n)[1]

	@property
	def trace(self) -> float:
		return float(np.trace(self.entries))


@dataclass(frozen=True)
class ObcReport:
	"""Outcome of checking 4R_{iījj̄} ≥ 2(ρ_1 + ρ_2) over a set of unitary frames."""

	rho_sum: float
	min_margin: float
	frames_checked: int
	pairs_checked: int
	tolerance: float

	@property
	def passed(self) -> bool:
		return self.min_margin >= -self.tolerance


def quadratic_form(tensor: KahlerCurvatureTensor, form: ArrayLike) -> float:
	"""Q(A) = Re Σ R_{ij̄kl̄} A_ij A_kl for a Hermitian coefficient matrix A."""
	A = np.asarray(form, dtype=complex)
	return float(np.einsum("ijkl,ij,kl->", tensor.components, A, A).real)


def assemble_kahler_operator(tensor: KahlerCurvatureTensor) -> KahlerOperatorMatrix:
	"""Build the real symmetric matrix of Q in the orthonormal Hermitian basis."""
	basis, _ = hermitian_basis(tensor.n)
	entries = np.einsum("ijkl,aij,bkl->ab", tensor.components, basis, basis).real
	entries = np.triu(entries) + np.triu(entries, 1).T
	return KahlerOperatorMatrix(n=tensor.n, entries=entries)


def _check_index(tensor: KahlerCurvatureTensor, *indices: int) -> None:
	for index in indices:
		if not 0 <= index < tensor.n:
			msg = f"index {index} out of range 0..{tensor.n - 1}"
			raise RangeError(msg)


def bisectional(tensor: KahlerCurvatureTensor, i: int, j: int) -> float:
	"""R_{ij̄jī}; for i == j this is the holomorphic sectional curvature."""
	_check_index(tensor, i, j)
	return float(tensor.components[i, j, j, i].real)


def orthogonal_bisectional_identity(tensor: KahlerCurvatureTensor, i: int, j: int) -> tuple[float, float]:
	"""Both sides of 4R_{iījj̄} = Q(E_ij + E_ji) + Q(i(E_ij − E_ji)).

	Each test form has squared norm 2.

	Raises:
		ArgumentError: If i == j
	"""
	if i == j:
		msg = f"orthogonal bisectional curvature needs i != j, got i = j = {i}"
		raise ArgumentError(msg)
	_check_index(tensor, i, j)

	symmetric = np.zeros((tensor.n, tensor.n), dtype=complex)
	symmetric[i, j] = symmetric[j, i] = 1.0
	skew = np.zeros((tensor.n, tensor.n), dtype=complex)
	skew[i, j] = 1j
	skew[j, i] = -1j

	lhs = 4.0 * float(tensor.components[i, i, j, j].real)
	rhs = quadratic_form(tensor, symmetric) + quadratic_form(tensor, skew)
	return lhs, rhs


def kahler_spectrum(tensor: KahlerCurvatureTensor) -> Spectrum:
	"""Eigenvalues ρ_1 ≤ … ≤ ρ_{n²} of the Kähler curvature operator."""
	return eigen_spectrum(assemble_kahler_operator(tensor)).spectrum


def two_positivity_implies_obc(
	tensor: KahlerCurvatureTensor, frames: list[NDArray[np.complex128]], tolerance: float = IDENTITY_TOLERANCE
) -> ObcReport:
	"""Check that a 2-positive Kähler operator has 4R_{iījj̄} ≥ 2(ρ_1 + ρ_2) in every supplied frame.

	Raises:
		PreconditionError: If ρ_1 + ρ_2 is not positive
	"""
	spectrum = kahler_spectrum(tensor)
	if spectrum.length < 2:  # noqa: PLR2004
		msg = "2-positivity needs at least two eigenvalues"
		raise PreconditionError(msg)
	rho_sum = spectrum.values[0] + spectrum.values[1]
	if rho_sum <= tolerance:
		msg = f"Kähler operator is not 2-positive: ρ1 + ρ2 = {rho_sum:.6g}"
		raise PreconditionError(msg)

	min_margin = math.inf
	pairs = 0
	for frame in frames:
		rotated = tensor.in_frame(frame).components
		diagonal = np.einsum("iijj->ij", rotated).real
		off = ~np.eye(tensor.n, dtype=bool)
		margins = 4.0 * diagonal[off] - 2.0 * rho_sum
		if margins.size:
			min_margin = min(min_margin, float(margins.min()))
		pairs += int(margins.size)

	report = ObcReport(
		rho_sum=rho_sum, min_margin=min_margin, frames_checked=len(frames), pairs_checked=pairs, tolerance=tolerance
	)
	logger.debug(f"orthogonal bisectional check: {report}")
	return report


def ricci(tensor: KahlerCurvatureTensor) -> NDArray[np.complex128]:
	"""Ricci form Ric_{jk̄} = Σ_i R_{iījk̄}."""
	return np.einsum("iijk->jk", tensor.components)


def frame_coefficients(matrix: KahlerOperatorMatrix) -> NDArray[np.complex128]:
	"""Complex coefficients c_{ij̄}^α of e_i∧ē_j in the eigenbasis; shape (n, n, n²)."""
	basis, _ = hermitian_basis(matrix.n)
	vectors = eigen_spectrum(matrix).vectors
	return np.einsum("aij,ab->ijb", np.conj(basis), vectors)


def random_unitary(n: int, rng: np.random.Generator) -> NDArray[np.complex128]:
	"""Haar-distributed unitary matrix from the QR factorization of a complex Gaussian."""
	Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
	Q, R = np.linalg.qr(Z)
	phases = np.diag(R) / np.abs(np.diag(R))
	return Q * phases


def random_kahler_tensor(n: int, rng: np.random.Generator, terms: int | None = None) -> KahlerCurvatureTensor:
	"""Random tensor Σ_a w_a S^a_ik conj(S^a_jl) with complex symmetric S^a and real weights.

	Every such sum has the Kähler symmetries; indefinite weights give indefinite operators.
	"""
	if n < MIN_COMPLEX_DIMENSION:
		msg = f"random Kähler tensors need n >= 1, got {n}"
		raise DomainError(msg)
	terms = terms or n * n + 1
	S = rng.standard_normal((terms, n, n)) + 1j * rng.standard_normal((terms, n, n))
	S = 0.5 * (S + S.transpose(0, 2, 1))
	weights = rng.standard_normal(terms)
	components = np.einsum("a,aik,ajl->ijkl", weights, S, np.conj(S))
	return KahlerCurvatureTensor(components)
