"""Riemann tensors in orthonormal frames and the curvature operator on Λ².

Conventions:
	- R_{ijkl} = g(R(e_i, e_j)e_k, e_l), so the sectional curvature of the (e_i, e_j) plane is R_{ijji}
	  and the unit round sphere has R_{ijkl} = δ_il δ_jk − δ_ik δ_jl.
	- The basis {e_i∧e_j : i < j} of Λ² is orthonormal and ordered lexicographically in (i, j).
	- The operator entry between e_i∧e_j and e_k∧e_l is R_{ijlk}; the round sphere gives the identity
	  and the scalar curvature is twice the trace.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cache
from typing import Protocol

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .config import EIGEN_TOLERANCE, VALIDATION_TOLERANCE
from .errors import ArgumentError, ConsistencyError, DomainError, NumericalError, RangeError, ValidationError
from .symcone import Spectrum

logger = logging.getLogger(__name__)

# Constants
MIN_DIMENSION = 2
ORTHONORMAL_TOLERANCE = 1e-10
KERNEL_TOLERANCE = 1e-9


@cache
def plane_pairs(n: int) -> tuple[tuple[int, int], ...]:
	"""Lexicographic basis index map A ↔ (i, j), i < j."""
	return tuple(itertools.combinations(range(n), 2))


def plane_index(n: int, i: int, j: int) -> int:
	"""Position of e_i∧e_j (i < j) in the Λ² basis."""
	if not 0 <= i < j < n:
		msg = f"plane ({i}, {j}) is not an ordered pair of distinct indices below {n}"
		raise RangeError(msg)
	return plane_pairs(n).index((i, j))


def symmetry_residuals(components: NDArray[np.float64]) -> dict[str, float]:
	"""Largest violation of each algebraic identity, relative to the largest component."""
	R = components
	scale = float(np.abs(R).max()) if R.size else 0.0
	scale = scale if scale > 0 else 1.0
	bianchi = R + np.einsum("iklj->ijkl", R) + np.einsum("iljk->ijkl", R)
	residuals = {
		"antisymmetry (first pair)": np.abs(R + R.transpose(1, 0, 2, 3)).max(),
		"antisymmetry (second pair)": np.abs(R + R.transpose(0, 1, 3, 2)).max(),
		"pair symmetry": np.abs(R - R.transpose(2, 3, 0, 1)).max(),
		"first Bianchi identity": np.abs(bianchi).max(),
	}
	return {name: float(value) / scale for name, value in residuals.items()}


@dataclass(frozen=True, eq=False)
class RiemannTensor:
	"""Components R_{ijkl} at one point in an orthonormal frame."""

	components: NDArray[np.float64]
	tolerance: float = VALIDATION_TOLERANCE

	def __post_init__(self) -> None:
		"""Validate shape and symmetries; the stored array is read-only."""
		components = np.array(self.components, dtype=float)
		if components.ndim != 4 or len(set(components.shape)) != 1:  # noqa: PLR2004
			msg = f"Riemann components must have shape (n, n, n, n), got {components.shape}"
			raise DomainError(msg)
		if components.shape[0] < MIN_DIMENSION:
			msg = f"Riemann tensors need n >= {MIN_DIMENSION}, got n = {components.shape[0]}"
			raise DomainError(msg)

		residuals = symmetry_residuals(components)
		worst = max(residuals, key=residuals.__getitem__)
		if residuals[worst] > self.tolerance:
			msg = f"Riemann tensor violates {worst}: residual {residuals[worst]:.3e} > {self.tolerance:.1e}"
			raise ValidationError(msg, residual=residuals[worst], identity=worst)

		components.setflags(write=False)
		object.__setattr__(self, "components", components)

	@property
	def n(self) -> int:
		return self.components.shape[0]

	@classmethod
	def constant_curvature(cls, n: int, curvature: float = 1.0) -> "RiemannTensor":
		"""Tensor of a space form with constant sectional curvature."""
		delta = np.eye(n)
		components = curvature * (np.einsum("il,jk->ijkl", delta, delta) - np.einsum("ik,jl->ijkl", delta, delta))
		return cls(components)

	def in_frame(self, frame: ArrayLike) -> "RiemannTensor":
		"""Express the tensor in another orthonormal frame (columns of ``frame``)."""
		Q = np.asarray(frame, dtype=float)
		rotated = np.einsum("ijkl,ia,jb,kc,ld->abcd", self.components, Q, Q, Q, Q)
		return RiemannTensor(rotated, self.tolerance)


@dataclass(frozen=True, eq=False)
class CurvatureOperatorMatrix:
	"""Symmetric N×N matrix of the curvature operator in the {e_i∧e_j} basis."""

	n: int
	entries: NDArray[np.float64]

	@property
	def N(self) -> int:
		return self.entries.shape[0]

	@property
	def pairs(self) -> tuple[tuple[int, int], ...]:
		return plane_pairs(self.n)

	@property
	def trace(self) -> float:
		return float(np.trace(self.entries))


class OperatorLike(Protocol):
	"""Anything carrying a real symmetric ``entries`` matrix."""

	@property
	def entries(self) -> NDArray[np.float64]: ...


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
	"""Sorted spectrum plus orthonormal eigenvectors (columns)."""

	spectrum: Spectrum
	vectors: NDArray[np.float64]
	residual: float


def assemble_operator(tensor: RiemannTensor) -> CurvatureOperatorMatrix:
	"""Build the curvature operator on Λ² from an orthonormal-frame tensor.

	The entry at (e_i∧e_j, e_k∧e_l) is R_{ijlk}; the upper triangle is mirrored so the matrix
	is exactly symmetric.
	"""
	pairs = np.array(plane_pairs(tensor.n), dtype=int)
	first, second = pairs[:, 0], pairs[:, 1]
	R = tensor.components
	entries = R[first[:, None], second[:, None], second[None, :], first[None, :]]
	entries = np.triu(entries) + np.triu(entries, 1).T
	return CurvatureOperatorMatrix(n=tensor.n, entries=entries)


def eigen_spectrum(matrix: OperatorLike | NDArray[np.float64], tolerance: float = EIGEN_TOLERANCE) -> EigenDecomposition:
	"""Full eigendecomposition of a real symmetric operator matrix.

	Raises:
		NumericalError: If the solver fails, or a residual ‖Mv − λv‖ exceeds tolerance·‖M‖, or the
			eigenvectors are not orthonormal
	"""
	entries = np.asarray(getattr(matrix, "entries", matrix), dtype=float)
	if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:  # noqa: PLR2004
		msg = f"operator matrix must be square, got shape {entries.shape}"
		raise NumericalError(msg)
	if not np.all(np.isfinite(entries)):
		msg = "operator matrix has non-finite entries"
		raise NumericalError(msg)
	try:
		values, vectors = np.linalg.eigh(entries)
	except np.linalg.LinAlgError as e:
		msg = f"symmetric eigensolver did not converge: {e}"
		raise NumericalError(msg) from e

	norm = float(np.linalg.norm(entries, 2)) if entries.size else 0.0
	residual = float(np.linalg.norm(entries @ vectors - vectors * values, axis=0).max()) if values.size else 0.0
	if residual > tolerance * max(norm, np.finfo(float).tiny):
		msg = f"eigen residual {residual:.3e} exceeds {tolerance:.1e} * ‖M‖ = {tolerance * norm:.3e}"
		raise NumericalError(msg, residual=residual)
	orthonormality = float(np.abs(vectors.T @ vectors - np.eye(values.size)).max()) if values.size else 0.0
	if orthonormality > ORTHONORMAL_TOLERANCE:
		msg = f"eigenvectors not orthonormal: deviation {orthonormality:.3e}"
		raise NumericalError(msg, residual=orthonormality)

	logger.debug(f"eigen_spectrum: size={values.size} residual={residual:.3e}")
	return EigenDecomposition(spectrum=Spectrum.from_values(values), vectors=vectors, residual=residual)


def sectional(tensor: RiemannTensor, i: int, j: int) -> float:
	"""Sectional curvature R_{ijji} of the (e_i, e_j) plane.

	Raises:
		ArgumentError: If i == j
		RangeError: If an index is outside 0..n−1
	"""
	if i == j:
		msg = f"sectional curvature needs two distinct directions, got i = j = {i}"
		raise ArgumentError(msg)
	if not (0 <= i < tensor.n and 0 <= j < tensor.n):
		msg = f"indices ({i}, {j}) out of range for n = {tensor.n}"
		raise RangeError(msg)
	return float(tensor.components[i, j, j, i])


def ricci(tensor: RiemannTensor) -> NDArray[np.float64]:
	"""Ricci tensor Ric_jk = Σ_i R_{ijki}."""
	return np.einsum("ijki->jk", tensor.components)


def scalar(tensor: RiemannTensor) -> float:
	"""Scalar curvature, the trace of the Ricci tensor."""
	return float(np.trace(ricci(tensor)))


def expansion_coefficients(matrix: CurvatureOperatorMatrix) -> NDArray[np.float64]:
	"""Coefficients c_{ij}^α of e_i∧e_j in the eigenbasis; row A holds the expansion of plane A."""
	return eigen_spectrum(matrix).vectors


def kernel_coefficients(
	matrix: CurvatureOperatorMatrix, kernel_dim: int, tolerance: float = KERNEL_TOLERANCE
) -> dict[tuple[int, int], float]:
	"""Squared projection Σ_{α ≤ kernel_dim} (c_{ij}^α)² of every plane onto the kernel.

	The kernel must have exactly ``kernel_dim`` dimensions: inside a larger kernel the eigenvectors
	are not unique, so a projection onto ``kernel_dim`` of them would depend on the solver.

	Raises:
		ConsistencyError: If the lowest ``kernel_dim`` eigenvalues are not all within ``tolerance`` of zero,
			or if eigenvalue number ``kernel_dim + 1`` vanishes as well
	"""
	decomposition = eigen_spectrum(matrix)
	values = decomposition.spectrum.values
	if not 0 <= kernel_dim <= len(values):
		msg = f"kernel dimension {kernel_dim} out of range 0..{len(values)}"
		raise ConsistencyError(msg)
	if any(abs(v) > tolerance for v in values[:kernel_dim]):
		msg = f"lowest {kernel_dim} eigenvalues {values[:kernel_dim]} are not a kernel"
		raise ConsistencyError(msg)
	if kernel_dim < len(values) and abs(values[kernel_dim]) <= tolerance:
		msg = f"kernel is larger than {kernel_dim}: eigenvalue {values[kernel_dim]:.3e} also vanishes"
		raise ConsistencyError(msg)

	kernel = decomposition.vectors[:, :kernel_dim]
	weights = np.clip((kernel**2).sum(axis=1), 0.0, 1.0)
	return dict(zip(matrix.pairs, weights.tolist(), strict=True))


def vertex_kernel_sums(weights: dict[tuple[int, int], float], n: int) -> list[float]:
	"""For each direction j, Σ_{i ≠ j} of the kernel weight of the (i, j) plane."""
	sums = [0.0] * n
	for (i, j), weight in weights.items():
		sums[i] += weight
		sums[j] += weight
	return sums
