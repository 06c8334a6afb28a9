"""Closed-form catalog of model-space curvature tensors at a point.

Model spaces are homogeneous, so one point represents the whole manifold.
"""

import logging
import math
import re
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import DomainError, RangeError
from .kahlercurv import KahlerCurvatureTensor, kahler_spectrum
from .riemcurv import RiemannTensor, assemble_operator, eigen_spectrum
from .symcone import Spectrum

logger = logging.getLogger(__name__)

# Constants
CP2_GOLDEN_SPECTRUM = (0.0, 0.0, 1.0, 1.0, 1.0, 3.0)
FUBINI_STUDY_SCALE = 1.0  # R_{ij̄kl̄} = c(δ_ij δ_kl + δ_il δ_kj), holomorphic sectional curvature 2c
MAX_REAL_FUBINI_STUDY = 2


@dataclass(frozen=True)
class RoundSphere:
	n: int
	radius: float = 1.0

	def __post_init__(self) -> None:
		if self.n < 2:  # noqa: PLR2004
			msg = f"round spheres need n >= 2, got {self.n}"
			raise DomainError(msg)
		if not (math.isfinite(self.radius) and self.radius > 0):
			msg = f"radius must be finite and positive, got {self.radius}"
			raise DomainError(msg)

	@property
	def dimension(self) -> int:
		return self.n

	@property
	def kahler(self) -> bool:
		return False

	@property
	def label(self) -> str:
		return f"S^{self.n}" if self.radius == 1.0 else f"S^{self.n}(r={self.radius:g})"


@dataclass(frozen=True)
class Flat:
	"""Euclidean factor; with ``complex_structure`` it is a flat Kähler torus of complex dimension n."""

	n: int
	complex_structure: bool = False

	def __post_init__(self) -> None:
		if self.n < 1:
			msg = f"flat factors need n >= 1, got {self.n}"
			raise DomainError(msg)

	@property
	def dimension(self) -> int:
		return 2 * self.n if self.complex_structure else self.n

	@property
	def kahler(self) -> bool:
		return self.complex_structure

	@property
	def label(self) -> str:
		if self.complex_structure:
			return f"C^{self.n}/Λ"
		return "S^1" if self.n == 1 else f"T^{self.n}"


@dataclass(frozen=True)
class FubiniStudy:
	n: int

	def __post_init__(self) -> None:
		if self.n < 1:
			msg = f"Fubini–Study needs complex dimension n >= 1, got {self.n}"
			raise DomainError(msg)

	@property
	def dimension(self) -> int:
		return 2 * self.n

	@property
	def kahler(self) -> bool:
		return True

	@property
	def label(self) -> str:
		return f"CP^{self.n}"


@dataclass(frozen=True)
class Hyperbolic:
	n: int
	radius: float = 1.0

	def __post_init__(self) -> None:
		if self.n < 2:  # noqa: PLR2004
			msg = f"hyperbolic spaces need n >= 2, got {self.n}"
			raise DomainError(msg)
		if not (math.isfinite(self.radius) and self.radius > 0):
			msg = f"radius must be finite and positive, got {self.radius}"
			raise DomainError(msg)

	@property
	def dimension(self) -> int:
		return self.n

	@property
	def kahler(self) -> bool:
		return False

	@property
	def label(self) -> str:
		return f"H^{self.n}"


@dataclass(frozen=True)
class Product:
	first: "ModelSpec"
	second: "ModelSpec"

	@property
	def dimension(self) -> int:
		return self.first.dimension + self.second.dimension

	@property
	def kahler(self) -> bool:
		return self.first.kahler and self.second.kahler

	@property
	def label(self) -> str:
		return f"{self.first.label}×{self.second.label}"


type ModelSpec = RoundSphere | Flat | FubiniStudy | Hyperbolic | Product


@dataclass(frozen=True, eq=False)
class ModelTensors:
	"""Tensors of a catalog model; either part is None when the model does not carry it."""

	spec: ModelSpec
	riemann: RiemannTensor | None
	kahler: KahlerCurvatureTensor | None

	def real_tensor(self) -> RiemannTensor:
		"""The real tensor.

		Raises:
			DomainError: If the catalog has no real tensor for this model
		"""
		if self.riemann is None:
			msg = f"model {self.spec.label} has no real curvature tensor in the catalog"
			raise DomainError(msg)
		return self.riemann

	def kahler_tensor(self) -> KahlerCurvatureTensor:
		"""The Kähler tensor.

		Raises:
			DomainError: If the model is not Kähler
		"""
		if self.kahler is None:
			msg = f"model {self.spec.label} is not Kähler"
			raise DomainError(msg)
		return self.kahler

	def riemannian_spectrum(self) -> Spectrum:
		"""Eigenvalues of the curvature operator on Λ²."""
		return eigen_spectrum(assemble_operator(self.real_tensor())).spectrum

	def kahler_spectrum(self) -> Spectrum:
		"""Eigenvalues of the Kähler curvature operator."""
		return kahler_spectrum(self.kahler_tensor())


def _block(first: NDArray, second: NDArray) -> NDArray:
	"""Direct-sum tensor with vanishing mixed components."""
	n1, n2 = first.shape[0], second.shape[0]
	out = np.zeros((n1 + n2,) * 4, dtype=np.result_type(first, second))
	out[:n1, :n1, :n1, :n1] = first
	out[n1:, n1:, n1:, n1:] = second
	return out


def _constant_curvature(n: int, curvature: float) -> NDArray[np.float64]:
	delta = np.eye(n)
	return curvature * (np.einsum("il,jk->ijkl", delta, delta) - np.einsum("ik,jl->ijkl", delta, delta))


def complex_structure(n: int) -> NDArray[np.float64]:
	"""Real 2n×2n matrix of J in the frame (u_1..u_n, Ju_1..Ju_n); column j is J u_j."""
	J = np.zeros((2 * n, 2 * n))
	J[n:, :n] = np.eye(n)
	J[:n, n:] = -np.eye(n)
	return J


def fubini_study_real(n: int, scale: float = FUBINI_STUDY_SCALE) -> NDArray[np.float64]:
	"""Real Riemann tensor of constant holomorphic sectional curvature 2·scale.

	R = (c/4)(δ_jk δ_il − δ_ik δ_jl + J_kj J_li − J_ki J_lj + 2 J_ij J_lk) with c = 2·scale; CP¹ is the
	sphere of curvature 2·scale and CP² has operator spectrum scale·(0, 0, 1, 1, 1, 3).
	"""
	if not 1 <= n <= MAX_REAL_FUBINI_STUDY:
		msg = f"the real Fubini–Study tensor is provided for n <= {MAX_REAL_FUBINI_STUDY}, got n = {n}"
		raise DomainError(msg)
	delta = np.eye(2 * n)
	J = complex_structure(n)
	c = 2.0 * scale
	return (c / 4.0) * (
		np.einsum("jk,il->ijkl", delta, delta)
		- np.einsum("ik,jl->ijkl", delta, delta)
		+ np.einsum("kj,li->ijkl", J, J)
		- np.einsum("ki,lj->ijkl", J, J)
		+ 2.0 * np.einsum("ij,lk->ijkl", J, J)
	)


def fubini_study_kahler(n: int, scale: float = FUBINI_STUDY_SCALE) -> NDArray[np.complex128]:
	"""R_{ij̄kl̄} = c(δ_ij δ_kl + δ_il δ_kj)."""
	delta = np.eye(n)
	return scale * (np.einsum("ij,kl->ijkl", delta, delta) + np.einsum("il,kj->ijkl", delta, delta)).astype(complex)


def _real_components(spec: ModelSpec) -> NDArray[np.float64] | None:
	match spec:
		case RoundSphere(n=n, radius=radius):
			return _constant_curvature(n, 1.0 / radius**2)
		case Hyperbolic(n=n, radius=radius):
			return _constant_curvature(n, -1.0 / radius**2)
		case Flat():
			return np.zeros((spec.dimension,) * 4)
		case FubiniStudy(n=n):
			return fubini_study_real(n) if n <= MAX_REAL_FUBINI_STUDY else None
		case Product(first=first, second=second):
			left, right = _real_components(first), _real_components(second)
			if left is None or right is None:
				return None
			return _block(left, right)
	return None


def _kahler_components(spec: ModelSpec) -> NDArray[np.complex128] | None:
	match spec:
		case FubiniStudy(n=n):
			return fubini_study_kahler(n)
		case Flat(n=n, complex_structure=True):
			return np.zeros((n,) * 4, dtype=complex)
		case Product(first=first, second=second):
			left, right = _kahler_components(first), _kahler_components(second)
			if left is None or right is None:
				return None
			return _block(left, right)
	return None


def build(spec: ModelSpec) -> ModelTensors:
	"""Assemble the curvature tensors of a model space at one point.

	Raises:
		DomainError: If the model has no tensor at all or the real dimension is below 2
	"""
	real = _real_components(spec)
	complex_ = _kahler_components(spec)
	if real is None and complex_ is None:
		msg = f"model {spec.label} has no curvature tensor in the catalog"
		raise DomainError(msg)
	riemann = RiemannTensor(real) if real is not None else None
	kahler = KahlerCurvatureTensor(complex_) if complex_ is not None else None
	logger.debug(f"built {spec.label}: riemannian={riemann is not None} kahler={kahler is not None}")
	return ModelTensors(spec=spec, riemann=riemann, kahler=kahler)


def positive_eigenvalue_budget(n: int, m: int, kahler: bool = False) -> int:
	"""Most positive eigenvalues a product with factor dimensions (m, n − m) can have.

	Riemannian: n(n−1)/2 − m(n−m). Kähler (complex dimensions): n² − 2m(n−m).

	Raises:
		RangeError: If m is outside 1..n−1
	"""
	if not 1 <= m <= n - 1:
		msg = f"factor dimension m={m} out of range 1..{n - 1}"
		raise RangeError(msg)
	if kahler:
		return n * n - 2 * m * (n - m)
	return n * (n - 1) // 2 - m * (n - m)


@dataclass(frozen=True)
class CatalogEntry:
	pattern: str
	description: str


CATALOG = (
	CatalogEntry("s3", "round 3-sphere"),
	CatalogEntry("s2xs1", "S²×S¹ product metric"),
	CatalogEntry("sKxs1:k", "S^k×S¹ product metric, k >= 2"),
	CatalogEntry("sphere:n[:r]", "round n-sphere of radius r (default 1)"),
	CatalogEntry("flat:n", "flat n-torus"),
	CatalogEntry("cflat:n", "flat Kähler torus of complex dimension n"),
	CatalogEntry("cpn:n", "Fubini–Study CPⁿ"),
	CatalogEntry("cp1xcp1", "CP¹×CP¹ with the product Fubini–Study metric"),
	CatalogEntry("hyperbolic:n", "hyperbolic n-space (negative control)"),
)

_NAME = re.compile(r"^(?P<family>[a-z0-9]+)(?::(?P<first>[^:]+))?(?::(?P<second>[^:]+))?$")


def _integer(text: str | None, name: str) -> int:
	if text is None:
		msg = f"catalog entry {name!r} needs a dimension, e.g. {name}:3"
		raise DomainError(msg)
	try:
		return int(text)
	except ValueError as e:
		msg = f"catalog entry {name!r}: {text!r} is not an integer"
		raise DomainError(msg) from e


def parse_catalog_name(name: str) -> ModelSpec:
	"""Turn a catalog identifier such as ``s2xs1`` or ``cpn:2`` into a model spec.

	Raises:
		DomainError: If the identifier is unknown or its parameters are invalid
	"""
	parsed = _NAME.match(name.strip().lower())
	if parsed is None:
		msg = f"unknown model {name!r}"
		raise DomainError(msg)
	family, first, second = parsed["family"], parsed["first"], parsed["second"]
	if family not in {"sphere"} and second is not None:
		msg = f"model {family!r} takes at most one parameter"
		raise DomainError(msg)

	match family:
		case "s3" if first is None:
			return RoundSphere(3)
		case "s2xs1" if first is None:
			return Product(RoundSphere(2), Flat(1))
		case "skxs1":
			return Product(RoundSphere(_integer(first, family)), Flat(1))
		case "sphere":
			radius = 1.0
			if second is not None:
				try:
					radius = float(second)
				except ValueError as e:
					msg = f"catalog entry 'sphere': radius {second!r} is not a number"
					raise DomainError(msg) from e
			return RoundSphere(_integer(first, family), radius)
		case "flat":
			return Flat(_integer(first, family))
		case "cflat":
			return Flat(_integer(first, family), complex_structure=True)
		case "cpn":
			return FubiniStudy(_integer(first, family))
		case "cp1xcp1" if first is None:
			return Product(FubiniStudy(1), FubiniStudy(1))
		case "hyperbolic":
			return Hyperbolic(_integer(first, family))
	msg = f"unknown model {name!r}; see `curvcones models`"
	raise DomainError(msg)
