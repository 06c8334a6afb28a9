"""Turn sampled cone-membership evidence into classification verdicts."""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import StrEnum

from .config import DEFAULT_TOLERANCE
from .errors import ConsistencyError, DomainError, PreconditionError
from .symcone import (
	ConeStatus,
	ConeVerdict,
	DichotomyCase,
	ShiftKind,
	ShiftParameter,
	Spectrum,
	cone_membership,
	dichotomy_check,
	shift,
	shift_threshold,
)

logger = logging.getLogger(__name__)

# Constants
MIN_RIEMANNIAN_N = 3
MIN_KAHLER_N = 2
SPLITTING_DIMENSION = 3
KAHLER_SPLITTING_DIMENSION = 2
COMPACTNESS_CAVEAT = "compactness: user-asserted"


class GeometryKind(StrEnum):
	RIEMANNIAN = "riemannian"
	KAHLER = "kahler"


class Conclusion(StrEnum):
	SPHERICAL_SPACE_FORM = "SphericalSpaceForm"
	S2XS1_OR_RP2XS1 = "S2xS1 or RP2xS1"
	FLAT = "Flat"
	K_POSITIVE = "KPositive"
	BIHOLOMORPHIC_CPN = "BiholomorphicCPn"
	CP1XCP1 = "CP1xCP1"
	FLAT_TORUS = "FlatTorus"
	NO_CONCLUSION = "NoConclusion"


class Theorem(StrEnum):
	"""Descriptive labels of the results a verdict relies on."""

	SPHERE = "shifted-cone sphere theorem: Γ_2⁺(α_2) at every point gives a spherical space form"
	TRICHOTOMY = "closed-cone trichotomy: closure of Γ_2⁺(α_2) gives a space form, S²×S¹ or ℝP²×S¹, or flat"
	K_POSITIVITY = "shifted-cone k-positivity theorem: Γ_2⁺(α_k) gives a k-positive curvature operator"
	KAHLER_SPHERE = "Kähler shifted-cone theorem: Γ_2⁺(β_2) at every point gives ℂPⁿ"
	KAHLER_TRICHOTOMY = "Kähler closed-cone trichotomy: closure of Γ_2⁺(β_2) gives ℂPⁿ, ℂP¹×ℂP¹ or a flat torus"
	KAHLER_K_POSITIVITY = "Kähler k-positivity theorem: Γ_2⁺(β_k) gives a k-positive Kähler curvature operator"


@dataclass(frozen=True)
class BettiVanishing:
	indices: tuple[int, ...]
	caveats: tuple[str, ...] = ()


def betti_vanishing(n: int, k: int) -> BettiVanishing:
	"""Betti numbers that vanish on a compact n-manifold with k-positive curvature operator.

	k ≤ ⌈n/2⌉ gives b_1 = … = b_{n−1} = 0; ⌈n/2⌉ < k ≤ n − 1 gives b_1 = … = b_{n−k} = 0 and
	b_k = … = b_{n−1} = 0. Outside 1 ≤ k ≤ n − 1 nothing is concluded.
	"""
	if k < 1:
		return BettiVanishing((), (f"k = {k} is below 1; no Betti numbers are concluded",))
	if k > n - 1:
		return BettiVanishing((), (f"k = {k} exceeds n−1 = {n - 1}; no Betti numbers are concluded",))
	if k <= math.ceil(n / 2):
		return BettiVanishing(tuple(range(1, n)))
	return BettiVanishing(tuple(sorted(set(range(1, n - k + 1)) | set(range(k, n)))))


@dataclass(frozen=True)
class Evidence:
	"""Shifted-cone memberships at sampled points of one manifold."""

	kind: GeometryKind
	n: int
	k: int
	compact: bool
	spectra: tuple[Spectrum, ...]
	shift: ShiftParameter
	verdicts: tuple[ConeVerdict, ...]
	tolerance: float = DEFAULT_TOLERANCE

	@classmethod
	def collect(
		cls,
		spectra: Sequence[Spectrum],
		kind: GeometryKind | str,
		n: int,
		k: int,
		compact: bool = True,
		tolerance: float = DEFAULT_TOLERANCE,
	) -> "Evidence":
		"""Shift every spectrum by α_k (or β_k) and test membership in Γ_2⁺.

		Raises:
			ConsistencyError: If there are no spectra or their lengths disagree with n
			DomainError: If n is below the dimension the shift needs
		"""
		kind = GeometryKind(kind)
		if not spectra:
			msg = "evidence needs at least one spectrum"
			raise ConsistencyError(msg)
		size = n * (n - 1) // 2 if kind is GeometryKind.RIEMANNIAN else n * n
		lengths = {spectrum.length for spectrum in spectra}
		if lengths != {size}:
			msg = f"{kind} evidence in dimension {n} needs spectra of length {size}, got lengths {sorted(lengths)}"
			raise ConsistencyError(msg)

		if kind is GeometryKind.RIEMANNIAN:
			if n < MIN_RIEMANNIAN_N:
				msg = f"Riemannian classification needs n >= {MIN_RIEMANNIAN_N}, got n = {n}"
				raise DomainError(msg)
			parameter = shift_threshold(size, k, ShiftKind.RIEMANNIAN)
		else:
			parameter = shift_threshold(n, k, ShiftKind.KAHLER)

		verdicts = tuple(cone_membership(shift(spectrum, parameter), 2, tolerance) for spectrum in spectra)
		return cls(
			kind=kind,
			n=n,
			k=k,
			compact=compact,
			spectra=tuple(spectra),
			shift=parameter,
			verdicts=verdicts,
			tolerance=tolerance,
		)

	@property
	def points(self) -> int:
		return len(self.spectra)

	def count(self, status: ConeStatus) -> int:
		return sum(verdict.status is status for verdict in self.verdicts)

	def verify(self) -> None:
		"""Recompute every verdict from its spectrum.

		Raises:
			ConsistencyError: If a stored verdict differs from the recomputed one
		"""
		for index, (spectrum, stored) in enumerate(zip(self.spectra, self.verdicts, strict=True)):
			recomputed = cone_membership(shift(spectrum, self.shift), 2, self.tolerance)
			if recomputed != stored:
				msg = f"stored verdict at point {index} ({stored.status}) differs from recomputed {recomputed.status}"
				raise ConsistencyError(msg)


@dataclass(frozen=True)
class Verdict:
	conclusion: Conclusion
	theorem: Theorem
	k: int
	points_checked: int
	caveats: tuple[str, ...] = ()
	betti_vanishing: tuple[int, ...] | None = None
	branch: str | None = None

	def to_dict(self) -> dict:
		data = {
			"conclusion": str(self.conclusion),
			"theorem": str(self.theorem),
			"k": self.k,
			"points_checked": self.points_checked,
			"caveats": list(self.caveats),
		}
		if self.betti_vanishing is not None:
			data["betti_vanishing"] = list(self.betti_vanishing)
		if self.branch is not None:
			data["branch"] = self.branch
		return data

	@classmethod
	def from_dict(cls, data: dict) -> "Verdict":
		betti = data.get("betti_vanishing")
		return cls(
			conclusion=Conclusion(data["conclusion"]),
			theorem=Theorem(data["theorem"]),
			k=int(data["k"]),
			points_checked=int(data["points_checked"]),
			caveats=tuple(data.get("caveats", ())),
			betti_vanishing=tuple(betti) if betti is not None else None,
			branch=data.get("branch"),
		)


@dataclass
class _Builder:
	evidence: Evidence
	extra: list[str] = field(default_factory=list)

	def verdict(
		self,
		conclusion: Conclusion,
		theorem: Theorem,
		betti: tuple[int, ...] | None = None,
		branch: str | None = None,
	) -> Verdict:
		points = self.evidence.points
		caveats = (
			f"sampling: {points} point(s) checked; pointwise membership cannot certify every point of the manifold",
			COMPACTNESS_CAVEAT,
			*self.extra,
		)
		verdict = Verdict(
			conclusion=conclusion,
			theorem=theorem,
			k=self.evidence.k,
			points_checked=points,
			caveats=caveats,
			betti_vanishing=betti,
			branch=branch,
		)
		logger.info(f"verdict: {conclusion} ({points} points, k={self.evidence.k})")
		return verdict


def _preflight(evidence: Evidence, kind: GeometryKind, minimum: int) -> None:
	if evidence.kind is not kind:
		msg = f"expected {kind} evidence, got {evidence.kind}"
		raise ConsistencyError(msg)
	if evidence.n < minimum:
		msg = f"{kind} classification needs n >= {minimum}, got n = {evidence.n}"
		raise DomainError(msg)
	if not evidence.compact:
		msg = (
			"classification is stated for compact manifolds and a chart cannot certify compactness; "
			"assert compactness to obtain a verdict"
		)
		raise PreconditionError(msg)
	evidence.verify()


def _closure_branch(evidence: Evidence) -> tuple[str, list[str]]:
	"""Summarize the dichotomy over the sampled points: 'positive', 'flat', 'degenerate', 'mixed' or 'violation'."""
	cases = [dichotomy_check(spectrum, 2, evidence.tolerance) for spectrum in evidence.spectra]
	if DichotomyCase.VIOLATION in cases:
		return "violation", [f"{cases.count(DichotomyCase.VIOLATION)} point(s) violate the k-positivity dichotomy"]
	if DichotomyCase.STRICTLY_POSITIVE_SUM in cases:
		count = cases.count(DichotomyCase.STRICTLY_POSITIVE_SUM)
		return "positive", [f"2-positive at {count} of {len(cases)} sampled point(s)"]
	zero = [all(abs(v) <= evidence.tolerance for v in spectrum.values) for spectrum in evidence.spectra]
	if all(zero):
		return "flat", []
	if not any(zero):
		return "degenerate", []
	return "mixed", ["flat and degenerate points are mixed; no single branch of the trichotomy applies"]


def classify_riemannian(evidence: Evidence) -> Verdict:
	"""Verdict for Riemannian evidence.

	Raises:
		ConsistencyError: If the evidence is Kähler or inconsistent
		PreconditionError: If compactness is not asserted
	"""
	_preflight(evidence, GeometryKind.RIEMANNIAN, MIN_RIEMANNIAN_N)
	builder = _Builder(evidence)
	k = evidence.k
	theorem = Theorem.SPHERE if k == 2 else Theorem.K_POSITIVITY  # noqa: PLR2004

	outside = evidence.count(ConeStatus.OUTSIDE)
	if outside:
		builder.extra.append(f"{outside} point(s) lie outside the closure of Γ_2⁺(α_{k})")
		return builder.verdict(Conclusion.NO_CONCLUSION, theorem)

	if evidence.count(ConeStatus.INTERIOR) == evidence.points:
		if k == 2:  # noqa: PLR2004
			return builder.verdict(Conclusion.SPHERICAL_SPACE_FORM, Theorem.SPHERE)
		betti = betti_vanishing(evidence.n, k)
		builder.extra.extend(betti.caveats)
		return builder.verdict(Conclusion.K_POSITIVE, Theorem.K_POSITIVITY, betti=betti.indices)

	if k != 2:  # noqa: PLR2004
		builder.extra.append(f"boundary points at k = {k}: only the open cone Γ_2⁺(α_{k}) yields k-positivity")
		return builder.verdict(Conclusion.NO_CONCLUSION, Theorem.K_POSITIVITY)

	branch, notes = _closure_branch(evidence)
	builder.extra.extend(notes)
	match branch:
		case "positive":
			return builder.verdict(Conclusion.SPHERICAL_SPACE_FORM, Theorem.TRICHOTOMY, branch="quasi-positive")
		case "flat":
			return builder.verdict(Conclusion.FLAT, Theorem.TRICHOTOMY, branch="flat")
		case "degenerate" if evidence.n == SPLITTING_DIMENSION:
			builder.extra.append("S²×S¹ and ℝP²×S¹ are not distinguished")
			return builder.verdict(Conclusion.S2XS1_OR_RP2XS1, Theorem.TRICHOTOMY, branch="degenerate")
		case "degenerate":
			builder.extra.append(
				f"degenerate profile in dimension {evidence.n}: a kernel of dimension 2 with constant tail "
				f"only splits off in dimension {SPLITTING_DIMENSION}"
			)
	return builder.verdict(Conclusion.NO_CONCLUSION, Theorem.TRICHOTOMY)


def classify_kahler(evidence: Evidence) -> Verdict:
	"""Verdict for Kähler evidence at β_k.

	Raises:
		ConsistencyError: If the evidence is Riemannian or inconsistent
		PreconditionError: If compactness is not asserted
	"""
	_preflight(evidence, GeometryKind.KAHLER, MIN_KAHLER_N)
	builder = _Builder(evidence)
	k = evidence.k
	theorem = Theorem.KAHLER_SPHERE if k == 2 else Theorem.KAHLER_K_POSITIVITY  # noqa: PLR2004

	outside = evidence.count(ConeStatus.OUTSIDE)
	if outside:
		builder.extra.append(f"{outside} point(s) lie outside the closure of Γ_2⁺(β_{k})")
		return builder.verdict(Conclusion.NO_CONCLUSION, theorem)

	if evidence.count(ConeStatus.INTERIOR) == evidence.points:
		if k == 2:  # noqa: PLR2004
			return builder.verdict(Conclusion.BIHOLOMORPHIC_CPN, Theorem.KAHLER_SPHERE)
		return builder.verdict(Conclusion.K_POSITIVE, Theorem.KAHLER_K_POSITIVITY)

	if k != 2:  # noqa: PLR2004
		builder.extra.append(f"boundary points at k = {k}: only the open cone Γ_2⁺(β_{k}) yields k-positivity")
		return builder.verdict(Conclusion.NO_CONCLUSION, Theorem.KAHLER_K_POSITIVITY)

	branch, notes = _closure_branch(evidence)
	builder.extra.extend(notes)
	match branch:
		case "positive":
			return builder.verdict(Conclusion.BIHOLOMORPHIC_CPN, Theorem.KAHLER_TRICHOTOMY, branch="quasi-positive")
		case "flat":
			return builder.verdict(Conclusion.FLAT_TORUS, Theorem.KAHLER_TRICHOTOMY, branch="flat")
		case "degenerate" if evidence.n == KAHLER_SPLITTING_DIMENSION:
			return builder.verdict(Conclusion.CP1XCP1, Theorem.KAHLER_TRICHOTOMY, branch="degenerate")
		case "degenerate":
			builder.extra.append(
				f"degenerate profile in complex dimension {evidence.n}: the product splitting needs n = "
				f"{KAHLER_SPLITTING_DIMENSION}"
			)
	return builder.verdict(Conclusion.NO_CONCLUSION, Theorem.KAHLER_TRICHOTOMY)


def classify(evidence: Evidence) -> Verdict:
	"""Dispatch on the evidence kind."""
	if evidence.kind is GeometryKind.KAHLER:
		return classify_kahler(evidence)
	return classify_riemannian(evidence)
