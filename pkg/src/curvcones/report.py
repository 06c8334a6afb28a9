"""Reports: the data every command emits, with JSON and markdown renderings."""

import json
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

from . import __version__
from .classify import Evidence, Verdict
from .config import DEFAULT_STEP, DEFAULT_TOLERANCE, FD_ACCEPTANCE, FD_VALIDATION_TOLERANCE, VALIDATION_TOLERANCE
from .symcone import ConeVerdict, ShiftParameter, Spectrum, k_smallest_sum, shift

TOOL_NAME = "curvcones"


@dataclass(frozen=True)
class Conventions:
	"""Conventions every report states so its numbers can be reproduced."""

	basis_order: str = "Λ² basis e_i∧e_j with i < j, lexicographic in (i, j), orthonormal"
	sign_anchor: str = "R_ijkl = g(R(e_i, e_j)e_k, e_l); diagonal entries are sectional curvatures; unit sphere ↦ identity"
	kahler_basis: str = "Hermitian basis E_ii, (E_ij + E_ji)/√2, i(E_ij − E_ji)/√2 for i < j"
	cone_tolerance: float = DEFAULT_TOLERANCE
	validation_tolerance: float = VALIDATION_TOLERANCE
	fd_validation_tolerance: float = FD_VALIDATION_TOLERANCE
	fd_acceptance: float = FD_ACCEPTANCE
	step: float = DEFAULT_STEP
	compactness: str = "user-asserted"

	def to_dict(self) -> dict[str, Any]:
		return dict(self.__dict__)

	@classmethod
	def from_dict(cls, data: dict[str, Any]) -> "Conventions":
		return cls(**data)


@dataclass(frozen=True)
class PointReport:
	"""Spectra and shifted-cone membership at one point."""

	label: str
	spectrum: tuple[float, ...]
	shifted: tuple[float, ...]
	sigmas: tuple[float, ...]
	status: str
	k_smallest_sum: float
	point: tuple[float, ...] | None = None

	@classmethod
	def build(
		cls,
		label: str,
		spectrum: Spectrum,
		parameter: ShiftParameter,
		k: int,
		verdict: ConeVerdict,
		point: Sequence[float] | None = None,
	) -> "PointReport":
		return cls(
			label=label,
			spectrum=spectrum.values,
			shifted=shift(spectrum, parameter).values,
			sigmas=verdict.sigmas,
			status=str(verdict.status),
			k_smallest_sum=k_smallest_sum(spectrum, min(k, spectrum.length)),
			point=tuple(float(x) for x in point) if point is not None else None,
		)

	def to_dict(self) -> dict[str, Any]:
		return {
			"label": self.label,
			"point": list(self.point) if self.point is not None else None,
			"spectrum": list(self.spectrum),
			"shifted": list(self.shifted),
			"sigmas": list(self.sigmas),
			"status": self.status,
			"k_smallest_sum": self.k_smallest_sum,
		}

	@classmethod
	def from_dict(cls, data: dict[str, Any]) -> "PointReport":
		point = data.get("point")
		return cls(
			label=data["label"],
			spectrum=tuple(data["spectrum"]),
			shifted=tuple(data["shifted"]),
			sigmas=tuple(data["sigmas"]),
			status=data["status"],
			k_smallest_sum=data["k_smallest_sum"],
			point=tuple(point) if point is not None else None,
		)


@dataclass(frozen=True)
class Report:
	"""Everything a command computed, in a form that round-trips through JSON."""

	title: str
	input: dict[str, Any]
	geometry: dict[str, Any]
	flags: dict[str, Any]
	points: tuple[PointReport, ...] = ()
	skipped: tuple[dict[str, Any], ...] = ()
	verdict: Verdict | None = None
	checks: tuple[dict[str, Any], ...] = ()
	conventions: Conventions = field(default_factory=Conventions)
	version: str = __version__
	tool: str = TOOL_NAME

	@classmethod
	def from_evidence(
		cls,
		title: str,
		source: dict[str, Any],
		evidence: Evidence,
		labels: Sequence[str],
		flags: dict[str, Any],
		verdict: Verdict | None = None,
		points: Sequence[Sequence[float] | None] | None = None,
		skipped: Sequence[dict[str, Any]] = (),
		conventions: Conventions | None = None,
	) -> "Report":
		coordinates = points if points is not None else [None] * evidence.points
		point_reports = tuple(
			PointReport.build(label, spectrum, evidence.shift, evidence.k, cone_verdict, point)
			for label, spectrum, cone_verdict, point in zip(
				labels, evidence.spectra, evidence.verdicts, coordinates, strict=True
			)
		)
		return cls(
			title=title,
			input=dict(source),
			geometry={
				"kind": str(evidence.kind),
				"n": evidence.n,
				"k": evidence.k,
				"alpha": evidence.shift.alpha,
				"shift": str(evidence.shift.kind),
				"compact": evidence.compact,
			},
			flags=dict(flags),
			points=point_reports,
			skipped=tuple(skipped),
			verdict=verdict,
			conventions=conventions or Conventions(cone_tolerance=evidence.tolerance),
		)

	def to_dict(self) -> dict[str, Any]:
		return {
			"tool": self.tool,
			"version": self.version,
			"title": self.title,
			"input": self.input,
			"geometry": self.geometry,
			"flags": self.flags,
			"conventions": self.conventions.to_dict(),
			"points": [point.to_dict() for point in self.points],
			"skipped": list(self.skipped),
			"verdict": self.verdict.to_dict() if self.verdict is not None else None,
			"checks": list(self.checks),
		}

	@classmethod
	def from_dict(cls, data: dict[str, Any]) -> "Report":
		verdict = data.get("verdict")
		return cls(
			title=data["title"],
			input=data["input"],
			geometry=data["geometry"],
			flags=data["flags"],
			points=tuple(PointReport.from_dict(point) for point in data.get("points", [])),
			skipped=tuple(data.get("skipped", [])),
			verdict=Verdict.from_dict(verdict) if verdict is not None else None,
			checks=tuple(data.get("checks", [])),
			conventions=Conventions.from_dict(data["conventions"]),
			version=data["version"],
			tool=data["tool"],
		)

	def to_json(self) -> str:
		return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False)

	@classmethod
	def from_json(cls, text: str) -> "Report":
		return cls.from_dict(json.loads(text))

	def to_markdown(self) -> str:
		return render_markdown(self)


def _number(value: float) -> str:
	return f"{value:.10g}"


def _numbers(values: Sequence[float]) -> str:
	return ", ".join(_number(v) for v in values)


def _mapping(values: dict[str, Any]) -> str:
	return ", ".join(f"{key}={values[key]}" for key in sorted(values))


def render_markdown(report: Report) -> str:
	"""Deterministic markdown rendering of a report."""
	lines = [f"# {report.tool} report: {report.title}", ""]
	lines.append(f"- tool: {report.tool} {report.version}")
	lines.append(f"- input: {_mapping(report.input)}")
	if report.geometry:
		lines.append(f"- geometry: {_mapping(report.geometry)}")
	lines.append("")

	conventions = report.conventions
	lines.extend(
		[
			"## Conventions",
			"",
			f"- basis: {conventions.basis_order}",
			f"- sign: {conventions.sign_anchor}",
			f"- kähler basis: {conventions.kahler_basis}",
			f"- tolerances: cone={_number(conventions.cone_tolerance)}, "
			f"validation={_number(conventions.validation_tolerance)}, "
			f"fd validation={_number(conventions.fd_validation_tolerance)}, "
			f"fd acceptance={_number(conventions.fd_acceptance)}, step={_number(conventions.step)}",
			f"- compactness: {conventions.compactness}",
			"",
		]
	)

	if report.flags:
		lines.extend(["## Flags", "", "| flag | value |", "|---|---|"])
		lines.extend(f"| {key} | {report.flags[key]} |" for key in sorted(report.flags))
		lines.append("")

	if report.points:
		lines.extend(
			[
				"## Points",
				"",
				"| # | point | spectrum | shifted | σ | status | k-smallest sum |",
				"|---|---|---|---|---|---|---|",
			]
		)
		for index, point in enumerate(report.points, start=1):
			where = point.label if point.point is None else f"{point.label} ({_numbers(point.point)})"
			lines.append(
				f"| {index} | {where} | {_numbers(point.spectrum)} | {_numbers(point.shifted)} | "
				f"{_numbers(point.sigmas)} | {point.status} | {_number(point.k_smallest_sum)} |"
			)
		lines.append("")

	if report.skipped:
		lines.extend(["## Skipped points", ""])
		lines.extend(f"- ({_numbers(entry['point'])}): {entry['reason']}" for entry in report.skipped)
		lines.append("")

	if report.checks:
		lines.extend(["## Checks", "", "| check | result | measured |", "|---|---|---|"])
		for check in report.checks:
			result = "pass" if check["passed"] else "FAIL"
			lines.append(f"| {check['name']} | {result} | {check['measured']} |")
		lines.append("")

	lines.extend(["## Verdict", ""])
	verdict = report.verdict
	if verdict is None:
		lines.append("none")
	else:
		lines.append(f"- conclusion: {verdict.conclusion}")
		if verdict.branch is not None:
			lines.append(f"- branch: {verdict.branch}")
		lines.append(f"- theorem: {verdict.theorem}")
		lines.append(f"- k: {verdict.k}")
		lines.append(f"- points checked: {verdict.points_checked}")
		if verdict.betti_vanishing is not None:
			indices = ", ".join(f"b_{p}" for p in verdict.betti_vanishing) or "none"
			lines.append(f"- vanishing Betti numbers: {indices}")
		lines.append("- caveats:")
		lines.extend(f"  - {caveat}" for caveat in verdict.caveats)
	return "\n".join(lines) + "\n"
