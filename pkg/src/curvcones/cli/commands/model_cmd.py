"""Model command: analyze a catalog model space."""

import logging
from enum import StrEnum

import typer
from rich.console import Console
from rich.table import Table

from curvcones.classify import Evidence, GeometryKind, classify
from curvcones.cli.output import OutputFormat, emit, fail
from curvcones.config import DEFAULT_TOLERANCE
from curvcones.errors import CurvConesError
from curvcones.models import CATALOG, build, parse_catalog_name
from curvcones.report import Report

logger = logging.getLogger(__name__)
console = Console()


class Geometry(StrEnum):
	AUTO = "auto"
	RIEMANNIAN = "riemannian"
	KAHLER = "kahler"


def model(
	name: str = typer.Argument(..., help="Catalog identifier, e.g. s3, s2xs1, cpn:2 (see `curvcones models`)"),
	k: int = typer.Option(2, "--k", "-k", help="Shift index: test Γ_2⁺(α_k), or Γ_2⁺(β_k) for Kähler models"),
	tol: float = typer.Option(DEFAULT_TOLERANCE, "--tol", help="Tolerance for cone boundaries"),
	geometry: Geometry = typer.Option(
		Geometry.AUTO, "--geometry", "-g", help="Kähler operator for Kähler models unless riemannian is forced"
	),
	output: OutputFormat = typer.Option(OutputFormat.MD, "--format", "-f", help="Output format: json or md"),
) -> None:
	"""Build a model space, test its spectrum against the shifted cone and classify it."""
	logger.info(f"model {name}: k={k}, geometry={geometry}")
	try:
		tensors = build(parse_catalog_name(name))
		kahler = tensors.kahler is not None if geometry is Geometry.AUTO else geometry is Geometry.KAHLER
		if kahler:
			spectrum = tensors.kahler_spectrum()
			n = tensors.kahler_tensor().n
		else:
			spectrum = tensors.riemannian_spectrum()
			n = tensors.real_tensor().n
		kind = GeometryKind.KAHLER if kahler else GeometryKind.RIEMANNIAN
		evidence = Evidence.collect([spectrum], kind, n, k, compact=True, tolerance=tol)
		verdict = classify(evidence)
	except CurvConesError as e:
		fail(e)

	report = Report.from_evidence(
		title=tensors.spec.label,
		source={"command": "model", "model": name},
		evidence=evidence,
		labels=[tensors.spec.label],
		flags={"k": k, "tol": tol, "geometry": str(geometry), "format": str(output)},
		verdict=verdict,
	)
	emit(report, output)


def models() -> None:
	"""List the catalog identifiers."""
	table = Table(title="Model Catalog")
	table.add_column("Identifier", style="cyan", no_wrap=True)
	table.add_column("Description", style="magenta")
	for entry in CATALOG:
		table.add_row(entry.pattern, entry.description)
	console.print(table)

