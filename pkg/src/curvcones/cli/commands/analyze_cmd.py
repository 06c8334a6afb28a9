"""Analyze command: finite-difference curvature of a metric chart."""

import logging
from pathlib import Path

import typer

from curvcones.chartengine import MetricChart, analyze_chart, snap_spectrum
from curvcones.classify import Evidence, GeometryKind, classify
from curvcones.cli.output import ExitCode, OutputFormat, emit, fail
from curvcones.config import DEFAULT_STEP, DEFAULT_TOLERANCE, THREADS_ENV_VAR, resolve_threads
from curvcones.errors import CurvConesError
from curvcones.report import Conventions, Report
from curvcones.riemcurv import assemble_operator, eigen_spectrum

logger = logging.getLogger(__name__)


def analyze(
	chart_file: Path = typer.Argument(..., help="JSON chart file"),
	k: int = typer.Option(2, "--k", "-k", help="Shift index: test Γ_2⁺(α_k)"),
	step: float = typer.Option(DEFAULT_STEP, "--step", help="Finite-difference step"),
	tol: float = typer.Option(DEFAULT_TOLERANCE, "--tol", help="Tolerance for cone boundaries"),
	threads: int = typer.Option(0, "--threads", envvar=THREADS_ENV_VAR, help="Worker threads (0 = auto)"),
	compact: bool | None = typer.Option(
		None, "--compact/--no-compact", help="Assert (or deny) compactness; defaults to the chart's own flag"
	),
	output: OutputFormat = typer.Option(OutputFormat.MD, "--format", "-f", help="Output format: json or md"),
) -> None:
	"""Sample a chart, compute curvature at every point and classify the manifold."""
	logger.info(f"analyze {chart_file}: k={k}, step={step}, tol={tol}")
	try:
		chart = MetricChart.load(chart_file)
	except OSError as e:
		fail(f"cannot read {chart_file}: {e.strerror}", ExitCode.SCHEMA)
	except CurvConesError as e:
		fail(e)

	try:
		results = analyze_chart(chart, step, resolve_threads(threads))
		evaluated = [(result.point, result.tensor) for result in results if result.tensor is not None]
		skipped = [{"point": list(result.point), "reason": result.skipped} for result in results if result.skipped]
		if not evaluated:
			fail(f"all {len(results)} sample point(s) of {chart.name!r} were rejected", ExitCode.NUMERIC)
		spectra = [snap_spectrum(eigen_spectrum(assemble_operator(tensor)).spectrum) for _, tensor in evaluated]
		asserted = chart.compact if compact is None else compact
		evidence = Evidence.collect(spectra, GeometryKind.RIEMANNIAN, chart.dimension, k, asserted, tol)
		verdict = classify(evidence)
	except CurvConesError as e:
		fail(e)

	report = Report.from_evidence(
		title=chart.name,
		source={"command": "analyze", "chart": chart_file.name, "name": chart.name},
		evidence=evidence,
		labels=[f"p{index}" for index in range(1, len(evaluated) + 1)],
		points=[point for point, _ in evaluated],
		skipped=skipped,
		flags={
			"k": k,
			"step": step,
			"tol": tol,
			"threads": threads,
			"compact": asserted,
			"format": str(output),
		},
		verdict=verdict,
		conventions=Conventions(cone_tolerance=tol, step=step),
	)
	emit(report, output)
