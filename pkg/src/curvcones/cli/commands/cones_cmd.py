"""Cones command: shifted-cone membership of a raw spectrum."""

import logging

import typer

from curvcones.cli.output import ExitCode, OutputFormat, emit, fail
from curvcones.config import DEFAULT_TOLERANCE
from curvcones.errors import ConsistencyError, CurvConesError
from curvcones.report import Conventions, PointReport, Report
from curvcones.symcone import ShiftKind, Spectrum, cone_membership, shift, shift_threshold

logger = logging.getLogger(__name__)


def _parse_spectrum(text: str) -> Spectrum:
	try:
		values = [float(part) for part in text.split(",") if part.strip()]
	except ValueError:
		fail(f"--spectrum must be comma-separated reals, got {text!r}", ExitCode.USAGE)
	if not values:
		fail("--spectrum is empty", ExitCode.USAGE)
	try:
		return Spectrum.from_values(values)
	except CurvConesError as e:
		fail(e)


def cones(
	spectrum: str = typer.Option(..., "--spectrum", "-s", help="Comma-separated eigenvalues, e.g. 0,0,1,1,1,3"),
	k: int = typer.Option(2, "--k", "-k", help="Shift index"),
	kahler_n: int | None = typer.Option(
		None, "--kahler-n", help="Complex dimension n; the spectrum is then a Kähler one of length n²"
	),
	tol: float = typer.Option(DEFAULT_TOLERANCE, "--tol", help="Tolerance for cone boundaries"),
	output: OutputFormat = typer.Option(OutputFormat.MD, "--format", "-f", help="Output format: json or md"),
) -> None:
	"""Shift a spectrum by α_k (or β_k) and report σ_1, σ_2 and Γ_2⁺ membership."""
	values = _parse_spectrum(spectrum)
	logger.info(f"cones: N={values.length}, k={k}, kahler_n={kahler_n}")
	try:
		if kahler_n is None:
			parameter = shift_threshold(values.length, k, ShiftKind.RIEMANNIAN)
		else:
			if values.length != kahler_n * kahler_n:
				msg = f"a Kähler spectrum for n = {kahler_n} has {kahler_n * kahler_n} entries, got {values.length}"
				raise ConsistencyError(msg)
			parameter = shift_threshold(kahler_n, k, ShiftKind.KAHLER)
		verdict = cone_membership(shift(values, parameter), 2, tol)
	except CurvConesError as e:
		fail(e)

	point = PointReport.build("spectrum", values, parameter, k, verdict)
	geometry = {"kind": str(parameter.kind), "N": values.length, "k": k, "alpha": parameter.alpha}
	if kahler_n is not None:
		geometry["n"] = kahler_n
	report = Report(
		title="spectrum",
		input={"command": "cones", "spectrum": spectrum},
		geometry=geometry,
		flags={"k": k, "kahler_n": kahler_n, "tol": tol, "format": str(output)},
		points=(point,),
		conventions=Conventions(cone_tolerance=tol),
	)
	emit(report, output)
