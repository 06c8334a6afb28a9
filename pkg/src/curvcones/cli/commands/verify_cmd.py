"""Verify command: run the reproduction suite."""

import logging
import sys

import typer

from curvcones.cli.output import ExitCode, OutputFormat, emit, err_console
from curvcones.report import Report
from curvcones.verification import ReproductionSuite, results_summary

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 10_000
DEFAULT_DRAWS = 100_000


def verify(
	output: OutputFormat = typer.Option(OutputFormat.MD, "--format", "-f", help="Output format: json or md"),
	check: list[str] | None = typer.Option(None, "--check", "-c", help="Run only the named check (repeatable)"),
	samples: int = typer.Option(DEFAULT_SAMPLES, "--samples", help="Random problems per (N, k) in the lemma sweeps"),
	draws: int = typer.Option(DEFAULT_DRAWS, "--draws", help="Spectra per size in the monotonicity checks"),
	seed: int = typer.Option(0, "--seed", help="Seed for the random suites"),
) -> None:
	"""Reproduce every numeric claim; exit 4 if any check fails."""
	if (samples, draws, seed) == (DEFAULT_SAMPLES, DEFAULT_DRAWS, 0):
		suite = ReproductionSuite.get_instance()
	else:
		suite = ReproductionSuite(samples=samples, draws=draws, seed=seed)

	known = {name for name, _, _ in suite.checks}
	unknown = sorted(set(check or ()) - known)
	if unknown:
		err_console.print(f"[red]Error:[/red] unknown check(s): {', '.join(unknown)}")
		sys.exit(ExitCode.USAGE)

	results = suite.run(check or None)
	summary = results_summary(results)
	report = Report(
		title="reproduction suite",
		input={"command": "verify"},
		geometry={},
		flags={"samples": samples, "draws": draws, "seed": seed, "check": check or [], "format": str(output)},
		checks=tuple(result.to_dict() for result in results),
	)
	emit(report, output)
	if summary["failed"]:
		err_console.print(f"[red]{len(summary['failed'])} check(s) failed:[/red] {', '.join(summary['failed'])}")
		sys.exit(ExitCode.VERIFICATION)
