"""Main CLI application for curvcones."""

import logging
from pathlib import Path

import typer
from rich.console import Console
from rich.table import Table

from curvcones import __version__
from curvcones.config import setup_logging

from .commands import analyze_cmd, cones_cmd, model_cmd, verify_cmd

# Create the main Typer app
app = typer.Typer(
	name="curvcones",
	help="curvcones: curvature-operator spectra, shifted-cone tests and classification verdicts.",
	add_completion=False,
	rich_markup_mode="rich",
)

console = Console()


@app.callback()
def main(
	verbose: int = typer.Option(0, "--verbose", "-v", count=True, help="More logging (-v info, -vv debug)"),
	log_file: Path | None = typer.Option(None, "--log-file", help="Also write logs to this file"),
) -> None:
	"""Curvature-operator spectra, shifted-cone tests and classification verdicts."""
	level = max(logging.DEBUG, logging.WARNING - 10 * verbose)
	setup_logging(level, log_file)


# Add commands
app.command(name="model", help="Analyze a catalog model space")(model_cmd.model)
app.command(name="models", help="List the model catalog")(model_cmd.models)
app.command(name="analyze", help="Analyze a metric chart file")(analyze_cmd.analyze)
app.command(name="cones", help="Test a raw spectrum against the shifted cone")(cones_cmd.cones)
app.command(name="verify", help="Run the reproduction suite")(verify_cmd.verify)
app.command(name="verify-paper", hidden=True)(verify_cmd.verify)


@app.command()
def version() -> None:
	"""Show the version of curvcones."""
	console.print(f"curvcones version: [bold green]{__version__}[/bold green]")


@app.command()
def info() -> None:
	"""Show information about curvcones."""
	table = Table(title="curvcones Information")
	table.add_column("Component", style="cyan", no_wrap=True)
	table.add_column("Description", style="magenta")

	table.add_row("symcone", "Elementary symmetric functions, shifted cones Γ_j⁺(α)")
	table.add_row("riemcurv", "Riemann tensors, curvature operators on Λ², spectra")
	table.add_row("kahlercurv", "Kähler curvature operators and bisectional identities")
	table.add_row("models", "Closed-form model spaces: spheres, products, ℂPⁿ, flat tori")
	table.add_row("chartengine", "Finite-difference curvature of metric charts")
	table.add_row("lemmalab", "Interpolation, pinching and splitting arithmetic")
	table.add_row("classify", "Classification verdicts from sampled evidence")
	table.add_row("verification", "Reproduction suite")

	console.print(table)


if __name__ == "__main__":
	app()
