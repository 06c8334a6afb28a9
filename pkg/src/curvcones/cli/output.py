"""Exit codes and output helpers shared by every command."""

import sys
from enum import IntEnum, StrEnum
from typing import NoReturn

import typer
from rich.console import Console
from rich.markup import escape

from curvcones.errors import (
	ArgumentError,
	ChartSchemaError,
	ConsistencyError,
	CurvConesError,
	DomainError,
	PreconditionError,
	RangeError,
)
from curvcones.report import Report

err_console = Console(stderr=True, soft_wrap=True)


class ExitCode(IntEnum):
	OK = 0
	SCHEMA = 1
	USAGE = 2
	NUMERIC = 3
	VERIFICATION = 4


class OutputFormat(StrEnum):
	JSON = "json"
	MD = "md"


def exit_code_for(error: CurvConesError) -> ExitCode:
	"""Map a library error to the exit code the CLI reports it with."""
	match error:
		case ChartSchemaError():
			return ExitCode.SCHEMA
		case DomainError() | RangeError() | ArgumentError() | ConsistencyError() | PreconditionError():
			return ExitCode.USAGE
	# numerical failures, symmetry violations and unusable chart points
	return ExitCode.NUMERIC


def fail(error: CurvConesError | str, code: ExitCode | None = None) -> NoReturn:
	"""Print an error to stderr and exit with its code."""
	if code is None:
		code = exit_code_for(error) if isinstance(error, CurvConesError) else ExitCode.USAGE
	err_console.print(f"[red]Error:[/red] {escape(str(error))}", highlight=False)
	sys.exit(code)


def emit(report: Report, output: OutputFormat) -> None:
	"""Write a report to stdout; logs and errors go to stderr."""
	if output is OutputFormat.JSON:
		typer.echo(report.to_json())
	else:
		typer.echo(report.to_markdown(), nl=False)
