"""Defaults and environment configuration."""

import logging
import os
import sys
from pathlib import Path

from .errors import RangeError

# Constants
DEFAULT_TOLERANCE = 1e-9
VALIDATION_TOLERANCE = 1e-10
FD_VALIDATION_TOLERANCE = 1e-6
IDENTITY_TOLERANCE = 1e-9
EIGEN_TOLERANCE = 1e-10
DEFAULT_STEP = 1e-3
FD_ACCEPTANCE = 1e-4
THREADS_ENV_VAR = "CURVCONES_THREADS"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def resolve_threads(value: int | str | None = None) -> int:
	"""Turn a thread setting into a worker count.

	Args:
		value: Explicit setting; falls back to ``CURVCONES_THREADS`` when None. ``0`` means auto.

	Returns:
		Number of workers, at least 1

	Raises:
		RangeError: If the setting is negative or not an integer
	"""
	if value is None:
		value = os.environ.get(THREADS_ENV_VAR, "0")
	try:
		threads = int(value)
	except (TypeError, ValueError) as e:
		msg = f"{THREADS_ENV_VAR} must be a non-negative integer, got {value!r}"
		raise RangeError(msg) from e
	if threads < 0:
		msg = f"{THREADS_ENV_VAR} must be a non-negative integer, got {threads}"
		raise RangeError(msg)
	if threads == 0:
		return os.cpu_count() or 1
	return threads


def setup_logging(level: int = logging.WARNING, log_file: Path | None = None) -> None:
	"""Setup logging configuration.

	Log records go to stderr (and optionally a file) so that reports on stdout stay machine readable.
	"""
	handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
	if log_file is not None:
		log_file.parent.mkdir(parents=True, exist_ok=True)
		handlers.append(logging.FileHandler(log_file))

	logging.basicConfig(level=level, format=LOG_FORMAT, handlers=handlers, force=True)
