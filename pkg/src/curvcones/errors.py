"""Exception hierarchy for curvcones."""


class CurvConesError(Exception):
	"""Base class for every error raised by curvcones."""


class RangeError(CurvConesError, ValueError):
	"""An index or parameter lies outside its documented range."""


class DomainError(CurvConesError, ValueError):
	"""A dimension or model parameter lies outside the domain of a formula."""


class ArgumentError(CurvConesError, ValueError):
	"""An invalid combination of arguments, such as i == j for a sectional curvature."""


class ValidationError(CurvConesError, ValueError):
	"""A tensor violates one of its algebraic symmetries."""

	def __init__(self, message: str, residual: float = 0.0, identity: str = "") -> None:
		"""Initialize the error.

		Args:
			message: Human readable explanation
			residual: Worst residual found
			identity: Name of the violated identity
		"""
		super().__init__(message)
		self.residual = residual
		self.identity = identity


class ConsistencyError(CurvConesError):
	"""Inputs that should agree with each other do not."""


class PreconditionError(CurvConesError):
	"""An operation was invoked without its precondition holding."""


class HypothesisError(CurvConesError):
	"""A closed form was requested outside the hypothesis it depends on."""


class NumericalError(CurvConesError, ArithmeticError):
	"""A numerical routine failed or produced residuals above tolerance."""

	def __init__(self, message: str, residual: float = float("nan")) -> None:
		"""Initialize the error.

		Args:
			message: Human readable explanation
			residual: Residual that triggered the failure
		"""
		super().__init__(message)
		self.residual = residual


class ChartError(CurvConesError):
	"""Base class for metric chart problems."""


class ChartSchemaError(ChartError):
	"""A chart file does not follow the chart schema."""

	def __init__(self, message: str, path: str = "$") -> None:
		"""Initialize the error.

		Args:
			message: Human readable explanation
			path: Schema path of the offending value, e.g. ``$.metric[1][0]``
		"""
		super().__init__(f"{path}: {message}")
		self.path = path


class IndefiniteMetricError(ChartError):
	"""The metric is not positive definite at a point."""


class SingularMetricError(ChartError):
	"""The metric is too badly conditioned at a point."""


class StencilError(ChartError):
	"""A finite-difference stencil leaves the chart domain."""


class EmptySampleError(ChartError):
	"""A chart sample specification yields no points."""


class ExpressionError(CurvConesError):
	"""Base class for problems with metric component expressions."""


class EvaluationError(ExpressionError):
	"""An expression could not be evaluated at a point (e.g. sqrt of a negative)."""
