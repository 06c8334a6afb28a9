"""curvcones: curvature-operator spectra, shifted-cone tests and classification verdicts."""

from importlib.metadata import PackageNotFoundError, version

try:
	__version__ = version("curvcones")
except PackageNotFoundError:
	__version__ = "unknown"

from .chartengine import MetricChart, analyze_chart, curvature_at
from .classify import Conclusion, Evidence, GeometryKind, Verdict, classify
from .errors import CurvConesError
from .expression import ParseError, parse_expression
from .kahlercurv import KahlerCurvatureTensor, assemble_kahler_operator, kahler_spectrum
from .models import build, parse_catalog_name
from .report import Report
from .riemcurv import RiemannTensor, assemble_operator, eigen_spectrum
from .symcone import ConeStatus, ShiftKind, Spectrum, cone_membership, shift, shift_threshold
from .verification import ReproductionSuite

__all__ = [
	"Conclusion",
	"ConeStatus",
	"CurvConesError",
	"Evidence",
	"GeometryKind",
	"KahlerCurvatureTensor",
	"MetricChart",
	"ParseError",
	"Report",
	"ReproductionSuite",
	"RiemannTensor",
	"ShiftKind",
	"Spectrum",
	"Verdict",
	"__version__",
	"analyze_chart",
	"assemble_kahler_operator",
	"assemble_operator",
	"build",
	"classify",
	"cone_membership",
	"curvature_at",
	"eigen_spectrum",
	"kahler_spectrum",
	"parse_catalog_name",
	"parse_expression",
	"shift",
	"shift_threshold",
]
