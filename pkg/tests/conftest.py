"""Pytest configuration file."""

from pathlib import Path

import numpy as np
import pytest

from curvcones.chartengine import MetricChart
from curvcones.models import build, parse_catalog_name

# Define paths to test files
BASE_TEST_PATH = Path(__file__).parent
TEST_CASES_PATH = BASE_TEST_PATH / "test_cases"
SPHERE_CHART_PATH = TEST_CASES_PATH / "sphere2.json"
STEREOGRAPHIC_CHART_PATH = TEST_CASES_PATH / "sphere3_stereographic.json"
FLAT_CHART_PATH = TEST_CASES_PATH / "flat3.json"
FLAT_SPHERICAL_CHART_PATH = TEST_CASES_PATH / "flat3_spherical.json"
PRODUCT_CHART_PATH = TEST_CASES_PATH / "s2xs1.json"
MALFORMED_CHART_PATH = TEST_CASES_PATH / "malformed.json"
NONCOMPACT_CHART_PATH = TEST_CASES_PATH / "hyperbolic3_noncompact.json"
GOLDEN_REPORT_PATH = TEST_CASES_PATH / "golden_report.md"

CP2_SPECTRUM = (0.0, 0.0, 1.0, 1.0, 1.0, 3.0)


@pytest.fixture
def rng():
	"""Return a seeded random generator."""
	return np.random.default_rng(20240611)


@pytest.fixture(scope="module")
def sphere_chart():
	"""Return the unit 2-sphere chart g = diag(1, sin²θ)."""
	return MetricChart.load(SPHERE_CHART_PATH)


@pytest.fixture(scope="module")
def stereographic_chart():
	"""Return the unit 3-sphere in stereographic coordinates."""
	return MetricChart.load(STEREOGRAPHIC_CHART_PATH)


@pytest.fixture(scope="module")
def flat_chart():
	"""Return the Euclidean 3-dimensional chart."""
	return MetricChart.load(FLAT_CHART_PATH)


@pytest.fixture(scope="module")
def cp2():
	"""Return the catalog tensors of CP² with the Fubini–Study metric."""
	return build(parse_catalog_name("cpn:2"))
