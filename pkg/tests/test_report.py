"""Test report serialization and rendering."""

import json
import math

import pytest

from curvcones.classify import Conclusion, Evidence, GeometryKind, Theorem, Verdict, classify
from curvcones.models import build, parse_catalog_name
from curvcones.report import Conventions, PointReport, Report

from .conftest import GOLDEN_REPORT_PATH


@pytest.fixture
def golden_report():
	return Report(
		title="S^3",
		input={"command": "model", "model": "s3"},
		geometry={"kind": "riemannian", "n": 3, "k": 2, "alpha": 0.0, "shift": "riemannian", "compact": True},
		flags={"k": 2, "format": "md"},
		points=(
			PointReport(
				label="p1",
				spectrum=(1.0, 1.0, 1.0),
				shifted=(1.0, 1.0, 1.0),
				sigmas=(3.0, 3.0),
				status="Interior",
				k_smallest_sum=2.0,
				point=(0.1, 0.2, -0.3),
			),
		),
		skipped=({"point": [0.0, 0.0, 0.0], "reason": "metric is not positive definite"},),
		verdict=Verdict(
			conclusion=Conclusion.SPHERICAL_SPACE_FORM,
			theorem=Theorem.SPHERE,
			k=2,
			points_checked=1,
			caveats=("sampling: 1 point(s) checked", "compactness: user-asserted"),
		),
		checks=(
			{
				"name": "round-sphere",
				"passed": True,
				"statement": "unit sphere operator is the identity",
				"measured": "max error 0",
			},
		),
		version="0.1.0",
	)


@pytest.fixture
def cp2_report():
	tensors = build(parse_catalog_name("cpn:2"))
	evidence = Evidence.collect([tensors.riemannian_spectrum()], GeometryKind.RIEMANNIAN, 4, 2)
	return Report.from_evidence(
		title="CP^2",
		source={"command": "model", "model": "cpn:2"},
		evidence=evidence,
		labels=["CP^2"],
		flags={"k": 2},
		verdict=classify(evidence),
	)


class TestMarkdown:
	def test_golden(self, golden_report):
		assert golden_report.to_markdown() == GOLDEN_REPORT_PATH.read_text(encoding="utf-8")

	def test_no_verdict(self):
		text = Report(title="spectrum", input={}, geometry={}, flags={}).to_markdown()
		assert text.endswith("## Verdict\n\nnone\n")
		assert "## Points" not in text

	def test_failed_check(self):
		check = {"name": "fd-engine", "passed": False, "statement": "", "measured": "2e-3"}
		text = Report(title="suite", input={}, geometry={}, flags={}, checks=(check,)).to_markdown()
		assert "| fd-engine | FAIL | 2e-3 |\n" in text

	def test_betti_line(self):
		verdict = Verdict(Conclusion.K_POSITIVE, Theorem.K_POSITIVITY, k=3, points_checked=1, betti_vanishing=(1, 3))
		text = Report(title="t", input={}, geometry={}, flags={}, verdict=verdict).to_markdown()
		assert "- vanishing Betti numbers: b_1, b_3" in text


class TestJson:
	def test_round_trip(self, golden_report):
		assert Report.from_json(golden_report.to_json()) == golden_report

	def test_deterministic(self, cp2_report):
		assert cp2_report.to_json() == cp2_report.to_json()
		assert cp2_report.to_markdown() == cp2_report.to_markdown()

	def test_schema(self, cp2_report):
		data = json.loads(cp2_report.to_json())
		assert data["tool"] == "curvcones"
		assert data["geometry"]["kind"] == "riemannian"
		assert data["geometry"]["k"] == 2
		assert data["conventions"]["compactness"] == "user-asserted"
		assert data["verdict"]["conclusion"] == "NoConclusion"
		assert data["points"][0]["status"] == "Outside"
		assert data["points"][0]["point"] is None


class TestFromEvidence:
	def test_cp2_point(self, cp2_report):
		(point,) = cp2_report.points
		assert point.spectrum == pytest.approx((0.0, 0.0, 1.0, 1.0, 1.0, 3.0), abs=1e-12)
		assert point.k_smallest_sum == pytest.approx(0.0, abs=1e-12)
		assert len(point.sigmas) == 2
		assert cp2_report.geometry["alpha"] == pytest.approx((1 - math.sqrt(2 / 20)) / 6)
		assert cp2_report.conventions == Conventions()

	def test_labels_must_match(self):
		tensors = build(parse_catalog_name("s3"))
		evidence = Evidence.collect([tensors.riemannian_spectrum()] * 2, GeometryKind.RIEMANNIAN, 3, 2)
		with pytest.raises(ValueError, match="zip"):
			Report.from_evidence("S^3", {}, evidence, ["only one"], {})
