"""Test the curvcones command line."""

import json

import pytest
from typer.testing import CliRunner

from curvcones import models
from curvcones.cli.__main__ import app

from .conftest import (
	FLAT_CHART_PATH,
	FLAT_SPHERICAL_CHART_PATH,
	MALFORMED_CHART_PATH,
	NONCOMPACT_CHART_PATH,
	PRODUCT_CHART_PATH,
	SPHERE_CHART_PATH,
	STEREOGRAPHIC_CHART_PATH,
)

SMALL_SUITE = ["--samples", "100", "--draws", "1000"]


@pytest.fixture
def runner():
	"""Return a CLI runner."""
	return CliRunner()


class TestModelCommand:
	"""Test the model and models commands."""

	def test_round_sphere(self, runner):
		result = runner.invoke(app, ["model", "s3"])
		assert result.exit_code == 0
		assert "# curvcones report: S^3" in result.stdout
		assert "- conclusion: SphericalSpaceForm" in result.stdout

	def test_product(self, runner):
		result = runner.invoke(app, ["model", "s2xs1"])
		assert result.exit_code == 0
		assert "- conclusion: S2xS1 or RP2xS1" in result.stdout

	def test_kahler_product(self, runner):
		result = runner.invoke(app, ["model", "cp1xcp1", "--format", "json"])
		assert result.exit_code == 0
		data = json.loads(result.stdout)
		assert data["geometry"]["kind"] == "kahler"
		assert data["points"][0]["spectrum"] == pytest.approx([0.0, 0.0, 2.0, 2.0])
		assert data["verdict"]["conclusion"] == "CP1xCP1"

	def test_forced_riemannian(self, runner):
		result = runner.invoke(app, ["model", "cpn:2", "-g", "riemannian", "-f", "json"])
		assert result.exit_code == 0
		data = json.loads(result.stdout)
		assert data["points"][0]["spectrum"] == pytest.approx([0.0, 0.0, 1.0, 1.0, 1.0, 3.0], abs=1e-12)
		assert data["points"][0]["status"] == "Outside"

	def test_unknown_model(self, runner):
		result = runner.invoke(app, ["model", "klein-bottle"])
		assert result.exit_code == 2
		assert "unknown model" in result.output

	def test_k_out_of_range(self, runner):
		result = runner.invoke(app, ["model", "s3", "--k", "5"])
		assert result.exit_code == 2

	def test_models(self, runner):
		result = runner.invoke(app, ["models"])
		assert result.exit_code == 0
		assert "cp1xcp1" in result.stdout


class TestConesCommand:
	"""Test the cones command."""

	def test_cp2_is_outside(self, runner):
		result = runner.invoke(app, ["cones", "--spectrum", "0,0,1,1,1,3", "--k", "2", "-f", "json"])
		assert result.exit_code == 0
		data = json.loads(result.stdout)
		assert data["points"][0]["status"] == "Outside"
		assert data["geometry"]["N"] == 6

	def test_boundary(self, runner):
		result = runner.invoke(app, ["cones", "-s", "0,0,1"])
		assert result.exit_code == 0
		assert "| Boundary |" in result.stdout

	def test_kahler(self, runner):
		result = runner.invoke(app, ["cones", "-s", "1,1,1,3", "--kahler-n", "2", "-f", "json"])
		assert result.exit_code == 0
		data = json.loads(result.stdout)
		assert data["points"][0]["status"] == "Interior"
		assert data["geometry"]["n"] == 2

	def test_length_mismatch(self, runner):
		result = runner.invoke(app, ["cones", "-s", "1,1,1", "--kahler-n", "2"])
		assert result.exit_code == 2

	def test_not_a_number(self, runner):
		result = runner.invoke(app, ["cones", "-s", "1,x,1"])
		assert result.exit_code == 2
		assert "comma-separated" in result.output

	@pytest.mark.parametrize("spectrum", ["nan,1,2", "inf,1,2", "1,-inf,2"])
	def test_non_finite(self, runner, spectrum):
		result = runner.invoke(app, ["cones", "-s", spectrum, "--k", "2"])
		assert result.exit_code == 2
		assert "finite" in result.output


class TestAnalyzeCommand:
	"""Test the analyze command."""

	def test_stereographic_sphere(self, runner):
		result = runner.invoke(app, ["analyze", str(STEREOGRAPHIC_CHART_PATH), "--format", "json"])
		assert result.exit_code == 0
		data = json.loads(result.stdout)
		assert len(data["points"]) == 8
		assert data["points"][0]["point"] == [-0.5, -0.5, -0.5]
		assert data["verdict"]["conclusion"] == "SphericalSpaceForm"
		assert "compactness: user-asserted" in data["verdict"]["caveats"]

	def test_flat(self, runner):
		result = runner.invoke(app, ["analyze", str(FLAT_CHART_PATH)])
		assert result.exit_code == 0
		assert "- conclusion: Flat" in result.stdout

	def test_flat_in_curvilinear_coordinates(self, runner):
		result = runner.invoke(app, ["analyze", str(FLAT_SPHERICAL_CHART_PATH), "-f", "json"])
		assert result.exit_code == 0
		data = json.loads(result.stdout)
		assert [point["status"] for point in data["points"]] == ["Boundary"] * 3
		assert data["verdict"]["conclusion"] == "Flat"

	def test_product_chart(self, runner):
		result = runner.invoke(app, ["analyze", str(PRODUCT_CHART_PATH), "-f", "json"])
		assert result.exit_code == 0
		data = json.loads(result.stdout)
		assert all(point["spectrum"][:2] == [0.0, 0.0] for point in data["points"])
		assert data["verdict"]["conclusion"] == "S2xS1 or RP2xS1"

	def test_threads_from_environment(self, runner):
		serial = runner.invoke(app, ["analyze", str(STEREOGRAPHIC_CHART_PATH), "-f", "json", "--threads", "1"])
		threaded = runner.invoke(
			app, ["analyze", str(STEREOGRAPHIC_CHART_PATH), "-f", "json"], env={"CURVCONES_THREADS": "3"}
		)
		assert threaded.exit_code == serial.exit_code == 0
		assert json.loads(threaded.stdout)["points"] == json.loads(serial.stdout)["points"]
		assert json.loads(threaded.stdout)["flags"]["threads"] == 3

	def test_malformed(self, runner):
		result = runner.invoke(app, ["analyze", str(MALFORMED_CHART_PATH)])
		assert result.exit_code == 1
		assert "$.metric[1]" in result.output

	def test_not_utf8(self, runner, tmp_path):
		path = tmp_path / "latin1.json"
		path.write_bytes(b'{"dimension": 3, "name": "\xff\xfe"}')
		result = runner.invoke(app, ["analyze", str(path)])
		assert result.exit_code == 1
		assert "UTF-8" in result.output

	def test_missing_file(self, runner, tmp_path):
		result = runner.invoke(app, ["analyze", str(tmp_path / "absent.json")])
		assert result.exit_code == 1

	def test_noncompact_refused(self, runner):
		result = runner.invoke(app, ["analyze", str(NONCOMPACT_CHART_PATH)])
		assert result.exit_code == 2
		assert "compact" in result.output

	def test_compactness_denied(self, runner):
		result = runner.invoke(app, ["analyze", str(STEREOGRAPHIC_CHART_PATH), "--no-compact"])
		assert result.exit_code == 2

	def test_compactness_asserted(self, runner):
		result = runner.invoke(app, ["analyze", str(NONCOMPACT_CHART_PATH), "--compact"])
		assert result.exit_code == 0
		assert "- conclusion: NoConclusion" in result.stdout

	def test_two_dimensional_chart(self, runner):
		result = runner.invoke(app, ["analyze", str(SPHERE_CHART_PATH)])
		assert result.exit_code == 2

	def test_every_point_rejected(self, runner, tmp_path):
		chart = {
			"dimension": 3,
			"coordinates": ["x", "y", "z"],
			"metric": [["-1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
			"samples": {"points": [[0.0, 0.0, 0.0]]},
		}
		path = tmp_path / "indefinite.json"
		path.write_text(json.dumps(chart))
		result = runner.invoke(app, ["analyze", str(path)])
		assert result.exit_code == 3


class TestVerifyCommand:
	"""Test the verify command."""

	def test_selected_checks(self, runner):
		arguments = ["verify", *SMALL_SUITE, "--check", "cp2-golden-spectrum", "--check", "betti-table"]
		result = runner.invoke(app, arguments)
		assert result.exit_code == 0
		assert "| cp2-golden-spectrum | pass |" in result.stdout
		assert "| betti-table | pass |" in result.stdout
		assert "round-sphere" not in result.stdout

	def test_json(self, runner):
		result = runner.invoke(app, ["verify", *SMALL_SUITE, "-c", "round-sphere", "-f", "json"])
		assert result.exit_code == 0
		(check,) = json.loads(result.stdout)["checks"]
		assert check["name"] == "round-sphere"
		assert check["passed"] is True
		assert "elapsed" not in check

	def test_json_is_reproducible(self, runner):
		arguments = ["verify", *SMALL_SUITE, "-c", "cp2-golden-spectrum", "-c", "round-sphere", "-f", "json"]
		first = runner.invoke(app, arguments)
		second = runner.invoke(app, arguments)
		assert first.exit_code == second.exit_code == 0
		assert first.stdout == second.stdout

	def test_injected_fault(self, runner, monkeypatch):
		monkeypatch.setattr(models, "CP2_GOLDEN_SPECTRUM", (0.0, 0.0, 1.0, 1.0, 1.0, 4.0))
		result = runner.invoke(app, ["verify", *SMALL_SUITE, "-c", "cp2-golden-spectrum"])
		assert result.exit_code == 4
		assert "cp2-golden-spectrum" in result.output
		assert "| cp2-golden-spectrum | FAIL |" in result.output

	def test_unknown_check(self, runner):
		result = runner.invoke(app, ["verify", "-c", "no-such-check"])
		assert result.exit_code == 2

	def test_legacy_alias(self, runner):
		result = runner.invoke(app, ["verify-paper", *SMALL_SUITE, "-c", "betti-table"])
		assert result.exit_code == 0


class TestInfoCommands:
	"""Test version and info."""

	def test_version(self, runner):
		result = runner.invoke(app, ["version"])
		assert result.exit_code == 0
		assert "curvcones version" in result.stdout

	def test_info(self, runner):
		result = runner.invoke(app, ["info"])
		assert result.exit_code == 0
		assert "chartengine" in result.stdout
