"""Test the chartengine module."""

import json

import numpy as np
import pytest

from curvcones.chartengine import (
	MetricChart,
	analyze_chart,
	convergence_factor,
	curvature_at,
	metric_jet,
	orthonormal_frame,
	sample,
	snap_spectrum,
)
from curvcones.errors import (
	ChartSchemaError,
	EmptySampleError,
	IndefiniteMetricError,
	RangeError,
	SingularMetricError,
	StencilError,
)
from curvcones.riemcurv import assemble_operator, eigen_spectrum, sectional
from curvcones.symcone import Spectrum

from .conftest import FLAT_SPHERICAL_CHART_PATH, MALFORMED_CHART_PATH


def chart(metric, points=((0.0, 0.0),), coordinates=("x", "y"), **extra):
	return MetricChart.from_dict(
		{
			"dimension": len(coordinates),
			"coordinates": list(coordinates),
			"metric": metric,
			"samples": {"points": [list(point) for point in points]},
			**extra,
		}
	)


class TestLoading:
	def test_sphere_chart(self, sphere_chart):
		assert sphere_chart.dimension == 2
		assert sphere_chart.coordinates == ("theta", "phi")
		assert sphere_chart.text_symmetric
		assert sphere_chart.compact

	def test_numeric_components(self, flat_chart):
		assert flat_chart.metric_at((0.0, 0.0, 0.0)) == pytest.approx(np.eye(3))

	def test_malformed_reports_path(self):
		with pytest.raises(ChartSchemaError) as excinfo:
			MetricChart.load(MALFORMED_CHART_PATH)
		assert excinfo.value.path == "$.metric[1]"
		assert "$.metric[1]" in str(excinfo.value)

	def test_invalid_json(self, tmp_path):
		path = tmp_path / "broken.json"
		path.write_text("{not json")
		with pytest.raises(ChartSchemaError) as excinfo:
			MetricChart.load(path)
		assert excinfo.value.path == "$"

	def test_not_utf8(self, tmp_path):
		path = tmp_path / "latin1.json"
		path.write_bytes(b'{"dimension": 3, "name": "\xff\xfe"}')
		with pytest.raises(ChartSchemaError) as excinfo:
			MetricChart.load(path)
		assert excinfo.value.path == "$"
		assert "UTF-8" in str(excinfo.value)

	@pytest.mark.parametrize(
		("patch", "path"),
		[
			({"dimension": "2"}, "$.dimension"),
			({"dimension": 1}, "$.dimension"),
			({"coordinates": ["x", "sin"]}, "$.coordinates[1]"),
			({"coordinates": ["x", "x"]}, "$.coordinates"),
			({"metric": [["1", "0"], ["0", "z"]]}, "$.metric[1][1]"),
			({"metric": [["1", "0"], ["0", "sin("]]}, "$.metric[1][1]"),
			({"metric": [["1", "0"], ["0", True]]}, "$.metric[1][1]"),
			({"samples": {"grid": {}, "points": []}}, "$.samples"),
			({"samples": {"grid": {"ranges": [[0, 1], [0, 1]], "counts": [2, -1]}}}, "$.samples.grid.counts[1]"),
			({"samples": {"grid": {"ranges": [[1, 0], [0, 1]], "counts": [2, 2]}}}, "$.samples.grid.ranges[0]"),
			({"samples": {"points": [[0.0, "a"]]}}, "$.samples.points[0][1]"),
			({"compact": "yes"}, "$.compact"),
		],
	)
	def test_schema_paths(self, patch, path):
		document = {
			"dimension": 2,
			"coordinates": ["x", "y"],
			"metric": [["1", "0"], ["0", "1"]],
			"samples": {"points": [[0.0, 0.0]]},
		}
		document.update(patch)
		with pytest.raises(ChartSchemaError) as excinfo:
			MetricChart.from_dict(json.loads(json.dumps(document)))
		assert excinfo.value.path == path

	def test_asymmetric_text_checked_numerically(self):
		metric = chart([["1", "x*y"], ["y*x", "1"]])
		assert not metric.text_symmetric
		g = metric.metric_at((2.0, 3.0))
		assert g[0, 1] == g[1, 0] == pytest.approx(6.0)


class TestSample:
	def test_grid_one_axis(self):
		metric = MetricChart.from_dict(
			{
				"dimension": 2,
				"coordinates": ["x", "y"],
				"metric": [["1", "0"], ["0", "1"]],
				"samples": {"grid": {"ranges": [[0, 1], [2, 2]], "counts": [3, 1]}},
			}
		)
		assert [point[0] for point in sample(metric)] == [0.0, 0.5, 1.0]

	def test_row_major_order(self, sphere_chart):
		assert sample(sphere_chart) == [
			(0.5, 0.0),
			(0.5, 6.0),
			(1.5, 0.0),
			(1.5, 6.0),
			(2.5, 0.0),
			(2.5, 6.0),
		]

	def test_explicit_list(self, flat_chart):
		assert sample(flat_chart) == [(0.1, 0.2, 0.3), (1.0, -2.0, 0.5)]

	def test_zero_count(self):
		metric = MetricChart.from_dict(
			{
				"dimension": 2,
				"coordinates": ["x", "y"],
				"metric": [["1", "0"], ["0", "1"]],
				"samples": {"grid": {"ranges": [[0, 1], [0, 1]], "counts": [0, 3]}},
			}
		)
		with pytest.raises(EmptySampleError):
			sample(metric)

	def test_empty_list(self):
		with pytest.raises(EmptySampleError):
			sample(chart([["1", "0"], ["0", "1"]], points=()))


class TestCurvature:
	def test_sphere_sectional(self, sphere_chart):
		tensor = curvature_at(sphere_chart, (1.0, 0.5), step=1e-3)
		assert sectional(tensor, 0, 1) == pytest.approx(1.0, abs=1e-5)

	def test_flat_is_zero(self, flat_chart):
		tensor = curvature_at(flat_chart, (0.1, 0.2, 0.3))
		assert np.abs(tensor.components).max() <= 1e-8

	def test_constant_coefficient_metric_is_flat(self):
		metric = chart([["2", "0.5"], ["0.5", "3"]])
		assert np.abs(curvature_at(metric, (0.3, -0.7)).components).max() <= 1e-8

	def test_stereographic_sphere(self, stereographic_chart):
		tensor = curvature_at(stereographic_chart, (0.1, 0.2, -0.3))
		spectrum = eigen_spectrum(assemble_operator(tensor)).spectrum
		assert spectrum.values == pytest.approx((1.0, 1.0, 1.0), abs=1e-4)

	def test_hyperbolic_half_space(self):
		metric = chart(
			[["1/z^2", "0", "0"], ["0", "1/z^2", "0"], ["0", "0", "1/z^2"]],
			points=((0.0, 0.0, 1.0),),
			coordinates=("x", "y", "z"),
		)
		spectrum = eigen_spectrum(assemble_operator(curvature_at(metric, (0.2, -0.1, 1.5)))).spectrum
		assert spectrum.values == pytest.approx((-1.0, -1.0, -1.0), abs=1e-4)

	def test_orthonormal_frame(self, stereographic_chart):
		g, _, _ = metric_jet(stereographic_chart, (0.1, 0.2, -0.3))
		F = orthonormal_frame(g)
		assert np.allclose(F.T @ g @ F, np.eye(3), atol=1e-12)
		assert np.allclose(np.triu(F), F)

	def test_convergence_is_second_order(self, sphere_chart):
		factor = convergence_factor(sphere_chart, (1.0, 0.5), (1.0,), step=1e-2)
		assert 3.5 <= factor <= 4.5


class TestCurvatureErrors:
	def test_point_length(self, sphere_chart):
		with pytest.raises(RangeError):
			curvature_at(sphere_chart, (1.0,))

	def test_step_must_be_positive(self, sphere_chart):
		with pytest.raises(RangeError):
			curvature_at(sphere_chart, (1.0, 0.5), step=0.0)

	def test_stencil_leaves_domain(self, sphere_chart):
		with pytest.raises(StencilError):
			curvature_at(sphere_chart, (0.001, 0.5), step=1e-3)

	def test_stencil_cannot_be_evaluated(self):
		with pytest.raises(StencilError):
			curvature_at(chart([["sqrt(x)", "0"], ["0", "1"]]), (0.0, 0.0))

	def test_indefinite_metric(self):
		with pytest.raises(IndefiniteMetricError):
			curvature_at(chart([["-1", "0"], ["0", "1"]]), (0.0, 0.0))

	def test_singular_metric(self):
		with pytest.raises(SingularMetricError):
			curvature_at(chart([["1e6", "0"], ["0", "1e-7"]]), (0.0, 0.0))


class TestAnalyzeChart:
	def test_skips_bad_points(self):
		metric = chart([["x", "0"], ["0", "1"]], points=((1.0, 0.0), (-1.0, 0.0), (2.0, 0.0)))
		results = analyze_chart(metric)
		assert [result.point for result in results] == [(1.0, 0.0), (-1.0, 0.0), (2.0, 0.0)]
		assert results[0].tensor is not None
		assert results[1].tensor is None
		assert "positive definite" in results[1].skipped

	def test_threads_do_not_change_order(self, stereographic_chart):
		serial = analyze_chart(stereographic_chart, threads=1)
		parallel = analyze_chart(stereographic_chart, threads=4)
		assert [result.point for result in parallel] == [result.point for result in serial]
		for left, right in zip(serial, parallel, strict=True):
			assert np.array_equal(left.tensor.components, right.tensor.components)


class TestSnapSpectrum:
	def test_noise_is_zeroed(self):
		snapped = snap_spectrum(Spectrum.from_values([-7.5e-7, 1.4e-10, 1.0]))
		assert snapped.values == (0.0, 0.0, 1.0)

	def test_band_scales_with_magnitude(self):
		snapped = snap_spectrum(Spectrum.from_values([5e-4, 10.0, 20.0]))
		assert snapped.values == (0.0, 10.0, 20.0)
		kept = snap_spectrum(Spectrum.from_values([5e-4, 1.0]))
		assert kept.values == (5e-4, 1.0)

	def test_negative_curvature_survives(self):
		snapped = snap_spectrum(Spectrum.from_values([-1.0, -1.0, -1.0]))
		assert snapped.values == (-1.0, -1.0, -1.0)

	def test_flat_metric_in_spherical_coordinates(self):
		flat = MetricChart.load(FLAT_SPHERICAL_CHART_PATH)
		for result in analyze_chart(flat):
			spectrum = eigen_spectrum(assemble_operator(result.tensor)).spectrum
			assert snap_spectrum(spectrum).values == (0.0, 0.0, 0.0)
