"""Test the symcone module."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from curvcones.errors import ConsistencyError, DomainError, RangeError
from curvcones.symcone import (
	ConeStatus,
	ConeVerdict,
	DichotomyCase,
	ShiftKind,
	ShiftParameter,
	Spectrum,
	cone_masks,
	cone_membership,
	dichotomy_batch,
	dichotomy_check,
	elementary_symmetric,
	elementary_symmetric_batch,
	k_smallest_sum,
	product_boundary_point,
	shift,
	shift_batch,
	shift_threshold,
	shifted_sigma_closed_form,
	sigma2_from_moments,
)

from .conftest import CP2_SPECTRUM

finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
vectors = st.lists(finite, min_size=1, max_size=8)


def brute_force_sigma(values, j):
	return math.fsum(math.prod(combo) for combo in itertools.combinations(values, j))


class TestSpectrum:
	def test_values_are_sorted(self):
		spectrum = Spectrum((3.0, 1.0, 2.0))
		assert spectrum.values == (1.0, 2.0, 3.0)
		assert spectrum.total == 6.0
		assert spectrum.length == 3

	def test_empty_spectrum_rejected(self):
		with pytest.raises(RangeError):
			Spectrum(())

	def test_non_finite_rejected(self):
		with pytest.raises(RangeError):
			Spectrum((1.0, math.nan))

	def test_from_values_accepts_arrays(self):
		assert Spectrum.from_values(np.array([[2.0, 1.0]])).values == (1.0, 2.0)

	def test_scaled(self):
		assert Spectrum((1.0, 2.0)).scaled(2.0).values == (2.0, 4.0)


class TestElementarySymmetric:
	def test_pairwise_products(self):
		assert elementary_symmetric((1, 2, 3), 2) == pytest.approx(11.0)

	def test_sigma1_is_sum(self):
		assert elementary_symmetric(CP2_SPECTRUM, 1) == pytest.approx(6.0)

	def test_sigma0_is_one(self):
		assert elementary_symmetric((5.0, 7.0), 0) == 1.0

	@pytest.mark.parametrize("j", [-1, 4])
	def test_index_out_of_range(self, j):
		with pytest.raises(RangeError):
			elementary_symmetric((1, 2, 3), j)

	@given(vectors, st.data())
	def test_matches_brute_force(self, values, data):
		j = data.draw(st.integers(min_value=0, max_value=len(values)))
		expected = brute_force_sigma(values, j)
		assert elementary_symmetric(values, j) == pytest.approx(expected, rel=1e-9, abs=1e-6)

	@given(vectors, st.randoms())
	def test_permutation_invariant(self, values, random):
		shuffled = list(values)
		random.shuffle(shuffled)
		for j in range(len(values) + 1):
			assert elementary_symmetric(shuffled, j) == pytest.approx(
				elementary_symmetric(values, j), rel=1e-9, abs=1e-6
			)

	@given(vectors, st.floats(min_value=0.1, max_value=3.0))
	def test_homogeneous_of_degree_j(self, values, factor):
		scaled = [factor * v for v in values]
		for j in range(len(values) + 1):
			assert elementary_symmetric(scaled, j) == pytest.approx(
				factor**j * elementary_symmetric(values, j), rel=1e-8, abs=1e-5
			)

	@given(vectors)
	def test_sigma2_identity(self, values):
		if len(values) < 2:
			return
		assert sigma2_from_moments(values) == pytest.approx(elementary_symmetric(values, 2), rel=1e-9, abs=1e-6)

	def test_batch_matches_rowwise(self, rng):
		rows = rng.normal(size=(20, 5))
		batch = elementary_symmetric_batch(rows, 3)
		assert batch.shape == (20, 4)
		for row, sigmas in zip(rows, batch, strict=True):
			for j in range(4):
				assert sigmas[j] == pytest.approx(elementary_symmetric(row, j))


class TestShiftThreshold:
	def test_alpha2_vanishes_at_n3(self):
		assert shift_threshold(3, 2, ShiftKind.RIEMANNIAN).alpha == pytest.approx(0.0, abs=1e-15)

	@pytest.mark.parametrize("N", [3, 6, 10, 15])
	def test_last_k_vanishes(self, N):
		assert shift_threshold(N, N - 1, "riemannian").alpha == pytest.approx(0.0, abs=1e-15)

	def test_alpha2_for_n6(self):
		assert shift_threshold(6, 2, ShiftKind.RIEMANNIAN).alpha == pytest.approx((1 - 1 / math.sqrt(10)) / 6)
		assert shift_threshold(6, 2, ShiftKind.RIEMANNIAN).alpha == pytest.approx(0.11395662, abs=1e-8)

	def test_kahler_uses_n_squared(self):
		beta = shift_threshold(2, 2, ShiftKind.KAHLER)
		assert beta.size == 4
		assert beta.alpha == pytest.approx((1 - math.sqrt(2 / 6)) / 4)

	def test_decreasing_in_k(self):
		alphas = [shift_threshold(10, k, ShiftKind.RIEMANNIAN).alpha for k in range(1, 10)]
		assert all(a > b for a, b in itertools.pairwise(alphas))

	def test_small_n_is_a_domain_error(self):
		with pytest.raises(DomainError):
			shift_threshold(2, 1, ShiftKind.RIEMANNIAN)
		with pytest.raises(DomainError):
			shift_threshold(1, 1, ShiftKind.KAHLER)

	@pytest.mark.parametrize("k", [0, 6])
	def test_k_out_of_range(self, k):
		with pytest.raises(RangeError):
			shift_threshold(6, k, ShiftKind.RIEMANNIAN)

	def test_explicit_parameter_bounds(self):
		with pytest.raises(RangeError):
			ShiftParameter.explicit(-0.1)
		with pytest.raises(RangeError):
			ShiftParameter.explicit(0.25, size=4)
		assert ShiftParameter.explicit(0.2, size=4).kind is ShiftKind.EXPLICIT


class TestShift:
	def test_zero_shift_is_identity(self):
		spectrum = Spectrum(CP2_SPECTRUM)
		assert shift(spectrum, 0.0) == spectrum

	def test_alpha2_at_n3_is_identity(self):
		spectrum = Spectrum((0.0, 0.0, 1.0))
		assert shift(spectrum, shift_threshold(3, 2, ShiftKind.RIEMANNIAN)).values == pytest.approx((0, 0, 1))

	def test_total_scales_by_one_minus_alpha_n(self):
		spectrum = Spectrum(CP2_SPECTRUM)
		shifted = shift(spectrum, 0.1)
		assert shifted.total == pytest.approx((1 - 0.6) * spectrum.total)

	def test_calibrated_shift_checks_length(self):
		with pytest.raises(ConsistencyError):
			shift(Spectrum((1.0, 1.0, 1.0)), shift_threshold(6, 2, ShiftKind.RIEMANNIAN))

	@pytest.mark.parametrize(("N", "k"), [(3, 1), (3, 2), (6, 2), (6, 4), (10, 3), (28, 7)])
	def test_product_boundary_point(self, N, k):
		point = product_boundary_point(N, k)
		assert point.shifted.values == pytest.approx((point.a,) * k + (point.b,) * (N - k))
		assert point.b == pytest.approx(point.a + 1)
		assert elementary_symmetric(point.shifted, 1) == pytest.approx(math.sqrt(k * (N - k) / (N - 1)))
		assert elementary_symmetric(point.shifted, 2) == pytest.approx(0.0, abs=1e-10)

	@given(st.lists(st.floats(min_value=-2, max_value=5), min_size=3, max_size=10), st.floats(0, 0.05))
	def test_closed_form_matches_direct(self, values, alpha):
		spectrum = Spectrum(tuple(values))
		shifted = shift(spectrum, alpha)
		sigma1, sigma2 = shifted_sigma_closed_form(spectrum, alpha)
		assert sigma1 == pytest.approx(elementary_symmetric(shifted, 1), abs=1e-8)
		assert sigma2 == pytest.approx(elementary_symmetric(shifted, 2), rel=1e-8, abs=1e-7)

	def test_batch_matches_single(self, rng):
		rows = rng.normal(size=(5, 6))
		shifted = shift_batch(rows, 0.1)
		for row, expected in zip(rows, shifted, strict=True):
			assert tuple(sorted(expected)) == pytest.approx(shift(Spectrum.from_values(row), 0.1).values)


class TestConeMembership:
	def test_positive_spectrum_is_interior(self):
		assert cone_membership(Spectrum((1.0, 1.0, 1.0)), 3, 1e-9).status is ConeStatus.INTERIOR

	@given(st.lists(st.floats(min_value=0.5, max_value=5), min_size=1, max_size=8))
	def test_all_positive_entries_are_interior_of_full_cone(self, values):
		spectrum = Spectrum(tuple(values))
		assert cone_membership(spectrum, spectrum.length).status is ConeStatus.INTERIOR

	@given(
		st.lists(st.floats(min_value=0.5, max_value=5), max_size=7),
		st.floats(min_value=-5, max_value=0),
		st.randoms(),
	)
	def test_non_positive_entry_leaves_full_cone(self, values, bad, random):
		entries = [*values, bad]
		random.shuffle(entries)
		spectrum = Spectrum(tuple(entries))
		assert cone_membership(spectrum, spectrum.length).status is not ConeStatus.INTERIOR

	@pytest.mark.parametrize(
		("values", "status"),
		[
			((1.0, 2.0, 3.0, 4.0), ConeStatus.INTERIOR),
			((0.0, 1.0, 2.0), ConeStatus.BOUNDARY),
			((-0.5, 1.0, 2.0, 3.0), ConeStatus.OUTSIDE),
			((-1.0, -1.0, 5.0), ConeStatus.OUTSIDE),
		],
	)
	def test_full_cone_examples(self, values, status):
		assert cone_membership(Spectrum(values), len(values)).status is status

	def test_product_is_boundary(self):
		shifted = shift(Spectrum((0.0, 0.0, 1.0)), shift_threshold(3, 2, ShiftKind.RIEMANNIAN))
		verdict = cone_membership(shifted, 2, 1e-9)
		assert verdict.status is ConeStatus.BOUNDARY
		assert verdict.sigmas == pytest.approx((1.0, 0.0), abs=1e-12)
		assert verdict.in_closure

	def test_cp2_is_outside(self):
		shifted = shift(Spectrum(CP2_SPECTRUM), shift_threshold(6, 2, ShiftKind.RIEMANNIAN))
		verdict = cone_membership(shifted, 2, 1e-9)
		assert verdict.status is ConeStatus.OUTSIDE
		assert verdict.sigmas[0] == pytest.approx(1.897, abs=1e-3)
		assert not verdict.in_closure

	def test_tolerance_must_be_positive(self):
		with pytest.raises(RangeError):
			cone_membership(Spectrum((1.0, 1.0)), 1, 0.0)

	def test_cone_index_range(self):
		with pytest.raises(RangeError):
			cone_membership(Spectrum((1.0, 1.0)), 3)

	def test_from_sigmas(self):
		assert ConeVerdict.from_sigmas([1.0, -1e-12], 1e-9).status is ConeStatus.BOUNDARY
		assert ConeVerdict.from_sigmas([1.0, -1e-3], 1e-9).status is ConeStatus.OUTSIDE

	@given(st.lists(st.floats(min_value=-1, max_value=3), min_size=3, max_size=8), st.floats(0.1, 10))
	def test_status_is_scale_invariant(self, values, factor):
		spectrum = Spectrum(tuple(values))
		sigmas = [elementary_symmetric(spectrum, j) for j in range(1, 3)]
		if min(abs(s) for s in sigmas) < 1e-6:
			return
		assert cone_membership(spectrum, 2).status is cone_membership(spectrum.scaled(factor), 2).status

	def test_masks_match_single(self, rng):
		rows = rng.uniform(-0.5, 2.0, size=(200, 4))
		interior, closure = cone_masks(rows, 2)
		for row, inside, closed in zip(rows, interior, closure, strict=True):
			verdict = cone_membership(Spectrum.from_values(row), 2)
			assert inside == (verdict.status is ConeStatus.INTERIOR)
			assert closed == verdict.in_closure


class TestKSmallestSum:
	@pytest.mark.parametrize(
		("values", "k", "expected"), [(CP2_SPECTRUM, 2, 0.0), ((-1.0, 2.0, 3.0), 2, 1.0), (CP2_SPECTRUM, 3, 1.0)]
	)
	def test_examples(self, values, k, expected):
		assert k_smallest_sum(Spectrum(values), k) == pytest.approx(expected)

	def test_is_minimum_over_subsets(self, rng):
		values = rng.normal(size=6)
		smallest = min(sum(combo) for combo in itertools.combinations(values, 3))
		assert k_smallest_sum(Spectrum.from_values(values), 3) == pytest.approx(smallest)

	def test_range(self):
		with pytest.raises(RangeError):
			k_smallest_sum(Spectrum((1.0,)), 2)


class TestDichotomy:
	def test_degenerate_equal_tail(self):
		spectrum = Spectrum((0.0, 0.0, 1.0, 1.0, 1.0, 1.0))
		assert dichotomy_check(spectrum, 2, 1e-9) is DichotomyCase.DEGENERATE_EQUAL_TAIL

	def test_strictly_positive(self):
		spectrum = Spectrum((0.1, 0.2, 1.0, 1.0, 1.0, 1.0))
		assert dichotomy_check(spectrum, 2, 1e-9) is DichotomyCase.STRICTLY_POSITIVE_SUM

	def test_uncertified_input_is_rejected_by_the_cone(self):
		spectrum = Spectrum((0.0, 0.0, 1.0, 2.0))
		shifted = shift(spectrum, shift_threshold(4, 2, ShiftKind.RIEMANNIAN))
		assert cone_membership(shifted, 2).status is ConeStatus.OUTSIDE
		assert dichotomy_check(spectrum, 2) is DichotomyCase.VIOLATION

	def test_range(self):
		with pytest.raises(RangeError):
			dichotomy_check(Spectrum((1.0, 1.0, 1.0)), 3)

	def test_batch_matches_single(self):
		rows = np.array([[0.0, 0.0, 1.0, 1.0, 1.0, 1.0], [0.1, 0.2, 1.0, 1.0, 1.0, 1.0], [0.0, 0.0, 1.0, 2.0, 0.0, 0.0]])
		cases = dichotomy_batch(rows, 2)
		for row, case in zip(rows, cases, strict=True):
			assert case == dichotomy_check(Spectrum.from_values(row), 2).value
