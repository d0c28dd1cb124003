# SPDX-License-Identifier: MIT

import math

import numpy as np
import pytest

from cellboard.uniqueness import (
    HALF_PC_BOUND,
    INFINITE,
    BoundError,
    Criterion,
    FieldSpec,
    ParameterError,
    PlacementMode,
    ThermoPoint,
    dc_branch,
    dc_f,
    dc_gamma,
    dc_lower_envelope,
    dc_temperature_bounds,
    dc_unique,
    dc_upper_envelope,
    dp_p,
    dp_site_probability,
    dp_uniform_bound,
    dp_unique,
    ds_gamma,
    ds_unique,
    enumerate_placements,
    placement_set,
)
from cellboard.uniqueness.criteria import (
    disagreement_probability,
    drop_sign_flip_pairs,
    placement_gamma,
    sinh_ratio,
)

from .helpers import direct_alpha, summed_window_gamma


T_MIN_DC = 4.0 / math.log(3.0)
T_MAX_DC = 2.0 / math.log(5.0 / 3.0)


def random_points(count: int, seed: int, T_range=(0.05, 10.0), h_range=(0.0, 4.5)) -> list:
    rng = np.random.default_rng(seed)
    return [
        ThermoPoint(1.0, float(h), float(T))
        for h, T in zip(rng.uniform(*h_range, size=count), rng.uniform(*T_range, size=count))
    ]


class TestThermoPoint:
    @pytest.mark.parametrize("J,h,T", [(0.0, 1.0, 1.0), (1.0, -0.1, 1.0), (1.0, 1.0, 0.0), (1.0, 1.0, math.inf)])
    def test_invalid(self, J: float, h: float, T: float) -> None:
        with pytest.raises(ParameterError):
            ThermoPoint(J, h, T)

    def test_beta(self) -> None:
        assert ThermoPoint(1.0, 0.0, 4.0).beta == 0.25


class TestSinhRatio:
    def test_large_arguments_do_not_overflow(self) -> None:
        assert sinh_ratio(8000.0, 0.0) == pytest.approx(1.0)
        assert sinh_ratio(8000.0, 8400.0) == 0.0
        assert sinh_ratio(8000.0, 8000.0) == pytest.approx(0.5)

    def test_vectorised(self) -> None:
        values = sinh_ratio(np.array([1.0, 2.0]), np.array([0.5, 0.5]))
        expected = np.sinh([1.0, 2.0]) / (np.cosh(0.5) + np.cosh([1.0, 2.0]))
        np.testing.assert_allclose(values, expected, rtol=1e-14)


class TestDisagreementPercolation:
    def test_high_temperature(self) -> None:
        assert dp_p(ThermoPoint(1.0, 0.0, 1e9)) == pytest.approx(0.0, abs=1e-8)

    def test_zero_field(self) -> None:
        assert dp_p(ThermoPoint(1.0, 0.0, 1.0)) == pytest.approx(math.tanh(4.0), abs=1e-12)
        assert dp_p(ThermoPoint(1.0, 0.0, 1.0)) == pytest.approx(0.9993293, abs=1e-7)

    @pytest.mark.parametrize("T", [0.1, 1.0, 5.0])
    def test_below_half_at_critical_field(self, T: float) -> None:
        assert dp_p(ThermoPoint(1.0, 4.0, T)) < 0.5

    def test_even_in_field(self) -> None:
        for h in (0.3, 1.7, 5.0):
            assert disagreement_probability(1.0, -h, 0.8) == disagreement_probability(1.0, h, 0.8)

    def test_unique_verdicts(self) -> None:
        assert dp_unique(ThermoPoint(1.0, 4.5, 0.01)).unique
        assert not dp_unique(ThermoPoint(1.0, 0.0, 1.0)).unique
        assert dp_unique(ThermoPoint(1.0, 0.0, 1e6)).unique

    def test_half_bound_is_recorded(self) -> None:
        evaluation = dp_unique(ThermoPoint(1.0, 0.0, 20.0), HALF_PC_BOUND)
        assert evaluation.threshold == 0.5
        assert evaluation.criterion is Criterion.DP

    @pytest.mark.parametrize("pc", [0.0, 1.0, -0.2, math.nan])
    def test_invalid_bound(self, pc: float) -> None:
        with pytest.raises(ParameterError):
            dp_unique(ThermoPoint(1.0, 0.0, 1.0), pc)

    def test_uniform_bound(self) -> None:
        for point in random_points(30, 11, h_range=(4.0, 6.0)):
            assert dp_p(point) <= dp_uniform_bound(point) + 1e-15
            assert dp_uniform_bound(point) <= 0.5

    def test_site_probability_matches_closed_form(self) -> None:
        for point in random_points(10, 5, T_range=(0.3, 10.0)):
            for site_field in (point.h, -point.h):
                assert dp_site_probability(point, site_field) == pytest.approx(dp_p(point), rel=1e-10)

    def test_above_four_j_on_scan(self) -> None:
        temperatures = 0.001 * np.arange(1, 7001)
        for h in (4.0, 4.2, 4.5):
            p = disagreement_probability(1.0, h, temperatures)
            assert (p < 0.556).all()
            assert (p <= 0.5).all()
            if h > 4.0:
                assert (p < 0.5).all()


class TestDobrushin:
    def test_high_temperature(self) -> None:
        assert dc_gamma(ThermoPoint(1.0, 1.0, 1e9)) < 1e-8

    def test_anchors(self) -> None:
        assert dc_gamma(ThermoPoint(1.0, 0.0, T_MIN_DC)) == pytest.approx(0.25, abs=1e-10)
        assert dc_gamma(ThermoPoint(1.0, 1.0, T_MAX_DC)) == pytest.approx(0.25, abs=1e-10)
        assert math.tanh(math.log(3.0) / 2.0) == pytest.approx(0.5, abs=1e-15)

    def test_temperature_bounds(self) -> None:
        lower, upper = dc_temperature_bounds(1.0)
        assert lower == pytest.approx(T_MIN_DC, rel=1e-15)
        assert upper == pytest.approx(T_MAX_DC, rel=1e-15)
        assert lower == pytest.approx(3.64096, abs=1e-5)
        assert upper == pytest.approx(3.91523, abs=1e-5)

    def test_unique_verdicts(self) -> None:
        assert dc_unique(ThermoPoint(1.0, 0.0, 5.0)).unique
        assert not dc_unique(ThermoPoint(1.0, 0.0, 3.0)).unique
        assert dc_unique(ThermoPoint(1.0, 2.0, 1e6)).unique

    def test_piecewise_branch(self) -> None:
        for h in np.linspace(0.0, 4.0, 41):
            m = dc_branch(float(h), 1.0)
            for T in (0.2, 1.0, 3.7, 9.0):
                point = ThermoPoint(1.0, float(h), T)
                assert dc_gamma(point) == pytest.approx(dc_f(m, point), abs=1e-14)

    def test_branch_outside_range(self) -> None:
        assert dc_branch(4.5, 1.0) is None
        assert dc_branch(2.0, 1.0) == -1
        assert dc_branch(2.5, 1.0) == -3

    @pytest.mark.parametrize("h", [0.0, 0.3, 0.7, 1.0, 1.6, 2.0])
    def test_symmetry(self, h: float) -> None:
        for T in (0.5, 2.0, 3.8, 7.0):
            reference = dc_gamma(ThermoPoint(1.0, h, T))
            for other in (2.0 - h, h + 2.0, 4.0 - h):
                assert dc_gamma(ThermoPoint(1.0, other, T)) == pytest.approx(reference, abs=1e-12)

    def test_envelope(self) -> None:
        for point in random_points(200, 3, h_range=(0.0, 4.0)):
            gamma = dc_gamma(point)
            assert dc_lower_envelope(point) <= gamma + 1e-15
            assert gamma <= dc_upper_envelope(point) + 1e-15


class TestPlacements:
    def test_two_by_two_cells(self) -> None:
        placements = enumerate_placements(2, FieldSpec(2, 2, 1.0))
        patterns = {p.signs for p in placements}
        assert len(placements) == 8
        assert (1, 1, 1, 1) in patterns and (-1, -1, -1, -1) in patterns
        assert (1, 1, -1, -1) in patterns and (-1, -1, 1, 1) in patterns
        assert (1, -1, 1, -1) in patterns and (-1, 1, -1, 1) in patterns
        assert (1, -1, -1, 1) in patterns and (-1, 1, 1, -1) in patterns

    def test_checkerboard(self) -> None:
        assert len(enumerate_placements(2, FieldSpec(1, 1, 1.0))) == 2

    def test_stripes(self) -> None:
        assert len(enumerate_placements(3, FieldSpec(INFINITE, 1, 1.0))) == 2

    def test_homogeneous(self) -> None:
        placements = enumerate_placements(2, FieldSpec(INFINITE, INFINITE, 0.5))
        assert len(placements) == 1
        assert placements[0].window_field == (0.5, 0.5, 0.5, 0.5)

    def test_lexicographic_first_offset_kept(self) -> None:
        offsets = [p.offset for p in enumerate_placements(2, FieldSpec(2, 2, 1.0))]
        assert offsets == sorted(offsets)
        assert offsets[0] == (0, 0)

    def test_count_independent_of_amplitude(self) -> None:
        assert placement_set(3, FieldSpec(2, 1, 0.0)) == placement_set(3, FieldSpec(2, 1, 3.0))

    def test_saturation(self) -> None:
        assert placement_set(3, FieldSpec(5, 7)) == placement_set(3, FieldSpec(3, 3))

    def test_containment(self) -> None:
        assert placement_set(3, FieldSpec(2, 2)) <= placement_set(3, FieldSpec(3, 3))

    def test_sign_flip_pairs(self) -> None:
        placements = enumerate_placements(2, FieldSpec(2, 2, 1.0))
        kept = drop_sign_flip_pairs(placements)
        assert len(kept) == 4
        assert all(p.flipped_signs() not in {q.signs for q in kept} for p in kept)


class TestDobrushinShlosman:
    def test_single_site_is_four_dobrushin(self) -> None:
        for point in random_points(50, 1):
            assert ds_gamma(1, point, FieldSpec(1, 1)) == pytest.approx(4.0 * dc_gamma(point), abs=1e-12)

    def test_high_temperature(self) -> None:
        point = ThermoPoint(1.0, 1.0, 1e9)
        for n in (1, 2, 3):
            assert ds_gamma(n, point, FieldSpec(2, 1)) < 1e-6

    def test_two_by_two_model_independence(self) -> None:
        assert ds_gamma(2, ThermoPoint(1.0, 1.0, 1.0), FieldSpec(2, 2)) == pytest.approx(
            ds_gamma(2, ThermoPoint(1.0, 1.0, 1.0), FieldSpec(1, 1)), abs=1e-10
        )
        for point in random_points(20, 2):
            assert ds_gamma(2, point, FieldSpec(2, 2)) == pytest.approx(ds_gamma(2, point, FieldSpec(1, 1)), abs=1e-10)

    def test_placement_gamma_matches_oracle(self) -> None:
        point = ThermoPoint(1.0, 1.0, 1.0)
        for placement in enumerate_placements(2, FieldSpec(2, 2, point.h)):
            expected = sum(map(sum, direct_alpha(2, placement.window_field, 1.0, point.beta))) / 4.0
            assert placement_gamma(2, placement, point) == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("T", [0.01, 0.1, 0.4])
    def test_window_of_three_matches_direct_summation(self, T: float) -> None:
        point = ThermoPoint(1.0, 4.05, T)
        for placement in enumerate_placements(3, FieldSpec(1, 1, point.h)):
            expected = summed_window_gamma(3, placement.window_field, 1.0, point.beta)
            assert placement_gamma(3, placement, point) == pytest.approx(expected, abs=1e-10)

    def test_window_of_three_just_above_critical_field(self) -> None:
        spec = FieldSpec(1, 1)
        assert ds_gamma(3, ThermoPoint(1.0, 4.05, 0.01), spec) < 1e-3
        assert ds_gamma(3, ThermoPoint(1.0, 4.05, 0.1), spec) == pytest.approx(0.5836, abs=1e-3)
        # The n = 3 window no longer proves uniqueness at h = 4.05 once T reaches 0.4.
        assert ds_gamma(3, ThermoPoint(1.0, 4.05, 0.4), spec) == pytest.approx(1.2322, abs=1e-3)

    def test_sign_flip_dedup_agrees(self) -> None:
        for point in random_points(5, 4):
            full = ds_gamma(2, point, FieldSpec(2, 2))
            dedup = ds_gamma(2, point, FieldSpec(2, 2), placement_mode=PlacementMode.SIGNFLIP_DEDUP)
            assert dedup == pytest.approx(full, abs=1e-12)

    def test_saturation_and_monotonicity(self) -> None:
        for point in random_points(2, 6, T_range=(0.05, 5.0)):
            g33 = ds_gamma(3, point, FieldSpec(3, 3))
            assert ds_gamma(3, point, FieldSpec(5, 7)) == g33
            assert ds_gamma(3, point, FieldSpec(2, 2)) <= g33

    def test_stripe_identity(self) -> None:
        for point in random_points(2, 8, T_range=(0.05, 5.0)):
            values = [ds_gamma(3, point, FieldSpec(L1, 1)) for L1 in (2, 3, 4, 5)]
            assert max(values) - min(values) <= 1e-10

    def test_stop_at_short_circuit(self) -> None:
        point = ThermoPoint(1.0, 0.5, 0.5)
        full = ds_gamma(2, point, FieldSpec(2, 2))
        assert full >= 1.0
        assert 1.0 <= ds_gamma(2, point, FieldSpec(2, 2), stop_at=1.0) <= full

    def test_window_bounds(self) -> None:
        point = ThermoPoint(1.0, 1.0, 1.0)
        with pytest.raises(BoundError):
            ds_gamma(4, point, FieldSpec(1, 1))
        with pytest.raises(BoundError):
            ds_gamma(6, point, FieldSpec(1, 1), allow_large=True)
        with pytest.raises(BoundError):
            ds_gamma(0, point, FieldSpec(1, 1))

    def test_unique_verdict(self) -> None:
        evaluation = ds_unique(1, ThermoPoint(1.0, 0.0, 5.0), FieldSpec(1, 1))
        assert evaluation.value == pytest.approx(4.0 * dc_gamma(ThermoPoint(1.0, 0.0, 5.0)), abs=1e-12)
        assert evaluation.unique == (evaluation.value < 1.0)
        assert evaluation.to_dict()["L1"] == 1

    def test_evaluation_serialisation(self) -> None:
        data = ds_unique(2, ThermoPoint(1.0, 1.0, 2.0), FieldSpec(INFINITE, 2)).to_dict()
        assert set(data) == {"criterion", "n", "J", "h", "T", "L1", "L2", "value", "threshold", "unique"}
        assert data["L1"] == "inf"
        assert data["criterion"] == "ds"
