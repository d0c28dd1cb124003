# SPDX-License-Identifier: MIT

from unittest.mock import patch

import pytest

from cellboard.uniqueness import INFINITE, GroundStateKind, ModelParams, energy_density
from cellboard.uniqueness.verification import CHECKS, VerificationSettings, run_checks

FAST = VerificationSettings(samples=2)


@pytest.mark.parametrize("name", ["dob1", "gamma1", "ds-n2", "dp-bound", "groundstate", "beta0"])
def test_check_passes(name: str) -> None:
    result = CHECKS[name](FAST)
    assert result.passed, result.to_dict()
    assert result.max_deviation <= result.tolerance


def test_dp_bound_keeps_the_weaker_bound() -> None:
    result = CHECKS["dp-bound"](FAST)
    assert result.details["largest_probability"] <= 0.5


def test_ground_state_crossings_for_every_tabulated_size() -> None:
    crossings = CHECKS["groundstate"](FAST).details["crossings"]
    assert crossings == pytest.approx({"1x1": 4.0, "2x1": 3.0, "2x2": 2.0, "3x2": 5.0 / 3.0}, abs=1e-12)


def test_ground_state_skips_homogeneous_field() -> None:
    result = CHECKS["groundstate"](VerificationSettings(sizes=(INFINITE, INFINITE)))
    assert result.passed
    assert result.details["crossings"] == {}


def test_report_runs_named_checks_in_order() -> None:
    report = run_checks(["groundstate", "gamma1"], FAST)
    assert [r.name for r in report.results] == ["groundstate", "gamma1"]
    assert report.passed
    assert report.to_dict()["passed"] is True


def test_scaled_coupling() -> None:
    settings = VerificationSettings(J=2.0, samples=2)
    assert run_checks(["gamma1", "groundstate"], settings).passed


def test_ground_state_detects_unequal_constant_states() -> None:
    def shifted(kind: GroundStateKind, params: ModelParams) -> float:
        value = energy_density(kind, params)
        return value + 1e-6 if kind is GroundStateKind.MINUS else value

    with patch("cellboard.uniqueness.verification.energy_density", side_effect=shifted):
        result = CHECKS["groundstate"](FAST)
    assert not result.passed
    assert result.max_deviation == pytest.approx(1e-6, rel=1e-6)


def test_ground_state_sweeps_both_sides_of_critical_field() -> None:
    fractions = CHECKS["groundstate"](FAST).details["field_fractions"]
    assert min(fractions) < 1.0 < max(fractions)
    assert 1.0 in fractions
