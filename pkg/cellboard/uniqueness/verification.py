# SPDX-License-Identifier: MIT

"""
Identity checks tying the criteria to their closed forms and to each other. Every check returns a
:class:`CheckResult` with the tolerance it was held to and the largest deviation it observed.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from cellboard.uniqueness.criteria import (
    DEFAULT_PC_BOUND,
    HALF_PC_BOUND,
    PlacementMode,
    ThermoPoint,
    dc_gamma,
    dc_lower_envelope,
    dc_temperature_bounds,
    dc_upper_envelope,
    dp_p,
    dp_uniform_bound,
    ds_gamma,
    placement_set,
)
from cellboard.uniqueness.finite_gibbs import all_boundary_marginals, build_energy_tables, build_window
from cellboard.uniqueness.lattice import (
    INFINITE,
    CellSize,
    FieldSpec,
    GroundStateKind,
    ModelParams,
    cell_size_to_json,
    critical_field,
    energy_density,
    field_value,
)
from cellboard.uniqueness.sweep import DEFAULT_REFINE_TOL, DP_DC_T_GRID, Grid1D, dc_curve

logger = logging.getLogger(__name__)

GROUND_STATE_FIELDS: Dict[Tuple[CellSize, CellSize], float] = {
    (1, 1): 4.0,
    (2, 1): 3.0,
    (2, 2): 2.0,
    (3, 2): 5.0 / 3.0,
}
# Fields, as fractions of h_c, at which the ordering of the ground-state energies is checked.
GROUND_STATE_FIELD_FRACTIONS = (0.0, 0.25, 0.5, 0.9, 0.99, 1.0, 1.01, 1.1, 1.5, 2.0)
HIGH_TEMPERATURE = 1e9
HIGH_TEMPERATURE_BETA = 1e-12


@dataclass(frozen=True)
class VerificationSettings:
    J: float = 1.0
    sizes: Optional[Tuple[CellSize, CellSize]] = None
    refine_tol: float = DEFAULT_REFINE_TOL
    placement_mode: PlacementMode = PlacementMode.FULL_PERIOD
    seed: int = 2024
    # Overrides the number of sampled points of every sampling check.
    samples: Optional[int] = None

    def sample_count(self, default: int) -> int:
        return default if self.samples is None else max(1, self.samples)

    def random_points(self, count: int, T_range: Tuple[float, float], h_range: Tuple[float, float]) -> List[ThermoPoint]:
        rng = np.random.default_rng(self.seed)
        Ts = rng.uniform(*T_range, size=self.sample_count(count)) * self.J
        hs = rng.uniform(*h_range, size=self.sample_count(count)) * self.J
        return [ThermoPoint(self.J, float(h), float(T)) for h, T in zip(hs, Ts)]


@dataclass(frozen=True)
class CheckResult:
    name: str
    description: str
    tolerance: float
    max_deviation: float
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "description": self.description,
            "tolerance": self.tolerance,
            "max_deviation": self.max_deviation,
            "passed": self.passed,
            "details": self.details,
        }


@dataclass
class VerificationReport:
    results: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> Dict[str, Any]:
        return {"passed": self.passed, "checks": [r.to_dict() for r in self.results]}


def _scaled_t_grid(J: float) -> Grid1D:
    return Grid1D(DP_DC_T_GRID.start * J, DP_DC_T_GRID.step * J, DP_DC_T_GRID.count)


def check_dob0(settings: VerificationSettings) -> CheckResult:
    J = settings.J
    base = (0.0, 0.3, 0.7, 1.0, 1.6)
    partners = {h: (2.0 - h, h + 2.0, 4.0 - h) for h in base}
    h_values = sorted({h for h in base} | {p for ps in partners.values() for p in ps})
    curve = dc_curve(J, [h * J for h in h_values], refine_tol=settings.refine_tol, T_grid=_scaled_t_grid(J))
    boundary = {round(p.h / J, 12): p.T for p in curve.points}
    deviations = {}
    for h, ps in partners.items():
        for p in ps:
            deviations[f"{h:g}~{p:g}"] = abs(boundary[round(h, 12)] - boundary[round(p, 12)])
    tolerance = 2.0 * settings.refine_tol
    worst = max(deviations.values())
    return CheckResult(
        "dob0",
        "Dobrushin temperature symmetric under h -> 2J - h, h + 2J, 4J - h",
        tolerance,
        worst,
        worst <= tolerance,
        {"deviations": deviations},
    )


def check_dob1(settings: VerificationSettings) -> CheckResult:
    J = settings.J
    lower, upper = dc_temperature_bounds(J)
    h_values = [k * 0.01 * J for k in range(401)]
    curve = dc_curve(J, h_values, refine_tol=settings.refine_tol, T_grid=_scaled_t_grid(J))
    temperatures = [p.T for p in curve.points]
    at_zero = abs(temperatures[0] - lower)
    at_max = abs(max(temperatures) - upper)
    envelope_violation = 0.0
    for T in np.linspace(0.05, 10.0, 200) * J:
        for h in (0.0, 0.5, 1.0, 2.0, 3.0, 4.0):
            point = ThermoPoint(J, h * J, float(T))
            gamma = dc_gamma(point)
            envelope_violation = max(
                envelope_violation, dc_lower_envelope(point) - gamma, gamma - dc_upper_envelope(point)
            )
    tolerance = 1e-5
    worst = max(at_zero, at_max, envelope_violation)
    return CheckResult(
        "dob1",
        "Dobrushin temperature spans [4J/ln 3, 2J/ln(5/3)] and the envelopes bound the constant",
        tolerance,
        worst,
        worst <= tolerance,
        {"T_at_zero_field": temperatures[0], "T_max": max(temperatures), "envelope_violation": envelope_violation},
    )


def check_gamma1(settings: VerificationSettings) -> CheckResult:
    spec = FieldSpec(1, 1)
    worst = 0.0
    for point in settings.random_points(50, (0.05, 10.0), (0.0, 4.5)):
        single = ds_gamma(1, point, spec, placement_mode=settings.placement_mode)
        worst = max(worst, abs(single - 4.0 * dc_gamma(point)))
    tolerance = 1e-12
    return CheckResult(
        "gamma1", "single-site Dobrushin-Shlosman constant equals four times the Dobrushin one", tolerance, worst,
        worst <= tolerance,
    )


def check_ds1(settings: VerificationSettings) -> CheckResult:
    small, large = FieldSpec(3, 3, 1.0), FieldSpec(5, 7, 1.0)
    same_patterns = placement_set(3, small) == placement_set(3, large)
    worst = 0.0
    for point in settings.random_points(10, (0.05, 5.0), (0.0, 4.5)):
        worst = max(
            worst,
            abs(
                ds_gamma(3, point, large, placement_mode=settings.placement_mode)
                - ds_gamma(3, point, small, placement_mode=settings.placement_mode)
            ),
        )
    return CheckResult(
        "ds1",
        "cells of size (5, 7) and (3, 3) give the same n = 3 placements and constants",
        1e-14,
        worst,
        same_patterns and worst <= 1e-14,
        {"identical_placements": same_patterns},
    )


def check_ds2(settings: VerificationSettings) -> CheckResult:
    excess = 0.0
    for point in settings.random_points(10, (0.05, 5.0), (0.0, 4.5)):
        g22 = ds_gamma(3, point, FieldSpec(2, 2), placement_mode=settings.placement_mode)
        g33 = ds_gamma(3, point, FieldSpec(3, 3), placement_mode=settings.placement_mode)
        excess = max(excess, g22 - g33)
    tolerance = 1e-12
    return CheckResult(
        "ds2", "n = 3 constant of (2, 2) cells does not exceed that of (3, 3) cells", tolerance, max(excess, 0.0),
        excess <= tolerance,
    )


def check_ds_n2(settings: VerificationSettings) -> CheckResult:
    worst = 0.0
    for point in settings.random_points(20, (0.05, 10.0), (0.0, 4.5)):
        worst = max(
            worst,
            abs(
                ds_gamma(2, point, FieldSpec(2, 2), placement_mode=settings.placement_mode)
                - ds_gamma(2, point, FieldSpec(1, 1), placement_mode=settings.placement_mode)
            ),
        )
    tolerance = 1e-10
    return CheckResult(
        "ds-n2", "n = 2 constant identical for (1, 1) and (2, 2) cells", tolerance, worst, worst <= tolerance
    )


def check_stripe(settings: VerificationSettings) -> CheckResult:
    worst = 0.0
    for point in settings.random_points(5, (0.05, 5.0), (0.0, 4.5)):
        values = [ds_gamma(3, point, FieldSpec(L1, 1), placement_mode=settings.placement_mode) for L1 in (2, 3, 4, 5)]
        worst = max(worst, max(values) - min(values))
    tolerance = 1e-10
    return CheckResult(
        "stripe", "n = 3 constant of (L1, 1) cells independent of L1 in 2..5", tolerance, worst, worst <= tolerance
    )


def check_dp_bound(settings: VerificationSettings) -> CheckResult:
    J = settings.J
    temperatures = _scaled_t_grid(J).values()
    temperatures = temperatures[temperatures > 0]
    largest = 0.0
    excess = -math.inf
    for h in (4.0, 4.2, 4.5):
        for T in temperatures:
            point = ThermoPoint(J, h * J, float(T))
            p = dp_p(point)
            largest = max(largest, p)
            # tanh(8J/T) / 2 rounds to 1/2 at low temperature, so the envelope is compared instead of 1/2.
            excess = max(excess, p - dp_uniform_bound(point))
    tolerance = 1e-15
    return CheckResult(
        "dp-bound",
        "disagreement probability below its envelope tanh(8J/T) / 2 <= 1/2 for h >= 4J on the temperature grid",
        tolerance,
        max(excess, 0.0),
        excess <= tolerance and largest <= HALF_PC_BOUND < DEFAULT_PC_BOUND,
        {"largest_probability": largest},
    )


def _ground_state_crossing(J: float, L1: CellSize, L2: CellSize) -> float:
    def gap(h: float) -> float:
        params = ModelParams(J, FieldSpec(L1, L2, h))
        return energy_density(GroundStateKind.CELLBOARD, params) - energy_density(GroundStateKind.PLUS, params)

    upper = 2.0 * critical_field(J, L1, L2) + J
    return float(brentq(gap, 0.0, upper, xtol=1e-14))


def _ground_state_order(J: float, L1: CellSize, L2: CellSize) -> Tuple[float, bool]:
    """
    Sweeps :data:`GROUND_STATE_FIELD_FRACTIONS` of ``h_c`` and returns the largest ``|e(PLUS) - e(MINUS)|``
    together with whether the constant states lie below the cell-board state under ``h_c`` and above it past ``h_c``.
    """
    h_c = critical_field(J, L1, L2)
    asymmetry = 0.0
    ordered = True
    for fraction in GROUND_STATE_FIELD_FRACTIONS:
        h = fraction * h_c
        params = ModelParams(J, FieldSpec(L1, L2, h))
        plus = energy_density(GroundStateKind.PLUS, params)
        minus = energy_density(GroundStateKind.MINUS, params)
        board = energy_density(GroundStateKind.CELLBOARD, params)
        asymmetry = max(asymmetry, abs(plus - minus))
        if h < h_c:
            ordered = ordered and plus < board
        elif h > h_c:
            ordered = ordered and board < plus
    return asymmetry, ordered


def check_groundstate(settings: VerificationSettings) -> CheckResult:
    J = settings.J
    sizes = [settings.sizes] if settings.sizes is not None else list(GROUND_STATE_FIELDS)
    worst = 0.0
    ordered = True
    crossings = {}
    for L1, L2 in sizes:
        if L1 is INFINITE and L2 is INFINITE:
            # The homogeneous field has no cell-board state distinct from the plus state.
            continue
        root = _ground_state_crossing(J, L1, L2)
        asymmetry, in_order = _ground_state_order(J, L1, L2)
        expected = GROUND_STATE_FIELDS.get((L1, L2), critical_field(1.0, L1, L2)) * J
        worst = max(worst, abs(root - expected), asymmetry)
        ordered = ordered and in_order
        crossings[f"{cell_size_to_json(L1)}x{cell_size_to_json(L2)}"] = root
    tolerance = 1e-12 * max(1.0, J)
    return CheckResult(
        "groundstate",
        "cell-board and constant ground-state energies cross at h = 2J/L1 + 2J/L2, e(PLUS) = e(MINUS) on a field grid",
        tolerance,
        worst,
        worst <= tolerance and ordered,
        {"crossings": crossings, "ordered": ordered, "field_fractions": list(GROUND_STATE_FIELD_FRACTIONS)},
    )


def check_beta0(settings: VerificationSettings) -> CheckResult:
    J = settings.J
    spec = FieldSpec(*(settings.sizes or (1, 1)))
    point = ThermoPoint(J, J, HIGH_TEMPERATURE * J)
    values = {"dp": dp_p(point), "dc": dc_gamma(point)}
    for n in (1, 2, 3):
        values[f"ds{n}"] = ds_gamma(n, point, spec, placement_mode=settings.placement_mode)
    marginal_deviation = 0.0
    for n in (1, 2):
        window = build_window(n)
        window_field = [field_value(site, spec.with_h(J)) for site in window.interior]
        tables = build_energy_tables(window, window_field, J)
        marginals = all_boundary_marginals(tables, HIGH_TEMPERATURE_BETA / J)
        marginal_deviation = max(marginal_deviation, float(np.abs(marginals - 0.5).max()))
    worst_value = max(values.values())
    return CheckResult(
        "beta0",
        f"criteria vanish and marginals are uniform at T = {HIGH_TEMPERATURE:g} J",
        1e-6,
        worst_value,
        worst_value < 1e-6 and marginal_deviation <= 1e-9,
        {"values": values, "marginal_deviation": marginal_deviation},
    )


CHECKS: Dict[str, Callable[[VerificationSettings], CheckResult]] = {
    "dob0": check_dob0,
    "dob1": check_dob1,
    "gamma1": check_gamma1,
    "ds1": check_ds1,
    "ds2": check_ds2,
    "ds-n2": check_ds_n2,
    "stripe": check_stripe,
    "dp-bound": check_dp_bound,
    "groundstate": check_groundstate,
    "beta0": check_beta0,
}


def run_checks(names: Sequence[str], settings: VerificationSettings) -> VerificationReport:
    """Runs the named checks in the given order, or every check when ``names`` is empty."""
    report = VerificationReport()
    for name in names or list(CHECKS):
        result = CHECKS[name](settings)
        logger.info(
            "Check %s: %s (max deviation %.3g, tolerance %.3g)",
            name,
            "passed" if result.passed else "FAILED",
            result.max_deviation,
            result.tolerance,
        )
        report.results.append(result)
    return report
