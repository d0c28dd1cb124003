# SPDX-License-Identifier: MIT

import enum
import functools
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, List, Optional, Tuple, Union

import numpy as np

from cellboard.uniqueness.exceptions import BoundError, ParameterError
from cellboard.uniqueness.finite_gibbs import (
    MAX_WINDOW_SIDE,
    EnergyTables,
    alpha_matrix,
    build_energy_tables,
    build_window,
    single_site_tv,
)
from cellboard.uniqueness.lattice import (
    FieldSpec,
    ModelParams,
    cell_size_to_json,
    field_period,
    field_sign,
)

logger = logging.getLogger(__name__)

DEFAULT_PC_BOUND = 0.556
HALF_PC_BOUND = 0.5
DC_THRESHOLD = 0.25
DS_THRESHOLD = 1.0
DEFAULT_MAX_WINDOW_SIDE = 3

# Sums of the three neighbours of a site other than the flipped one.
NEIGHBOUR_SUMS = (-3, -1, 1, 3)
# Sums of all four neighbours of a site.
FULL_NEIGHBOUR_SUMS = (-4, -2, 0, 2, 4)


class Criterion(enum.Enum):
    DP = "dp"
    DC = "dc"
    DS = "ds"


class PlacementMode(enum.Enum):
    FULL_PERIOD = "full-period"
    SIGNFLIP_DEDUP = "signflip-dedup"


@dataclass(frozen=True)
class ThermoPoint:
    J: float
    h: float
    T: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.J) or self.J <= 0:
            raise ParameterError(f"Coupling J must be finite and > 0, got {self.J}")
        if not math.isfinite(self.h) or self.h < 0:
            raise ParameterError(f"Field h must be finite and >= 0, got {self.h}")
        if not math.isfinite(self.T) or self.T <= 0:
            raise ParameterError(f"Temperature T must be finite and > 0, got {self.T}")

    @property
    def beta(self) -> float:
        return 1.0 / self.T


@dataclass(frozen=True)
class CriterionEvaluation:
    criterion: Criterion
    n: int
    point: ThermoPoint
    L1: Optional[Any]
    L2: Optional[Any]
    value: float
    threshold: float
    unique: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "criterion": self.criterion.value,
            "n": self.n,
            "J": self.point.J,
            "h": self.point.h,
            "T": self.point.T,
            "L1": None if self.L1 is None else cell_size_to_json(self.L1),
            "L2": None if self.L2 is None else cell_size_to_json(self.L2),
            "value": self.value,
            "threshold": self.threshold,
            "unique": self.unique,
        }


def _evaluation(
    criterion: Criterion, n: int, point: ThermoPoint, spec: Optional[FieldSpec], value: float, threshold: float
) -> CriterionEvaluation:
    return CriterionEvaluation(
        criterion=criterion,
        n=n,
        point=point,
        L1=None if spec is None else spec.L1,
        L2=None if spec is None else spec.L2,
        value=float(value),
        threshold=float(threshold),
        unique=bool(value < threshold),
    )


def sinh_ratio(x: Union[float, np.ndarray], y: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """
    Evaluates ``sinh(x) / (cosh(y) + cosh(x))`` for ``x >= 0`` without overflow, by scaling numerator and
    denominator with ``exp(-max(x, |y|))``.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.abs(np.asarray(y, dtype=np.float64))
    m = np.maximum(x, y)
    numerator = np.exp(x - m) - np.exp(-x - m)
    denominator = np.exp(y - m) + np.exp(-y - m) + np.exp(x - m) + np.exp(-x - m)
    result = numerator / denominator
    return float(result) if result.ndim == 0 else result


# Disagreement percolation


def disagreement_probability(J: float, h: float, T: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """``p = sinh(8J/T) / (cosh(2h/T) + cosh(8J/T))``; even in ``h``, so any real field is accepted."""
    return sinh_ratio(8.0 * J / T, 2.0 * h / T)


def dp_p(point: ThermoPoint) -> float:
    return disagreement_probability(point.J, point.h, point.T)


def dp_uniform_bound(point: ThermoPoint) -> float:
    """Upper envelope ``tanh(8J/T) / 2`` of :func:`dp_p` over fields ``h >= 4J``, attained at ``h = 4J``."""
    return 0.5 * math.tanh(8.0 * point.J / point.T)


def dp_site_probability(point: ThermoPoint, site_field: float) -> float:
    """Largest single-site disagreement over all pairs of neighbour sums, for a site with field ``site_field``."""
    params = ModelParams(point.J, FieldSpec(1, 1, abs(site_field)))
    return max(
        single_site_tv(params, site_field, m, m_prime, point.beta)
        for m, m_prime in itertools.product(FULL_NEIGHBOUR_SUMS, repeat=2)
    )


def dp_unique(
    point: ThermoPoint, pc_bound: float = DEFAULT_PC_BOUND, spec: Optional[FieldSpec] = None
) -> CriterionEvaluation:
    if not math.isfinite(pc_bound) or not 0.0 < pc_bound < 1.0:
        raise ParameterError(f"Percolation bound must lie in (0, 1), got {pc_bound}")
    return _evaluation(Criterion.DP, 1, point, spec, dp_p(point), pc_bound)


# Dobrushin


def dobrushin_f(m: int, J: float, h: float, T: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    return sinh_ratio(2.0 * J / T, 2.0 * (J * m + h) / T)


def dc_f(m: int, point: ThermoPoint) -> float:
    return dobrushin_f(m, point.J, point.h, point.T)


def dobrushin_gamma(J: float, h: float, T: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    values = np.stack([np.asarray(dobrushin_f(m, J, h, T)) for m in NEIGHBOUR_SUMS])
    result = values.max(axis=0)
    return float(result) if result.ndim == 0 else result


def dc_gamma(point: ThermoPoint) -> float:
    """Worst single-neighbour influence, maximised over all four sums of the remaining neighbours."""
    return dobrushin_gamma(point.J, point.h, point.T)


def dc_branch(h: float, J: float) -> Optional[int]:
    """
    Neighbour sum attaining the maximum in :func:`dc_gamma`: ``-1`` for ``h`` in ``[0, 2J]`` and ``-3`` for
    ``h`` in ``(2J, 4J]``. Outside ``[0, 4J]`` there is no closed-form branch and :obj:`None` is returned.
    """
    if 0.0 <= h <= 2.0 * J:
        return -1
    if 2.0 * J < h <= 4.0 * J:
        return -3
    return None


def dc_lower_envelope(point: ThermoPoint) -> float:
    return 0.5 * math.tanh(2.0 * point.J / point.T)


def dc_upper_envelope(point: ThermoPoint) -> float:
    return sinh_ratio(2.0 * point.J / point.T, 0.0)


def dc_temperature_bounds(J: float) -> Tuple[float, float]:
    """Range ``[4J/ln 3, 2J/ln(5/3)]`` of the Dobrushin temperature over ``h`` in ``[0, 4J]``."""
    return 4.0 * J / math.log(3.0), 2.0 * J / math.log(5.0 / 3.0)


def dc_unique(point: ThermoPoint, spec: Optional[FieldSpec] = None) -> CriterionEvaluation:
    return _evaluation(Criterion.DC, 1, point, spec, dc_gamma(point), DC_THRESHOLD)


# Dobrushin-Shlosman


@dataclass(frozen=True)
class FieldPlacement:
    offset: Tuple[int, int]
    signs: Tuple[int, ...]
    window_field: Tuple[float, ...]

    def flipped_signs(self) -> Tuple[int, ...]:
        return tuple(-s for s in self.signs)


def _check_window_side(n: int, allow_large: bool) -> None:
    limit = MAX_WINDOW_SIDE if allow_large else DEFAULT_MAX_WINDOW_SIDE
    if isinstance(n, bool) or not isinstance(n, int) or not 1 <= n <= limit:
        hint = "" if allow_large else f" (sides up to {MAX_WINDOW_SIDE} need allow_large)"
        raise BoundError(f"Window side must be an integer in [1, {limit}], got {n!r}{hint}")


def enumerate_placements(n: int, spec: FieldSpec) -> List[FieldPlacement]:
    """
    Restrictions of the field to every translate ``S_n + (i, j)`` over one full field period, with
    identical sign patterns removed. Offsets are visited in lexicographic order and the first offset
    producing a pattern is kept.
    """
    window = build_window(n)
    placements = []
    seen = set()
    for i in range(field_period(spec.L1)):
        for j in range(field_period(spec.L2)):
            signs = tuple(field_sign((i + a, j + b), spec) for a, b in window.interior)
            if signs in seen:
                continue
            seen.add(signs)
            placements.append(
                FieldPlacement(offset=(i, j), signs=signs, window_field=tuple(spec.h * s for s in signs))
            )
    logger.debug("%d distinct placements for n=%d, sizes=%s", len(placements), n, spec.sizes)
    return placements


def placement_set(n: int, spec: FieldSpec) -> FrozenSet[Tuple[int, ...]]:
    return frozenset(p.signs for p in enumerate_placements(n, spec))


def drop_sign_flip_pairs(placements: List[FieldPlacement]) -> List[FieldPlacement]:
    """Keeps one placement of every pair related by a global sign flip; both give the same DS sum."""
    kept = []
    kept_signs = set()
    for placement in placements:
        if placement.flipped_signs() in kept_signs:
            continue
        kept.append(placement)
        kept_signs.add(placement.signs)
    return kept


@functools.lru_cache(maxsize=256)
def placement_tables(n: int, window_field: Tuple[float, ...], J: float) -> EnergyTables:
    return build_energy_tables(build_window(n), window_field, J)


def placement_gamma(n: int, placement: FieldPlacement, point: ThermoPoint) -> float:
    """``(1/n^2) * sum_{s, t} alpha_st`` for one placement of the field."""
    tables = placement_tables(n, placement.window_field, point.J)
    return float(alpha_matrix(tables, point.beta).sum()) / (n * n)


def ds_gamma(
    n: int,
    point: ThermoPoint,
    spec: FieldSpec,
    placement_mode: PlacementMode = PlacementMode.FULL_PERIOD,
    allow_large: bool = False,
    stop_at: Optional[float] = None,
) -> float:
    """
    Dobrushin-Shlosman constant of the square window of side ``n``.

    Args:
        n (:obj:`int`): window side. Sides above 3 require :param:`allow_large`.
        point (:obj:`ThermoPoint`): coupling, field amplitude and temperature. The amplitude of
            :param:`spec` is ignored in favour of ``point.h``.
        spec (:obj:`FieldSpec`): cell sizes.
        placement_mode (:obj:`PlacementMode`): whether sign-flipped placements are evaluated.
        allow_large (:obj:`bool`, defaults to :obj:`False`): lift the default bound on ``n``.
        stop_at (:obj:`float`, `optional`): if given, return as soon as one placement reaches this value.
            The result is then only a lower bound of the constant, which suffices for comparisons.

    Raises:
        :obj:`BoundError`: if ``n`` exceeds the permitted window side.
    """
    _check_window_side(n, allow_large)
    placements = enumerate_placements(n, spec.with_h(point.h))
    if placement_mode is PlacementMode.SIGNFLIP_DEDUP:
        placements = drop_sign_flip_pairs(placements)
    best = 0.0
    for placement in placements:
        best = max(best, placement_gamma(n, placement, point))
        if stop_at is not None and best >= stop_at:
            logger.debug("Placement %s reached %.6g >= %.6g at %s", placement.offset, best, stop_at, point)
            break
    return best


def ds_unique(
    n: int,
    point: ThermoPoint,
    spec: FieldSpec,
    placement_mode: PlacementMode = PlacementMode.FULL_PERIOD,
    allow_large: bool = False,
) -> CriterionEvaluation:
    value = ds_gamma(n, point, spec, placement_mode=placement_mode, allow_large=allow_large)
    return _evaluation(Criterion.DS, n, point, spec, value, DS_THRESHOLD)
