# SPDX-License-Identifier: MIT

import functools
import logging
import math
import warnings
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from cellboard.uniqueness.criteria import (
    DC_THRESHOLD,
    DEFAULT_PC_BOUND,
    DS_THRESHOLD,
    Criterion,
    PlacementMode,
    ThermoPoint,
    dc_branch,
    disagreement_probability,
    dobrushin_f,
    dobrushin_gamma,
    ds_gamma,
)
from cellboard.uniqueness.exceptions import ParameterError
from cellboard.uniqueness.lattice import CellSize, FieldSpec, cell_size_to_json
from cellboard.uniqueness.package_info import __version__

logger = logging.getLogger(__name__)

DEFAULT_REFINE_TOL = 1e-6


@dataclass(frozen=True)
class Grid1D:
    start: float
    step: float
    count: int

    def __post_init__(self) -> None:
        if not math.isfinite(self.start) or not math.isfinite(self.step) or self.step <= 0:
            raise ParameterError(f"Grid needs a finite start and a positive finite step, got {self.label}")
        if isinstance(self.count, bool) or not isinstance(self.count, int) or self.count < 1:
            raise ParameterError(f"Grid count must be a positive integer, got {self.count!r}")
        if not math.isfinite(self.start + self.step * (self.count - 1)):
            raise ParameterError(f"Grid {self.label} has non-finite values")

    @property
    def label(self) -> str:
        return f"{self.start!r}:{self.step!r}:{self.count!r}"

    def values(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.count, dtype=np.float64)

    def to_dict(self) -> Dict[str, Any]:
        return {"start": self.start, "step": self.step, "count": self.count}

    @classmethod
    def parse(cls, text: str) -> "Grid1D":
        """Parses ``start:step:count``."""
        parts = text.split(":")
        if len(parts) != 3:
            raise ParameterError(f"Grid must be given as start:step:count, got '{text}'")
        try:
            return cls(float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError:
            raise ParameterError(f"Grid must be given as start:step:count, got '{text}'") from None


# Grids used for the disagreement percolation and Dobrushin curves.
DP_DC_T_GRID = Grid1D(0.0, 0.001, 7001)
DP_DC_H_GRID = Grid1D(0.0, 0.1, 46)
# Grids used for the Dobrushin-Shlosman lines.
DS_T_GRID = Grid1D(0.002, 0.002, 205)
DS_H_GRID = Grid1D(0.05, 0.05, 80)

GridLike = Union[Grid1D, Sequence[float], np.ndarray]


def grid_values(grid: GridLike) -> np.ndarray:
    return grid.values() if isinstance(grid, Grid1D) else np.asarray(grid, dtype=np.float64)


def grid_record(grid: GridLike) -> Any:
    return grid.to_dict() if isinstance(grid, Grid1D) else [float(x) for x in grid_values(grid)]


@dataclass(frozen=True)
class CurvePoint:
    h: Optional[float]
    T: Optional[float]
    value: Optional[float] = None
    unique: Optional[bool] = None
    truncated: bool = False


@dataclass
class Curve:
    """
    Ordered samples of a uniqueness boundary. ``axis`` names the swept coordinate (``"h"`` for boundary
    temperatures as a function of the field, ``"T"`` for boundary fields as a function of temperature).
    ``None`` coordinates are first-class: a DP point with ``T=None`` is unique at every temperature.
    """
    criterion: str
    n: int
    L1: Optional[CellSize]
    L2: Optional[CellSize]
    J: float
    axis: str
    points: List[CurvePoint] = field(default_factory=list)
    manifest: Dict[str, Any] = field(default_factory=dict)
    external: bool = False

    @property
    def label(self) -> str:
        if self.external:
            return self.manifest.get("source", "overlay")
        if self.criterion == Criterion.DS.value:
            sizes = f"({cell_size_to_json(self.L1)},{cell_size_to_json(self.L2)})"
            return f"DS n={self.n} {sizes}" + (" T-line" if self.axis == "h" else "")
        return self.criterion.upper()

    @property
    def truncated_indices(self) -> List[int]:
        return [k for k, p in enumerate(self.points) if p.truncated]


def _base_manifest(criterion: Criterion, n: int, J: float, spec: Optional[FieldSpec], axis: str) -> Dict[str, Any]:
    return {
        "criterion": criterion.value,
        "n": n,
        "J": J,
        "L1": None if spec is None else cell_size_to_json(spec.L1),
        "L2": None if spec is None else cell_size_to_json(spec.L2),
        "sweep_axis": axis,
        "version": __version__,
    }


def _parallel_map(func: Callable[[Any], Any], items: Sequence[Any], threads: int) -> List[Any]:
    # Pool.map returns results in input order, so the reduction never depends on completion order.
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with Pool(min(threads, len(items))) as pool:
        return pool.map(func, items)


def locate_boundary_temperature(
    func: Callable[[Union[float, np.ndarray]], Union[float, np.ndarray]],
    threshold: float,
    temperatures: np.ndarray,
    refine_tol: float,
) -> Tuple[Optional[float], bool]:
    """
    Finds the largest temperature at which ``func >= threshold`` by scanning ``temperatures`` (ascending) and
    refining the last downward crossing with Brent's method.

    Returns:
        :obj:`Tuple[Optional[float], bool]`: the boundary temperature (:obj:`None` if ``func < threshold`` on
        the whole scan) and whether the point is truncated, i.e. ``func >= threshold`` at the hot end of the
        scan so the true boundary lies beyond it.
    """
    temperatures = temperatures[temperatures > 0]
    if temperatures.size == 0:
        raise ParameterError("Temperature scan contains no positive temperatures")
    excess = np.asarray(func(temperatures), dtype=np.float64) - threshold
    above = excess >= 0
    if not above.any():
        return None, False
    if above[-1]:
        warnings.warn(
            f"Criterion value stays >= {threshold} up to the hottest scanned temperature "
            f"{temperatures[-1]:.6g}; boundary point is truncated."
        )
        return float(temperatures[-1]), True
    crossings = np.flatnonzero(above[:-1] & ~above[1:])
    if crossings.size > 1:
        warnings.warn(
            f"Found {crossings.size} brackets of threshold {threshold} in the temperature scan at "
            f"{[float(temperatures[k]) for k in crossings]}; using the hottest."
        )
    k = int(crossings[-1])
    low, high = float(temperatures[k]), float(temperatures[k + 1])
    if excess[k] == 0:
        return low, False
    root = brentq(lambda t: func(t) - threshold, low, high, xtol=refine_tol / 4)
    return float(root), False


def _check_refine_tol(refine_tol: float) -> None:
    if not math.isfinite(refine_tol) or refine_tol <= 0:
        raise ParameterError(f"Refinement tolerance must be finite and > 0, got {refine_tol}")


def _boundary_point(
    h: float,
    func: Callable[[Union[float, np.ndarray]], Union[float, np.ndarray]],
    threshold: float,
    temperatures: np.ndarray,
    refine_tol: float,
) -> CurvePoint:
    T, truncated = locate_boundary_temperature(func, threshold, temperatures, refine_tol)
    if T is None:
        return CurvePoint(h=h, T=None, value=None, unique=True)
    return CurvePoint(h=h, T=T, value=float(func(T)), unique=None, truncated=truncated)


def dp_curve(
    J: float,
    h_grid: GridLike = DP_DC_H_GRID,
    pc_bound: float = DEFAULT_PC_BOUND,
    refine_tol: float = DEFAULT_REFINE_TOL,
    T_grid: GridLike = DP_DC_T_GRID,
) -> Curve:
    """Disagreement percolation boundary temperature for every field of :param:`h_grid`."""
    if not math.isfinite(pc_bound) or not 0.0 < pc_bound < 1.0:
        raise ParameterError(f"Percolation bound must lie in (0, 1), got {pc_bound}")
    _check_refine_tol(refine_tol)
    ThermoPoint(J, 0.0, 1.0)
    temperatures = grid_values(T_grid)
    points = []
    for h in grid_values(h_grid):
        h = float(h)
        points.append(
            _boundary_point(
                h, functools.partial(disagreement_probability, J, h), pc_bound, temperatures, refine_tol
            )
        )
    manifest = _base_manifest(Criterion.DP, 1, J, None, "h")
    manifest.update(
        grids={"h": grid_record(h_grid), "T": grid_record(T_grid)},
        tolerances={"refine_tol": refine_tol},
        pc_bound=pc_bound,
    )
    curve = Curve(Criterion.DP.value, 1, None, None, J, "h", points, manifest)
    manifest["truncated"] = curve.truncated_indices
    logger.info("DP curve: %d points, %d unique at all temperatures", len(points), sum(p.T is None for p in points))
    return curve


def dc_curve(
    J: float,
    h_grid: GridLike = DP_DC_H_GRID,
    refine_tol: float = DEFAULT_REFINE_TOL,
    T_grid: GridLike = DP_DC_T_GRID,
) -> Curve:
    """
    Dobrushin boundary temperature for every field of :param:`h_grid`. On ``[0, 4J]`` the branch function
    selected by :func:`dc_branch` is solved directly; elsewhere the full maximum over neighbour sums is used.
    """
    _check_refine_tol(refine_tol)
    ThermoPoint(J, 0.0, 1.0)
    temperatures = grid_values(T_grid)
    points = []
    for h in grid_values(h_grid):
        h = float(h)
        branch = dc_branch(h, J)
        if branch is None:
            func = functools.partial(dobrushin_gamma, J, h)
        else:
            func = functools.partial(dobrushin_f, branch, J, h)
        points.append(_boundary_point(h, func, DC_THRESHOLD, temperatures, refine_tol))
    manifest = _base_manifest(Criterion.DC, 1, J, None, "h")
    manifest.update(
        grids={"h": grid_record(h_grid), "T": grid_record(T_grid)},
        tolerances={"refine_tol": refine_tol},
    )
    curve = Curve(Criterion.DC.value, 1, None, None, J, "h", points, manifest)
    manifest["truncated"] = curve.truncated_indices
    logger.info("DC curve: %d points", len(points))
    return curve


def _ds_line_manifest(
    n: int,
    J: float,
    spec: FieldSpec,
    axis: str,
    T_grid: GridLike,
    h_grid: GridLike,
    placement_mode: PlacementMode,
) -> Dict[str, Any]:
    manifest = _base_manifest(Criterion.DS, n, J, spec, axis)
    manifest.update(
        grids={"h": grid_record(h_grid), "T": grid_record(T_grid)},
        tolerances={"ds_threshold": DS_THRESHOLD},
        placement_mode=placement_mode.value,
        placement_range="full field period 0 <= i < 2*L1, 0 <= j < 2*L2",
        notes=[
            "field grid starts at its first declared value, so h = 0 is only scanned when the grid starts there",
        ],
    )
    return manifest


def _first_unique_field(
    T: float,
    n: int,
    J: float,
    spec: FieldSpec,
    h_values: Tuple[float, ...],
    placement_mode: PlacementMode,
    allow_large: bool,
) -> CurvePoint:
    for h in h_values:
        gamma = ds_gamma(
            n, ThermoPoint(J, h, T), spec, placement_mode=placement_mode, allow_large=allow_large, stop_at=DS_THRESHOLD
        )
        if gamma < DS_THRESHOLD:
            return CurvePoint(h=h, T=T, value=gamma, unique=True)
    return CurvePoint(h=None, T=T, value=None, unique=False)


def _first_unique_temperature(
    h: float,
    n: int,
    J: float,
    spec: FieldSpec,
    T_values: Tuple[float, ...],
    placement_mode: PlacementMode,
    allow_large: bool,
) -> CurvePoint:
    for T in T_values:
        gamma = ds_gamma(
            n, ThermoPoint(J, h, T), spec, placement_mode=placement_mode, allow_large=allow_large, stop_at=DS_THRESHOLD
        )
        if gamma < DS_THRESHOLD:
            return CurvePoint(h=h, T=T, value=gamma, unique=True)
    return CurvePoint(h=h, T=None, value=None, unique=False)


def ds_h_line(
    n: int,
    J: float,
    spec: FieldSpec,
    T_grid: GridLike = DS_T_GRID,
    h_grid: GridLike = DS_H_GRID,
    placement_mode: PlacementMode = PlacementMode.FULL_PERIOD,
    allow_large: bool = False,
    threads: int = 1,
) -> Curve:
    """For every temperature, the smallest grid field at which the Dobrushin-Shlosman constant is below 1."""
    ThermoPoint(J, 0.0, 1.0)
    T_values = [float(T) for T in grid_values(T_grid) if T > 0]
    h_values = tuple(float(h) for h in grid_values(h_grid) if h >= 0)
    worker = functools.partial(
        _first_unique_field,
        n=n,
        J=J,
        spec=spec,
        h_values=h_values,
        placement_mode=placement_mode,
        allow_large=allow_large,
    )
    points = _parallel_map(worker, T_values, threads)
    manifest = _ds_line_manifest(n, J, spec, "T", T_grid, h_grid, placement_mode)
    logger.info("DS h-line n=%d sizes=%s: %d temperatures", n, spec.sizes, len(points))
    return Curve(Criterion.DS.value, n, spec.L1, spec.L2, J, "T", points, manifest)


def ds_t_line(
    n: int,
    J: float,
    spec: FieldSpec,
    h_grid: GridLike = DS_H_GRID,
    T_grid: GridLike = DS_T_GRID,
    placement_mode: PlacementMode = PlacementMode.FULL_PERIOD,
    allow_large: bool = False,
    threads: int = 1,
) -> Curve:
    """For every field, the smallest grid temperature at which the Dobrushin-Shlosman constant is below 1."""
    ThermoPoint(J, 0.0, 1.0)
    h_values = [float(h) for h in grid_values(h_grid) if h >= 0]
    T_values = tuple(float(T) for T in grid_values(T_grid) if T > 0)
    worker = functools.partial(
        _first_unique_temperature,
        n=n,
        J=J,
        spec=spec,
        T_values=T_values,
        placement_mode=placement_mode,
        allow_large=allow_large,
    )
    points = _parallel_map(worker, h_values, threads)
    manifest = _ds_line_manifest(n, J, spec, "h", T_grid, h_grid, placement_mode)
    logger.info("DS T-line n=%d sizes=%s: %d fields", n, spec.sizes, len(points))
    return Curve(Criterion.DS.value, n, spec.L1, spec.L2, J, "h", points, manifest)
