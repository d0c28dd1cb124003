# SPDX-License-Identifier: MIT

import argparse
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from cellboard.uniqueness.criteria import (
    DEFAULT_MAX_WINDOW_SIDE,
    DEFAULT_PC_BOUND,
    Criterion,
    PlacementMode,
    ThermoPoint,
)
from cellboard.uniqueness.exceptions import BoundError, ParameterError
from cellboard.uniqueness.finite_gibbs import MAX_WINDOW_SIDE
from cellboard.uniqueness.lattice import INFINITE, CellSize, FieldSpec, ModelParams, cell_size_label, parse_cell_size
from cellboard.uniqueness.sweep import DEFAULT_REFINE_TOL, DP_DC_H_GRID, DP_DC_T_GRID, DS_H_GRID, DS_T_GRID, Grid1D
from cellboard.uniqueness.verification import CHECKS, VerificationSettings

COMMANDS = ("eval", "curve", "verify")
OUTPUT_FORMATS = ("csv", "json")
H_LINE = "h-line"
T_LINE = "t-line"
DS_LINES = (H_LINE, T_LINE)
# Reaches past h_c = 4J of (1, 1) cells.
FIG1_DS_H_GRID = Grid1D(0.05, 0.05, 90)


@dataclass(frozen=True)
class CurveJob:
    """One curve of a run. DP and DC curves ignore ``n`` and the cell sizes."""
    criterion: Criterion
    n: int = 1
    L1: Optional[CellSize] = None
    L2: Optional[CellSize] = None
    line: str = H_LINE
    # Field grid used when no --h-grid flag is given; falls back to the criterion default.
    h_grid: Optional[Grid1D] = None

    @property
    def name(self) -> str:
        if self.criterion is not Criterion.DS:
            return self.criterion.value
        suffix = "" if self.line == H_LINE else "_tline"
        return f"ds_n{self.n}_L{cell_size_label(self.L1)}x{cell_size_label(self.L2)}{suffix}"

    @property
    def spec(self) -> Optional[FieldSpec]:
        if self.L1 is None or self.L2 is None:
            return None
        return FieldSpec(self.L1, self.L2)


@dataclass(frozen=True)
class FigurePreset:
    name: str
    title: str
    jobs: Tuple[CurveJob, ...]


FIGURE_PRESETS: Dict[str, FigurePreset] = {
    "fig1": FigurePreset(
        "fig1",
        "Uniqueness regions, L1 = L2 = 1",
        (
            CurveJob(Criterion.DP),
            CurveJob(Criterion.DC),
            CurveJob(Criterion.DS, 3, 1, 1, h_grid=FIG1_DS_H_GRID),
        ),
    ),
    "fig2a": FigurePreset(
        "fig2a",
        "Dobrushin-Shlosman lines, L1 = inf, L2 = 1",
        (
            CurveJob(Criterion.DS, 2, INFINITE, 1),
            CurveJob(Criterion.DS, 3, INFINITE, 1),
        ),
    ),
    "fig2b": FigurePreset(
        "fig2b",
        "Dobrushin-Shlosman lines, L1 = L2 = 2",
        (
            CurveJob(Criterion.DS, 2, 2, 2),
            CurveJob(Criterion.DS, 3, 2, 2),
        ),
    ),
    "fig3": FigurePreset(
        "fig3",
        "Dobrushin-Shlosman lines, n = 3",
        (
            CurveJob(Criterion.DS, 3, 2, 1),
            CurveJob(Criterion.DS, 3, INFINITE, 1),
            CurveJob(Criterion.DS, 3, INFINITE, 2),
            CurveJob(Criterion.DS, 3, INFINITE, 2, line=T_LINE),
        ),
    ),
}


@dataclass
class RunConfig:
    """Validated settings of one command-line run."""
    command: str
    params: ModelParams
    criterion: Optional[Criterion] = None
    n: int = 1
    h: Optional[float] = None
    T: Optional[float] = None
    h_grid: Optional[Grid1D] = None
    T_grid: Optional[Grid1D] = None
    pc_bound: float = DEFAULT_PC_BOUND
    refine_tol: float = DEFAULT_REFINE_TOL
    placement_mode: PlacementMode = PlacementMode.FULL_PERIOD
    figure: Optional[str] = None
    ds_line: str = H_LINE
    out: Path = Path(".")
    output_format: str = "csv"
    plot: bool = False
    threads: int = 1
    allow_large: bool = False
    overlays: List[Path] = field(default_factory=list)
    checks: List[str] = field(default_factory=list)
    samples: Optional[int] = None
    sizes_given: bool = False

    @property
    def J(self) -> float:
        return self.params.J

    @property
    def spec(self) -> FieldSpec:
        return self.params.field

    @property
    def point(self) -> ThermoPoint:
        if self.h is None or self.T is None:
            raise ParameterError("A single-point evaluation needs both --h and --T")
        return ThermoPoint(self.J, self.h, self.T)

    def curve_jobs(self) -> List[CurveJob]:
        if self.figure is not None:
            return list(FIGURE_PRESETS[self.figure].jobs)
        if self.criterion is Criterion.DS:
            return [CurveJob(Criterion.DS, self.n, self.spec.L1, self.spec.L2, self.ds_line)]
        return [CurveJob(self.criterion)]

    def verification_settings(self) -> VerificationSettings:
        return VerificationSettings(
            J=self.J,
            sizes=self.spec.sizes if self.sizes_given else None,
            refine_tol=self.refine_tol,
            placement_mode=self.placement_mode,
            samples=self.samples,
        )

    def grids_for(self, job: CurveJob) -> Tuple[Grid1D, Grid1D]:
        """``(h_grid, T_grid)`` of a job: the flag values when given, otherwise the job or criterion defaults."""
        if job.criterion is Criterion.DS:
            defaults = DS_H_GRID, DS_T_GRID
        else:
            defaults = DP_DC_H_GRID, DP_DC_T_GRID
        return self.h_grid or job.h_grid or defaults[0], self.T_grid or defaults[1]

    def grid_sources(self, job: CurveJob) -> Dict[str, str]:
        """Where each grid of :meth:`grids_for` comes from: ``"flag"``, ``"preset"`` or ``"default"``."""
        h_source = "flag" if self.h_grid is not None else "preset" if job.h_grid is not None else "default"
        return {"h": h_source, "T": "flag" if self.T_grid is not None else "default"}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "J": self.J,
            "field": self.spec.to_dict(),
            "criterion": None if self.criterion is None else self.criterion.value,
            "n": self.n,
            "h": self.h,
            "T": self.T,
            "pc_bound": self.pc_bound,
            "refine_tol": self.refine_tol,
            "placement_mode": self.placement_mode.value,
            "figure": self.figure,
            "ds_line": self.ds_line,
            "threads": self.threads,
            "allow_large": self.allow_large,
        }

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> "RunConfig":
        """
        Builds and validates a configuration from parsed command-line flags.

        Raises:
            :obj:`ParameterError`: if a flag value is invalid or a required flag is missing.
            :obj:`BoundError`: if the window side exceeds the permitted enumeration size.
        """
        command = getattr(args, "command", None)
        if command not in COMMANDS:
            raise ParameterError(f"Unknown command {command!r}, expected one of {', '.join(COMMANDS)}")
        raw_L1, raw_L2 = getattr(args, "L1", None), getattr(args, "L2", None)
        L1 = parse_cell_size("1" if raw_L1 is None else raw_L1)
        L2 = parse_cell_size("1" if raw_L2 is None else raw_L2)
        h = getattr(args, "h", None)
        params = ModelParams(float(args.J), FieldSpec(L1, L2, 0.0 if h is None else abs(float(h))))
        criterion = getattr(args, "criterion", None)
        config = cls(
            command=command,
            params=params,
            criterion=None if criterion is None else Criterion(criterion),
            n=getattr(args, "n", 1),
            h=None if h is None else float(h),
            T=None if getattr(args, "T", None) is None else float(args.T),
            h_grid=_optional_grid(getattr(args, "h_grid", None)),
            T_grid=_optional_grid(getattr(args, "T_grid", None)),
            pc_bound=getattr(args, "pc_bound", DEFAULT_PC_BOUND),
            refine_tol=getattr(args, "refine_tol", DEFAULT_REFINE_TOL),
            placement_mode=PlacementMode(getattr(args, "placement_mode", PlacementMode.FULL_PERIOD.value)),
            figure=getattr(args, "figure", None),
            ds_line=getattr(args, "ds_line", H_LINE),
            out=Path(getattr(args, "out", None) or "."),
            output_format=getattr(args, "format", "csv"),
            plot=getattr(args, "plot", False),
            threads=getattr(args, "threads", None) or os.cpu_count() or 1,
            allow_large=getattr(args, "allow_large", False),
            overlays=[Path(p) for p in (getattr(args, "overlay", None) or [])],
            checks=list(getattr(args, "check", None) or []),
            samples=getattr(args, "samples", None),
            sizes_given=raw_L1 is not None or raw_L2 is not None,
        )
        config.validate()
        return config

    def validate(self) -> None:
        if not math.isfinite(self.pc_bound) or not 0.0 < self.pc_bound < 1.0:
            raise ParameterError(f"--pc-bound must lie in (0, 1), got {self.pc_bound}")
        if not math.isfinite(self.refine_tol) or self.refine_tol <= 0:
            raise ParameterError(f"--refine-tol must be finite and > 0, got {self.refine_tol}")
        if isinstance(self.threads, bool) or not isinstance(self.threads, int) or self.threads < 1:
            raise ParameterError(f"--threads must be a positive integer, got {self.threads!r}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ParameterError(f"--format must be one of {', '.join(OUTPUT_FORMATS)}, got {self.output_format!r}")
        if self.ds_line not in DS_LINES:
            raise ParameterError(f"--ds-line must be one of {', '.join(DS_LINES)}, got {self.ds_line!r}")
        limit = MAX_WINDOW_SIDE if self.allow_large else DEFAULT_MAX_WINDOW_SIDE
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise ParameterError(f"--n must be a positive integer, got {self.n!r}")
        if self.n > limit:
            hint = "" if self.allow_large else f"; pass --allow-large for sides up to {MAX_WINDOW_SIDE}"
            raise BoundError(f"--n {self.n} exceeds the enumeration bound {limit}{hint}")
        if self.command == "eval":
            if self.criterion is None:
                raise ParameterError("eval needs --criterion")
            if self.h is None or self.T is None:
                raise ParameterError("eval needs both --h and --T")
            ThermoPoint(self.J, self.h, self.T)
        if self.command == "curve":
            if self.figure is None and self.criterion is None:
                raise ParameterError("curve needs either --figure or --criterion")
            if self.figure is not None and self.figure not in FIGURE_PRESETS:
                raise ParameterError(f"Unknown figure {self.figure!r}, expected one of {', '.join(FIGURE_PRESETS)}")
        if self.command == "verify":
            unknown = [name for name in self.checks if name not in CHECKS]
            if unknown:
                raise ParameterError(f"Unknown checks {unknown}, expected any of {', '.join(CHECKS)}")
            if self.samples is not None and self.samples < 1:
                raise ParameterError(f"--samples must be a positive integer, got {self.samples}")


def _optional_grid(text: Optional[str]) -> Optional[Grid1D]:
    return None if text is None else Grid1D.parse(text)
