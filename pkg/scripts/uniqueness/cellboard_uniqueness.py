# SPDX-License-Identifier: MIT

import argparse
import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import cellboard.uniqueness
from cellboard.uniqueness.argparse_utils import (
    add_criterion_argparse_parameters,
    add_grid_argparse_parameters,
    add_logging_argparse_parameters,
    add_model_argparse_parameters,
    add_output_argparse_parameters,
    add_verify_argparse_parameters,
)
from cellboard.uniqueness.config import FIGURE_PRESETS, H_LINE, CurveJob, RunConfig
from cellboard.uniqueness.criteria import Criterion, CriterionEvaluation, dc_unique, dp_unique, ds_unique
from cellboard.uniqueness.exceptions import BoundError, OverlayParseError, ParameterError, ReportIOError
from cellboard.uniqueness.report import (
    PlotSpec,
    read_overlay,
    render_svg,
    write_csv,
    write_json,
    write_manifest,
)
from cellboard.uniqueness.sweep import Curve, dc_curve, dp_curve, ds_h_line, ds_t_line
from cellboard.uniqueness.verification import VerificationReport, run_checks

logger = logging.getLogger("cellboard_uniqueness")

EXIT_OK = 0
EXIT_PARAMETER_ERROR = 2
EXIT_BOUND_ERROR = 3
EXIT_IO_ERROR = 4
EXIT_VERIFICATION_FAILED = 5


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        description="Maps the temperature-field regions in which the cell-board Ising model provably has a "
        "unique Gibbs measure, using disagreement percolation, the Dobrushin criterion and the "
        "Dobrushin-Shlosman criterion on square windows.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    eval_parser = subparsers.add_parser(
        "eval",
        help="Evaluate one criterion at a single (h, T) point.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    eval_parser = add_model_argparse_parameters(eval_parser, point=True)
    eval_parser = add_criterion_argparse_parameters(eval_parser, required=True)
    eval_parser = add_logging_argparse_parameters(eval_parser)

    curve_parser = subparsers.add_parser(
        "curve",
        help="Compute uniqueness boundary curves and write them with their manifests.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    curve_parser = add_model_argparse_parameters(curve_parser)
    curve_parser = add_criterion_argparse_parameters(curve_parser)
    curve_parser = add_grid_argparse_parameters(curve_parser)
    curve_parser = add_output_argparse_parameters(curve_parser)
    curve_parser = add_logging_argparse_parameters(curve_parser)

    verify_parser = subparsers.add_parser(
        "verify",
        help="Run the identity checks and report the largest deviation of each.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    verify_parser = add_model_argparse_parameters(verify_parser)
    verify_parser = add_verify_argparse_parameters(verify_parser)
    verify_parser = add_logging_argparse_parameters(verify_parser)

    return parser.parse_args(argv)


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def cmd_eval(config: RunConfig) -> CriterionEvaluation:
    point = config.point
    if config.criterion is Criterion.DP:
        evaluation = dp_unique(point, config.pc_bound)
    elif config.criterion is Criterion.DC:
        evaluation = dc_unique(point)
    else:
        evaluation = ds_unique(
            config.n, point, config.spec, placement_mode=config.placement_mode, allow_large=config.allow_large
        )
    print(json.dumps(evaluation.to_dict(), indent=2))
    return evaluation


def compute_curve(job: CurveJob, config: RunConfig) -> Curve:
    h_grid, T_grid = config.grids_for(job)
    logger.info("Computing %s", job.name)
    if job.criterion is Criterion.DP:
        curve = dp_curve(config.J, h_grid, pc_bound=config.pc_bound, refine_tol=config.refine_tol, T_grid=T_grid)
    elif job.criterion is Criterion.DC:
        curve = dc_curve(config.J, h_grid, refine_tol=config.refine_tol, T_grid=T_grid)
    else:
        line = ds_h_line if job.line == H_LINE else ds_t_line
        curve = line(
            job.n,
            config.J,
            job.spec,
            T_grid=T_grid,
            h_grid=h_grid,
            placement_mode=config.placement_mode,
            allow_large=config.allow_large,
            threads=config.threads,
        )
    curve.manifest["grid_sources"] = config.grid_sources(job)
    return curve


def _manifest(config: RunConfig, curves: List[Curve], started: str, outputs: List[str]) -> Dict[str, Any]:
    return {
        "command": "curve",
        "version": cellboard.uniqueness.__version__,
        "params": config.to_dict(),
        "grids": [curve.manifest.get("grids") for curve in curves],
        "tolerances": {"refine_tol": config.refine_tol},
        "placement_mode": config.placement_mode.value,
        "timestamps": {"started": started, "finished": _timestamp()},
        "truncated": [curve.manifest.get("truncated", []) for curve in curves],
        "curves": [curve.manifest for curve in curves],
        "outputs": outputs,
    }


def cmd_curve(config: RunConfig) -> List[Path]:
    started = _timestamp()
    try:
        config.out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ReportIOError(config.out, e.strerror or str(e)) from e
    overlays = [read_overlay(path) for path in config.overlays]
    written = []
    curves = []
    jobs = config.curve_jobs()
    for job in jobs:
        curve = compute_curve(job, config)
        curves.append(curve)
        path = config.out / f"{job.name}.{config.output_format}"
        if config.output_format == "csv":
            write_csv(curve, path)
        else:
            write_json(curve, path)
        write_manifest(path, _manifest(config, [curve], started, [path.name]))
        written.append(path)
    if config.plot or config.figure is not None:
        if config.figure is not None:
            name, title = config.figure, FIGURE_PRESETS[config.figure].title
        else:
            name, title = jobs[0].name, curves[0].label
        plot = PlotSpec(title=title, overlays=overlays)
        for curve in curves:
            plot.add_curve(curve)
        svg_path = config.out / f"{name}.svg"
        render_svg(plot, svg_path)
        write_manifest(svg_path, _manifest(config, curves, started, [p.name for p in written] + [svg_path.name]))
        written.append(svg_path)
    print(json.dumps({"outputs": [str(p) for p in written]}, indent=2))
    return written


def cmd_verify(config: RunConfig) -> VerificationReport:
    report = run_checks(config.checks, config.verification_settings())
    print(json.dumps(report.to_dict(), indent=2))
    return report


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parse_args(argv)
    logging.basicConfig(level=args.log_level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    logging.captureWarnings(True)
    try:
        config = RunConfig.from_namespace(args)
        if config.command == "eval":
            cmd_eval(config)
        elif config.command == "curve":
            cmd_curve(config)
        elif not cmd_verify(config).passed:
            return EXIT_VERIFICATION_FAILED
    except BoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BOUND_ERROR
    except ParameterError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARAMETER_ERROR
    except (ReportIOError, OverlayParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
