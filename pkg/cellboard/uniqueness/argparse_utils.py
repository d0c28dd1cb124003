# SPDX-License-Identifier: MIT

import argparse

from cellboard.uniqueness.config import DS_LINES, FIGURE_PRESETS, H_LINE, OUTPUT_FORMATS
from cellboard.uniqueness.criteria import DEFAULT_PC_BOUND, Criterion, PlacementMode
from cellboard.uniqueness.sweep import DEFAULT_REFINE_TOL
from cellboard.uniqueness.verification import CHECKS


def add_model_argparse_parameters(parser: argparse.ArgumentParser, point: bool = False) -> argparse.ArgumentParser:
    parser.add_argument("--J", default=1.0, type=float, help="Nearest-neighbour coupling, must be positive.")
    parser.add_argument("--L1", default=None, help="Cell size along the first axis: a positive integer or 'inf'. Defaults to 1.")
    parser.add_argument("--L2", default=None, help="Cell size along the second axis: a positive integer or 'inf'. Defaults to 1.")
    if point:
        parser.add_argument("--h", type=float, help="Field amplitude.")
        parser.add_argument("--T", type=float, help="Temperature.")
    return parser


def add_criterion_argparse_parameters(
    parser: argparse.ArgumentParser, required: bool = False
) -> argparse.ArgumentParser:
    parser.add_argument(
        "--criterion",
        required=required,
        choices=[c.value for c in Criterion],
        help="Uniqueness criterion: disagreement percolation, Dobrushin or Dobrushin-Shlosman.",
    )
    parser.add_argument("--n", default=1, type=int, help="Side of the square window of the Dobrushin-Shlosman criterion.")
    parser.add_argument(
        "--pc-bound",
        default=DEFAULT_PC_BOUND,
        type=float,
        help="Lower bound of the site percolation threshold used by disagreement percolation (0.5 is the weaker bound).",
    )
    parser.add_argument(
        "--placement-mode",
        default=PlacementMode.FULL_PERIOD.value,
        choices=[m.value for m in PlacementMode],
        help="Whether field placements related by a global sign flip are evaluated once or twice.",
    )
    parser.add_argument(
        "--allow-large",
        default=False,
        action='store_true',
        help="Allow Dobrushin-Shlosman windows of side 4 and 5 (slow, memory hungry).",
    )
    return parser


def add_grid_argparse_parameters(parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
    parser.add_argument(
        "--h-grid",
        default=None,
        help="Field grid as start:step:count. Defaults to the grid of the selected criterion.",
    )
    parser.add_argument(
        "--T-grid",
        default=None,
        help="Temperature grid as start:step:count. Defaults to the grid of the selected criterion.",
    )
    parser.add_argument(
        "--refine-tol",
        default=DEFAULT_REFINE_TOL,
        type=float,
        help="Absolute tolerance of refined boundary temperatures.",
    )
    parser.add_argument(
        "--ds-line",
        default=H_LINE,
        choices=DS_LINES,
        help="Dobrushin-Shlosman line: smallest unique field per temperature (h-line) or smallest unique "
        "temperature per field (t-line).",
    )
    parser.add_argument(
        "--threads",
        default=None,
        type=int,
        help="Number of worker processes for Dobrushin-Shlosman lines. Defaults to the number of CPUs.",
    )
    return parser


def add_output_argparse_parameters(parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
    parser.add_argument("--figure", choices=list(FIGURE_PRESETS), help="Compute every curve of a figure preset.")
    parser.add_argument("--out", default=".", help="Output directory.")
    parser.add_argument("--format", default="csv", choices=OUTPUT_FORMATS, help="Curve file format.")
    parser.add_argument(
        "--plot", default=False, action='store_true', help="Render an SVG plot. Always on with --figure."
    )
    parser.add_argument(
        "--overlay",
        action='append',
        help="CSV file with h,T columns drawn on the plot as an external curve. Can be used multiple times.",
    )
    return parser


def add_verify_argparse_parameters(parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
    parser.add_argument(
        "--check",
        action='append',
        choices=list(CHECKS),
        help="Identity check to run. Can be used multiple times; all checks run if omitted.",
    )
    parser.add_argument(
        "--samples",
        default=None,
        type=int,
        help="Number of sampled points of every sampling check. Defaults to each check's own count.",
    )
    parser.add_argument("--refine-tol", default=DEFAULT_REFINE_TOL, type=float, help="Root tolerance of curve checks.")
    parser.add_argument(
        "--placement-mode",
        default=PlacementMode.FULL_PERIOD.value,
        choices=[m.value for m in PlacementMode],
        help="Placement mode used by the Dobrushin-Shlosman checks.",
    )
    return parser


def add_logging_argparse_parameters(parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level of progress messages written to stderr.",
    )
    return parser
