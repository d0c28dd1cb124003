# SPDX-License-Identifier: MIT

from cellboard.uniqueness.criteria import (
    DC_THRESHOLD,
    DEFAULT_PC_BOUND,
    DS_THRESHOLD,
    HALF_PC_BOUND,
    Criterion,
    CriterionEvaluation,
    FieldPlacement,
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
from cellboard.uniqueness.exceptions import (
    BoundError,
    OverlayParseError,
    ParameterError,
    ReportIOError,
    UniquenessError,
)
from cellboard.uniqueness.finite_gibbs import (
    EnergyTables,
    SquareWindow,
    alpha_matrix,
    alpha_st,
    build_energy_tables,
    build_window,
    marginals_plus,
    single_site_tv,
)
from cellboard.uniqueness.lattice import (
    INFINITE,
    CellSize,
    FieldSpec,
    GroundStateKind,
    Infinite,
    ModelParams,
    critical_field,
    energy_density,
    field_sign,
    field_value,
    parse_cell_size,
)
from cellboard.uniqueness.package_info import (
    __contact_emails__,
    __contact_names__,
    __description__,
    __download_url__,
    __homepage__,
    __keywords__,
    __license__,
    __package_name__,
    __repository_url__,
    __shortversion__,
    __version__,
)
from cellboard.uniqueness.report import CurveStyle, PlotSpec, read_overlay, render_svg, write_csv, write_manifest
from cellboard.uniqueness.sweep import Curve, CurvePoint, Grid1D, dc_curve, dp_curve, ds_h_line, ds_t_line
