# SPDX-License-Identifier: MIT

import enum
import math
from dataclasses import dataclass
from typing import Any, Dict, Tuple, Union

from cellboard.uniqueness.exceptions import ParameterError


class Infinite(enum.Enum):
    INFINITE = "inf"

    def __repr__(self) -> str:
        return "INFINITE"


INFINITE = Infinite.INFINITE

CellSize = Union[int, Infinite]
Site = Tuple[int, int]


def validate_cell_size(value: CellSize, name: str = "cell size") -> CellSize:
    if value is INFINITE:
        return value
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParameterError(f"{name} must be a positive integer or INFINITE, got {value!r}")
    if value < 1:
        raise ParameterError(f"{name} must be >= 1, got {value}")
    return value


def parse_cell_size(token: Union[str, int, Infinite]) -> CellSize:
    """Parses ``"inf"`` or a positive integer token into a :obj:`CellSize`."""
    if token is INFINITE or isinstance(token, int):
        return validate_cell_size(token)
    text = str(token).strip().lower()
    if text in ("inf", "infinite", "infinity"):
        return INFINITE
    try:
        value = int(text)
    except ValueError:
        raise ParameterError(f"Cell size must be a positive integer or 'inf', got '{token}'") from None
    return validate_cell_size(value)


def cell_size_to_json(value: CellSize) -> Union[int, str]:
    return INFINITE.value if value is INFINITE else value


def cell_size_label(value: CellSize) -> str:
    return str(cell_size_to_json(value))


def inverse_cell_size(value: CellSize) -> float:
    return 0.0 if value is INFINITE else 1.0 / value


def cell_index(coordinate: int, size: CellSize) -> int:
    # Floored division keeps the pattern correct on negative coordinates.
    return 0 if size is INFINITE else coordinate // size


def field_period(size: CellSize) -> int:
    """Length of one field period along an axis; an infinite axis is constant, so its period is 1."""
    return 1 if size is INFINITE else 2 * size


@dataclass(frozen=True)
class FieldSpec:
    """
    Staggered cell-board field: cells of size ``L1 x L2`` carrying ``+h`` on white cells and ``-h`` on
    black cells, arranged as a chessboard. An infinite axis contributes cell index 0, so ``(inf, 1)`` is
    the striped field of constant rows and ``(inf, inf)`` is the homogeneous field ``+h``.
    """
    L1: CellSize
    L2: CellSize
    h: float = 0.0

    def __post_init__(self) -> None:
        validate_cell_size(self.L1, "L1")
        validate_cell_size(self.L2, "L2")
        if not math.isfinite(self.h) or self.h < 0:
            raise ParameterError(f"Field amplitude h must be finite and >= 0, got {self.h}")

    @property
    def sizes(self) -> Tuple[CellSize, CellSize]:
        return self.L1, self.L2

    def with_h(self, h: float) -> "FieldSpec":
        return FieldSpec(self.L1, self.L2, h)

    def to_dict(self) -> Dict[str, Any]:
        return {"L1": cell_size_to_json(self.L1), "L2": cell_size_to_json(self.L2), "h": self.h}


@dataclass(frozen=True)
class ModelParams:
    J: float
    field: FieldSpec

    def __post_init__(self) -> None:
        if not math.isfinite(self.J) or self.J <= 0:
            raise ParameterError(f"Coupling J must be finite and > 0, got {self.J}")


class GroundStateKind(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"
    CELLBOARD = "cellboard"


def field_sign(site: Site, spec: FieldSpec) -> int:
    t1, t2 = site
    parity = cell_index(t1, spec.L1) + cell_index(t2, spec.L2)
    return 1 if parity % 2 == 0 else -1


def field_value(site: Site, spec: FieldSpec) -> float:
    return spec.h * field_sign(site, spec)


def critical_field(J: float, L1: CellSize, L2: CellSize) -> float:
    """Field ``h_c = 2J/L1 + 2J/L2`` separating the two constant ground states from the cell-board one."""
    if not math.isfinite(J) or J <= 0:
        raise ParameterError(f"Coupling J must be finite and > 0, got {J}")
    validate_cell_size(L1, "L1")
    validate_cell_size(L2, "L2")
    return 2.0 * J * inverse_cell_size(L1) + 2.0 * J * inverse_cell_size(L2)


def energy_density(kind: GroundStateKind, params: ModelParams) -> float:
    """
    Energy per site of a periodic ground-state candidate.

    Args:
        kind (:obj:`GroundStateKind`): the configuration.
        params (:obj:`ModelParams`): coupling and field.

    Returns:
        :obj:`float`: ``-2J`` for the constant configurations (the staggered field sums to zero over a
        period unless both axes are infinite) and ``-2J + 2J (1/L1 + 1/L2) - h`` for the cell-board
        configuration, where every bond crossing a cell border is broken and every site is aligned with its field.
    """
    J = params.J
    spec = params.field
    # Only the homogeneous field (both axes infinite) has a non-zero mean.
    mean_sign = 1.0 if spec.L1 is INFINITE and spec.L2 is INFINITE else 0.0
    if kind is GroundStateKind.PLUS:
        return -2.0 * J - spec.h * mean_sign
    if kind is GroundStateKind.MINUS:
        return -2.0 * J + spec.h * mean_sign
    return -2.0 * J + 2.0 * J * (inverse_cell_size(spec.L1) + inverse_cell_size(spec.L2)) - spec.h
