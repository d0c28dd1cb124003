# SPDX-License-Identifier: MIT

"""
Exact conditional Gibbs distributions on the square window ``S_n = {(i, j): 0 <= i, j < n}`` with a fixed
configuration on its exterior boundary.

Configurations are bitmasks. Bit ``k`` of an interior mask is the spin of ``window.interior[k]`` and bit ``k``
of a boundary mask is the spin of ``window.boundary[k]``; a set bit means ``+1``.
"""

import dataclasses
import functools
import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.special import expit, softmax

from cellboard.uniqueness.exceptions import BoundError, ParameterError
from cellboard.uniqueness.lattice import ModelParams, Site

logger = logging.getLogger(__name__)

MAX_WINDOW_SIDE = 5
MAX_INTERIOR_BITS = 25
MAX_BOUNDARY_BITS = 24

# Upper bound on the number of Boltzmann weights held at once while sweeping boundary masks.
CHUNK_ELEMENTS = 1 << 22


@dataclass(frozen=True)
class SquareWindow:
    n: int
    interior: Tuple[Site, ...]
    boundary: Tuple[Site, ...]
    interior_bonds: Tuple[Tuple[Site, Site], ...]
    crossing_bonds: Tuple[Tuple[Site, Site], ...]
    boundary_neighbour: Tuple[int, ...] = dataclasses.field(repr=False)
    bond_indices: Tuple[Tuple[int, int], ...] = dataclasses.field(repr=False)

    @property
    def n_interior(self) -> int:
        return len(self.interior)

    @property
    def n_boundary(self) -> int:
        return len(self.boundary)


@functools.lru_cache(maxsize=None, typed=True)
def build_window(n: int) -> SquareWindow:
    """
    Builds the geometry of ``S_n``. The interior is listed row-major, the boundary side by side
    (``i = -1``, ``i = n``, ``j = -1``, ``j = n``) each ordered by the free coordinate. Corner-diagonal
    exterior sites share no bond with the interior and are not part of the boundary.
    """
    if isinstance(n, bool) or not isinstance(n, int) or not 1 <= n <= MAX_WINDOW_SIDE:
        raise BoundError(f"Window side must be an integer in [1, {MAX_WINDOW_SIDE}], got {n!r}")
    interior = tuple((i, j) for i in range(n) for j in range(n))
    position = {site: k for k, site in enumerate(interior)}
    boundary = (
        tuple((-1, j) for j in range(n))
        + tuple((n, j) for j in range(n))
        + tuple((i, -1) for i in range(n))
        + tuple((i, n) for i in range(n))
    )
    bonds = []
    for i, j in interior:
        if i + 1 < n:
            bonds.append(((i, j), (i + 1, j)))
        if j + 1 < n:
            bonds.append(((i, j), (i, j + 1)))
    crossing = []
    for i, j in boundary:
        neighbour = (min(max(i, 0), n - 1), min(max(j, 0), n - 1))
        crossing.append((neighbour, (i, j)))
    return SquareWindow(
        n=n,
        interior=interior,
        boundary=boundary,
        interior_bonds=tuple(bonds),
        crossing_bonds=tuple(crossing),
        boundary_neighbour=tuple(position[s] for s, _ in crossing),
        bond_indices=tuple((position[a], position[b]) for a, b in bonds),
    )


def mask_to_spins(masks: np.ndarray, n_bits: int) -> np.ndarray:
    """Converts an array of bitmasks to a ``(len(masks), n_bits)`` array of ``+-1`` spins (``int8``)."""
    masks = np.asarray(masks, dtype=np.int64)
    spins = np.empty((masks.shape[0], n_bits), dtype=np.int8)
    for k in range(n_bits):
        spins[:, k] = ((masks >> k) & 1) * 2 - 1
    return spins


@dataclass(frozen=True, eq=False)
class EnergyTables:
    """
    Interior energies of every interior configuration of a window, for one placement of the field.

    The energy of ``sigma`` with boundary ``eta`` decomposes as
    ``H(sigma | eta) = interior_energy[sigma] + sum_t eta(t) * coupling[sigma, t]`` with
    ``coupling[sigma, t] = -J * sigma(neighbour of t)``, so the interior work is shared by all boundaries.
    """
    window: SquareWindow
    J: float
    field: Tuple[float, ...]
    spins: np.ndarray = dataclasses.field(repr=False)
    interior_energy: np.ndarray = dataclasses.field(repr=False)
    plus_indicator: np.ndarray = dataclasses.field(repr=False)

    @property
    def n_configs(self) -> int:
        return self.spins.shape[0]

    @property
    def coupling(self) -> np.ndarray:
        return -self.J * self.spins[:, list(self.window.boundary_neighbour)].astype(np.float64)


def build_energy_tables(window: SquareWindow, field: Sequence[float], J: float) -> EnergyTables:
    n_sites = window.n_interior
    if len(field) != n_sites:
        raise ParameterError(f"Window field must have {n_sites} entries, got {len(field)}")
    if n_sites > MAX_INTERIOR_BITS or window.n_boundary > MAX_BOUNDARY_BITS:
        raise BoundError(
            f"Window with {n_sites} interior and {window.n_boundary} boundary sites exceeds the enumeration "
            f"bounds ({MAX_INTERIOR_BITS}, {MAX_BOUNDARY_BITS})"
        )
    if not math.isfinite(J) or J <= 0:
        raise ParameterError(f"Coupling J must be finite and > 0, got {J}")
    spins = mask_to_spins(np.arange(1 << n_sites, dtype=np.int64), n_sites)
    bond_sum = np.zeros(spins.shape[0], dtype=np.int32)
    for a, b in window.bond_indices:
        bond_sum += spins[:, a] * spins[:, b]
    field_term = np.zeros(spins.shape[0], dtype=np.float64)
    for s, h_s in enumerate(field):
        field_term += float(h_s) * spins[:, s]
    interior_energy = -J * bond_sum - field_term
    plus_indicator = (spins > 0).astype(np.float64)
    for array in (spins, interior_energy, plus_indicator):
        array.flags.writeable = False
    return EnergyTables(
        window=window,
        J=float(J),
        field=tuple(float(x) for x in field),
        spins=spins,
        interior_energy=interior_energy,
        plus_indicator=plus_indicator,
    )


def _validate_beta(beta: float) -> float:
    beta = float(beta)
    if not math.isfinite(beta) or beta <= 0:
        raise ParameterError(f"Inverse temperature beta must be finite and > 0, got {beta}")
    return beta


def boundary_sums(window: SquareWindow, eta_masks: np.ndarray) -> np.ndarray:
    """Per interior site, the sum of the boundary spins bonded to it: shape ``(len(eta_masks), n**2)``."""
    eta_spins = mask_to_spins(eta_masks, window.n_boundary)
    sums = np.zeros((eta_spins.shape[0], window.n_interior), dtype=np.float64)
    for k, s in enumerate(window.boundary_neighbour):
        sums[:, s] += eta_spins[:, k]
    return sums


def marginals_plus_batch(tables: EnergyTables, eta_masks: Sequence[int], beta: float) -> np.ndarray:
    """
    Single-site probabilities ``mu(sigma(s) = +1 | eta)`` for a batch of boundary masks.

    Returns:
        :obj:`numpy.ndarray`: array of shape ``(len(eta_masks), n**2)``.
    """
    beta = _validate_beta(beta)
    eta_masks = np.asarray(eta_masks, dtype=np.int64)
    spins_t = tables.spins.T.astype(np.float64)
    chunk = max(1, CHUNK_ELEMENTS // tables.n_configs)
    out = np.empty((eta_masks.shape[0], tables.window.n_interior), dtype=np.float64)
    for start in range(0, eta_masks.shape[0], chunk):
        stop = min(start + chunk, eta_masks.shape[0])
        sums = boundary_sums(tables.window, eta_masks[start:stop])
        energies = tables.interior_energy[None, :] - tables.J * (sums @ spins_t)
        # softmax shifts by the row maximum before exponentiating.
        weights = softmax(-beta * energies, axis=1)
        out[start:stop] = weights @ tables.plus_indicator
    return out


def marginals_plus(tables: EnergyTables, eta: int, beta: float) -> np.ndarray:
    return marginals_plus_batch(tables, [eta], beta)[0]


def all_boundary_marginals(tables: EnergyTables, beta: float) -> np.ndarray:
    n_masks = 1 << tables.window.n_boundary
    return marginals_plus_batch(tables, np.arange(n_masks, dtype=np.int64), beta)


def alpha_matrix(tables: EnergyTables, beta: float) -> np.ndarray:
    """
    Influence of every boundary spin on every interior marginal.

    Returns:
        :obj:`numpy.ndarray`: array of shape ``(n**2, 4n)`` whose entry ``[s, t]`` is the largest change of
        ``mu(sigma(s) = +1 | eta)`` when only ``eta(t)`` is flipped, maximised over the other boundary spins.
    """
    marginals = all_boundary_marginals(tables, beta)
    masks = np.arange(marginals.shape[0], dtype=np.int64)
    alpha = np.empty((tables.window.n_interior, tables.window.n_boundary), dtype=np.float64)
    for t in range(tables.window.n_boundary):
        low = masks[((masks >> t) & 1) == 0]
        high = low | (1 << t)
        alpha[:, t] = np.abs(marginals[high] - marginals[low]).max(axis=0)
    return alpha


def alpha_st(tables: EnergyTables, s_index: int, t_index: int, beta: float) -> float:
    if not 0 <= s_index < tables.window.n_interior:
        raise ParameterError(f"Interior index {s_index} out of range [0, {tables.window.n_interior})")
    if not 0 <= t_index < tables.window.n_boundary:
        raise ParameterError(f"Boundary index {t_index} out of range [0, {tables.window.n_boundary})")
    return float(alpha_matrix(tables, beta)[s_index, t_index])


def site_probability_plus(J: float, site_field: float, eta_sum: int, beta: float) -> float:
    """``mu(sigma(s) = +1 | eta)`` of a single site whose four neighbours sum to ``eta_sum``."""
    return float(expit(2.0 * beta * (J * eta_sum + site_field)))


def _validate_neighbour_sum(value: int, name: str) -> int:
    if isinstance(value, bool) or int(value) != value or abs(value) > 4 or int(value) % 2 != 0:
        raise ParameterError(f"{name} must be an even integer in [-4, 4], got {value!r}")
    return int(value)


def single_site_tv(
    params: ModelParams, site_field: float, eta_sum: int, eta_sum_prime: int, beta: float
) -> float:
    """Total variation distance between the single-site conditional laws under two neighbour sums."""
    beta = _validate_beta(beta)
    eta_sum = _validate_neighbour_sum(eta_sum, "eta_sum")
    eta_sum_prime = _validate_neighbour_sum(eta_sum_prime, "eta_sum_prime")
    return abs(
        site_probability_plus(params.J, site_field, eta_sum, beta)
        - site_probability_plus(params.J, site_field, eta_sum_prime, beta)
    )
