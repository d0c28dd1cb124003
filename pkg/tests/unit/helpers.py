# SPDX-License-Identifier: MIT

import itertools
import math
from typing import Dict, List, Sequence, Tuple

import numpy as np

from cellboard.uniqueness import INFINITE, FieldSpec, GroundStateKind, field_sign, field_value

Site = Tuple[int, int]


def period_energy_density(kind: GroundStateKind, J: float, spec: FieldSpec) -> float:
    """Energy per site summed over one explicit field period with periodic wrap-around."""
    rows = 1 if spec.L1 is INFINITE else 2 * spec.L1
    cols = 1 if spec.L2 is INFINITE else 2 * spec.L2

    def spin(i: int, j: int) -> int:
        if kind is GroundStateKind.PLUS:
            return 1
        if kind is GroundStateKind.MINUS:
            return -1
        return field_sign((i, j), spec)

    total = 0.0
    for i in range(rows):
        for j in range(cols):
            s = spin(i, j)
            total -= J * s * spin((i + 1) % rows, j)
            total -= J * s * spin(i, (j + 1) % cols)
            total -= field_value((i, j), spec) * s
    return total / (rows * cols)


def window_sites(n: int) -> Tuple[List[Site], List[Site]]:
    interior = [(i, j) for i in range(n) for j in range(n)]
    boundary = (
        [(-1, j) for j in range(n)] + [(n, j) for j in range(n)] + [(i, -1) for i in range(n)] + [(i, n) for i in range(n)]
    )
    return interior, boundary


def _neighbours(site: Site) -> List[Site]:
    i, j = site
    return [(i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)]


def direct_energy(n: int, field: Sequence[float], J: float, sigma: Dict[Site, int], eta: Dict[Site, int]) -> float:
    """Window Hamiltonian summed bond by bond over every interior site and its four neighbours."""
    interior, _ = window_sites(n)
    energy = 0.0
    for k, site in enumerate(interior):
        for other in _neighbours(site):
            if other in sigma:
                # Interior bonds are met twice.
                energy -= 0.5 * J * sigma[site] * sigma[other]
            else:
                energy -= J * sigma[site] * eta[other]
        energy -= field[k] * sigma[site]
    return energy


def direct_marginals(n: int, field: Sequence[float], J: float, beta: float, eta_mask: int) -> List[float]:
    """``mu(sigma(s) = +1 | eta)`` by summing Boltzmann weights over every interior configuration."""
    interior, boundary = window_sites(n)
    eta = {site: 1 if (eta_mask >> k) & 1 else -1 for k, site in enumerate(boundary)}
    energies = []
    configs = []
    for spins in itertools.product((-1, 1), repeat=len(interior)):
        sigma = dict(zip(interior, spins))
        configs.append(spins)
        energies.append(direct_energy(n, field, J, sigma, eta))
    lowest = min(energies)
    weights = [math.exp(-beta * (e - lowest)) for e in energies]
    z = sum(weights)
    return [sum(w for w, spins in zip(weights, configs) if spins[s] == 1) / z for s in range(len(interior))]


def direct_alpha(n: int, field: Sequence[float], J: float, beta: float) -> List[List[float]]:
    """Influence matrix ``alpha[s][t]`` from :func:`direct_marginals` over all boundary masks."""
    n_boundary = 4 * n
    marginals = [direct_marginals(n, field, J, beta, mask) for mask in range(1 << n_boundary)]
    alpha = [[0.0] * n_boundary for _ in range(n * n)]
    for t in range(n_boundary):
        for mask in range(1 << n_boundary):
            if (mask >> t) & 1:
                continue
            high = mask | (1 << t)
            for s in range(n * n):
                alpha[s][t] = max(alpha[s][t], abs(marginals[high][s] - marginals[mask][s]))
    return alpha


def summed_window_marginals(
    n: int, field: Sequence[float], J: float, beta: float
) -> Tuple[np.ndarray, np.ndarray]:
    """
    ``mu(sigma(s) = +1 | eta)`` and ``mu(sigma(s) = -1 | eta)`` for every boundary mask, each summed separately
    over the interior configurations carrying that spin. Rows follow the boundary mask.
    """
    interior, boundary = window_sites(n)
    sigma = np.array(list(itertools.product((-1.0, 1.0), repeat=len(interior))))
    eta = np.array(
        [[1.0 if (mask >> k) & 1 else -1.0 for k in range(len(boundary))] for mask in range(1 << len(boundary))]
    )
    interior_energy = -sigma @ np.asarray(field, dtype=np.float64)
    for a, site in enumerate(interior):
        for b in range(a + 1, len(interior)):
            if _distance(site, interior[b]) == 1:
                interior_energy -= J * sigma[:, a] * sigma[:, b]
    neighbour = [next(a for a, site in enumerate(interior) if _distance(site, t) == 1) for t in boundary]
    energy = interior_energy[None, :] - J * (eta @ sigma[:, neighbour].T)
    weights = np.exp(-beta * (energy - energy.min(axis=1, keepdims=True)))
    z = weights.sum(axis=1, keepdims=True)
    plus = weights @ (sigma > 0).astype(np.float64) / z
    minus = weights @ (sigma < 0).astype(np.float64) / z
    return plus, minus


def summed_window_gamma(n: int, field: Sequence[float], J: float, beta: float) -> float:
    """``(1/n^2) * sum_{s, t} alpha_st`` from :func:`summed_window_marginals`."""
    plus, _ = summed_window_marginals(n, field, J, beta)
    masks = np.arange(plus.shape[0])
    total = 0.0
    for t in range(4 * n):
        low = masks[((masks >> t) & 1) == 0]
        total += float(np.abs(plus[low | (1 << t)] - plus[low]).max(axis=0).sum())
    return total / (n * n)


def _distance(a: Site, b: Site) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])
