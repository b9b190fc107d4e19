"""
Exact Set - Boundary points of the convex set of (<Jz>, <Jz^2>, <J+^2 + J-^2>)

A direction (a, b, c) defines H = a*Jz + b*Jz^2 + c*(J+^2 + J-^2). Its ground
state minimizes that linear functional over every state of N particles, so its
order parameters lie on the boundary of the set. Jz^2 is diagonal in |j,m>,
which keeps every (j, parity) block tridiagonal.

The hull of the points over a dense set of directions approaches the set from
inside. LMG ground states are the b = 0 slice of this boundary.
"""
import logging
import math
from typing import Sequence, Tuple

import numpy as np

from ..utils.errors import DomainError
from .exact_solver import (
    SpinSector,
    _gershgorin_floor,
    _lowest_eigenvalues,
    _lowest_eigenvector,
    _sums,
    iter_sectors,
    pair_couplings,
)

logger = logging.getLogger(__name__)

DEFAULT_DIRECTIONS = 2000


def sphere_directions(count: int) -> np.ndarray:
    """The six axis directions followed by `count` points of a Fibonacci sphere"""
    if count < 1:
        raise DomainError("direction count must be >= 1")
    k = np.arange(count) + 0.5
    height = 1.0 - 2.0 * k / count
    radius = np.sqrt(1.0 - height * height)
    phi = math.pi * (1.0 + math.sqrt(5.0)) * k
    spiral = np.column_stack([radius * np.cos(phi), height, radius * np.sin(phi)])
    return np.vstack([np.eye(3), -np.eye(3), spiral])


def _block(direction: Sequence[float], sector: SpinSector) -> Tuple[np.ndarray, np.ndarray]:
    a, b, c = direction
    two_m = sector.two_m_values()
    m = two_m / 2.0
    return a * m + b * m * m, c * pair_couplings(sector.two_j, two_m[:-1])


def extremal_point(direction: Sequence[float], n_particles: int) -> np.ndarray:
    """(jz, jz2, jpm2) of a ground state of the direction's Hamiltonian"""
    if n_particles < 1:
        raise DomainError("n_particles must be >= 1")
    direction = np.asarray(direction, dtype=float)
    if direction.shape != (3,) or not np.all(np.isfinite(direction)) or not np.any(direction):
        raise DomainError("direction must be a finite non-zero 3-vector")

    best_value, best_sector = math.inf, None
    for sector in iter_sectors(n_particles):
        diag, off = _block(direction, sector)
        if best_sector is not None and _gershgorin_floor(diag, off) >= best_value:
            continue
        value = float(_lowest_eigenvalues(diag, off, 1)[0])
        if value < best_value:
            best_value, best_sector = value, sector

    diag, off = _block(direction, best_sector)
    amplitudes = _lowest_eigenvector(diag, off)
    amplitudes = amplitudes / np.linalg.norm(amplitudes)
    jz, jz2, pair = _sums(best_sector, amplitudes)
    return np.array([jz, jz2, 2.0 * pair])


def exact_set_points(n_particles: int, n_directions: int = DEFAULT_DIRECTIONS) -> np.ndarray:
    """Boundary points of the N-particle set, one per direction"""
    directions = sphere_directions(n_directions)
    points = np.array([extremal_point(d, n_particles) for d in directions])
    logger.info("exact set of N=%d sampled along %d directions", n_particles, len(directions))
    return points
