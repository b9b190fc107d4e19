"""
Exact Solver - Quasi-spin block diagonalization of the LMG Hamiltonian

H = eps*Jz + lambda/2 (J+^2 + J-^2) only couples |j,m> to |j,m+-2>, so every
(j, parity-of-(j+m)) block is a symmetric tridiagonal matrix in the
parity-ordered m basis. All sectors are scanned; blocks whose Gershgorin
lower bound cannot beat the running minimum are skipped.
"""
import logging
import math
from functools import lru_cache
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, Sequence, Tuple

import numpy as np
from scipy.linalg import eigh_tridiagonal, eigvalsh_tridiagonal

from ..models.lmg_models import LmgParams, RdmPoint, Source
from ..utils.errors import ContractViolation, DomainError, SweepPointError

logger = logging.getLogger(__name__)

DEFAULT_DEGENERACY_TOL = 1e-9
NORM_TOL = 1e-12


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True)
class SpinSector:
    """A (j, parity) block; j is stored doubled so half-integers stay exact"""

    two_j: int
    parity: Parity

    @property
    def j(self) -> float:
        return self.two_j / 2.0

    def two_m_values(self) -> np.ndarray:
        two_m = np.arange(-self.two_j, self.two_j + 1, 2, dtype=np.int64)
        j_plus_m = (self.two_j + two_m) // 2
        wanted = 0 if self.parity is Parity.EVEN else 1
        return two_m[j_plus_m % 2 == wanted]

    def m_values(self) -> np.ndarray:
        return self.two_m_values() / 2.0

    @property
    def dimension(self) -> int:
        return int(self.two_m_values().size)

    def validate(self, n_particles: int) -> None:
        if self.two_j < 0 or self.two_j > n_particles or (n_particles - self.two_j) % 2:
            raise DomainError(f"j={self.j} is not a quasi-spin of {n_particles} particles")
        if self.dimension == 0:
            raise DomainError(f"sector j={self.j} has no {self.parity.value} states")


@dataclass
class GroundStateResult:
    energy: float
    sector: SpinSector
    amplitudes: np.ndarray
    degenerate: bool
    params: LmgParams
    gap: float = math.inf

    @property
    def m_values(self) -> np.ndarray:
        return self.sector.m_values()


def iter_sectors(n_particles: int) -> Iterator[SpinSector]:
    """All non-empty sectors, j descending, even parity before odd"""
    for two_j in range(n_particles, -1, -2):
        for parity in (Parity.EVEN, Parity.ODD):
            sector = SpinSector(two_j, parity)
            if sector.dimension:
                yield sector


def pair_couplings(two_j: int, two_m: np.ndarray) -> np.ndarray:
    """<j,m+2|J+^2|j,m> for each 2m in two_m.

    The integer product is symmetric under m -> -m-2, so mirrored pairs get
    bit-identical couplings.
    """
    two_m = np.asarray(two_m, dtype=np.int64)
    product = (two_j - two_m) * (two_j - two_m - 2) * (two_j + two_m + 2) * (two_j + two_m + 4)
    return np.sqrt(np.maximum(product, 0).astype(np.float64) / 16.0)


def _tridiagonal(params: LmgParams, sector: SpinSector) -> Tuple[np.ndarray, np.ndarray]:
    m, couplings = _sector_arrays(sector)
    return params.epsilon * m, 0.5 * params.lam * couplings


@lru_cache(maxsize=4096)
def _sector_arrays(sector: SpinSector) -> Tuple[np.ndarray, np.ndarray]:
    """Read-only (m values, J+^2 couplings) of a sector, shared across sweep points"""
    two_m = sector.two_m_values()
    m = two_m / 2.0
    couplings = pair_couplings(sector.two_j, two_m[:-1])
    m.flags.writeable = False
    couplings.flags.writeable = False
    return m, couplings


def sector_floor(params: LmgParams, two_j: int) -> float:
    """Lower bound on every eigenvalue of the sectors with quasi-spin j, non-increasing in j.

    |diag| <= |eps| j and each J+^2 coupling is at most j(j+1) + 1/4, so this
    never exceeds the Gershgorin floor of either parity block.
    """
    j = two_j / 2.0
    return -abs(params.epsilon) * j - abs(params.lam) * (j * (j + 1.0) + 0.25)


def build_block_hamiltonian(params: LmgParams, sector: SpinSector) -> np.ndarray:
    """Dense symmetric block of H in the ascending-m basis of the sector"""
    sector.validate(params.n_particles)
    diag, off = _tridiagonal(params, sector)
    return np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)


def _gershgorin_floor(diag: np.ndarray, off: np.ndarray) -> float:
    radius = np.zeros_like(diag)
    radius[:-1] += np.abs(off)
    radius[1:] += np.abs(off)
    return float(np.min(diag - radius))


def _lowest_eigenvalues(diag: np.ndarray, off: np.ndarray, count: int) -> np.ndarray:
    if diag.size == 1:
        return diag.copy()
    hi = min(count, diag.size) - 1
    return eigvalsh_tridiagonal(diag, off, select="i", select_range=(0, hi))


def _lowest_eigenvector(diag: np.ndarray, off: np.ndarray) -> np.ndarray:
    if diag.size == 1:
        return np.ones(1)
    _, vectors = eigh_tridiagonal(diag, off, select="i", select_range=(0, 0))
    return vectors[:, 0]


def _fix_phase(amplitudes: np.ndarray, normalize: bool = True) -> np.ndarray:
    """Unit norm, first nonzero amplitude positive"""
    if normalize:
        amplitudes = amplitudes / np.linalg.norm(amplitudes)
    scale = np.max(np.abs(amplitudes))
    nonzero = np.flatnonzero(np.abs(amplitudes) > 1e-12 * scale)
    if nonzero.size and amplitudes[nonzero[0]] < 0:
        amplitudes = -amplitudes
    return amplitudes


def _sums(sector: SpinSector, amplitudes: np.ndarray) -> Tuple[float, float, float]:
    """Exactly rounded (sum m a^2, sum m^2 a^2, sum c a_m a_m+2)"""
    m, couplings = _sector_arrays(sector)
    weights = amplitudes * amplitudes
    jz = math.fsum((m * weights).tolist())
    jz2 = math.fsum((m * m * weights).tolist())
    pair = math.fsum((couplings * (amplitudes[:-1] * amplitudes[1:])).tolist())
    return jz, jz2, pair


def _scan(params: LmgParams, degeneracy_tol: float) -> Tuple[SpinSector, float, float]:
    """Lowest block and its eigenvalue plus the smallest competing eigenvalue"""
    best_sector = None
    best = math.inf
    runner_up = math.inf
    skipped = 0
    for sector in iter_sectors(params.n_particles):
        if best_sector is not None and sector_floor(params, sector.two_j) > best + degeneracy_tol:
            # lower j only raises the bound
            break
        diag, off = _tridiagonal(params, sector)
        if best_sector is not None and _gershgorin_floor(diag, off) > best + degeneracy_tol:
            skipped += 1
            continue
        values = _lowest_eigenvalues(diag, off, 2)
        if values[0] < best - degeneracy_tol:
            runner_up = min(runner_up, best)
            best, best_sector = float(values[0]), sector
        else:
            runner_up = min(runner_up, float(values[0]))
            if values[0] < best:
                # within tolerance: keep the earlier block, remember the true minimum gap
                runner_up = min(runner_up, best)
                best = float(values[0])
        if values.size > 1 and sector == best_sector:
            runner_up = min(runner_up, float(values[1]))
    logger.debug("N=%d: %d sectors pruned by Gershgorin bound before the scan stopped at j=%s",
                 params.n_particles, skipped, sector.j)
    return best_sector, best, runner_up


def ground_state(params: LmgParams, degeneracy_tol: float = DEFAULT_DEGENERACY_TOL) -> GroundStateResult:
    """Global minimum eigenpair over every (j, parity) block.

    The diagonalization runs at (|eps|, |lambda|); the eigenvector is then mapped
    by m -> -m for eps < 0 and by alternating signs for lambda < 0, both exact
    operations, so the sign symmetries of the order parameters hold bitwise.
    """
    canonical = LmgParams(epsilon=abs(params.epsilon), lam=abs(params.lam), n_particles=params.n_particles)
    sector, lowest, runner_up = _scan(canonical, degeneracy_tol)
    diag, off = _tridiagonal(canonical, sector)
    amplitudes = _fix_phase(_lowest_eigenvector(diag, off))

    if params.lam < 0:
        amplitudes = amplitudes * np.where(np.arange(amplitudes.size) % 2 == 0, 1.0, -1.0)
    if params.epsilon < 0:
        amplitudes = amplitudes[::-1].copy()
        flipped = sector.parity if params.n_particles % 2 == 0 else (
            Parity.ODD if sector.parity is Parity.EVEN else Parity.EVEN
        )
        sector = SpinSector(sector.two_j, flipped)
    # sign flips only; renormalizing here would break the bitwise symmetry
    amplitudes = _fix_phase(amplitudes, normalize=False)

    jz, _, pair = _sums(sector, amplitudes)
    energy = params.epsilon * jz + params.lam * pair
    gap = runner_up - lowest
    return GroundStateResult(
        energy=energy,
        sector=sector,
        amplitudes=amplitudes,
        degenerate=bool(gap <= degeneracy_tol),
        params=params,
        gap=gap,
    )


def low_lying_states(params: LmgParams, count: int) -> List[GroundStateResult]:
    """The `count` lowest eigenpairs of the j = N/2 sector, both parities merged"""
    if count < 1:
        raise DomainError("count must be >= 1")
    candidates = []
    for parity in (Parity.EVEN, Parity.ODD):
        sector = SpinSector(params.n_particles, parity)
        if not sector.dimension:
            continue
        diag, off = _tridiagonal(params, sector)
        if diag.size == 1:
            candidates.append((float(diag[0]), sector, np.ones(1)))
            continue
        hi = min(count, diag.size) - 1
        values, vectors = eigh_tridiagonal(diag, off, select="i", select_range=(0, hi))
        candidates.extend((float(v), sector, vectors[:, k]) for k, v in enumerate(values))
    candidates.sort(key=lambda item: item[0])
    states = []
    for value, sector, vector in candidates[:count]:
        amplitudes = _fix_phase(vector)
        jz, _, pair = _sums(sector, amplitudes)
        states.append(GroundStateResult(
            energy=params.epsilon * jz + params.lam * pair,
            sector=sector, amplitudes=amplitudes, degenerate=False, params=params,
        ))
    return states


def order_parameters(gs: GroundStateResult) -> RdmPoint:
    """(<Jz>, <Jz^2>, <J+^2 + J-^2>) of a block eigenvector with real amplitudes"""
    norm = math.fsum((gs.amplitudes * gs.amplitudes).tolist())
    if abs(norm - 1.0) > NORM_TOL:
        raise ContractViolation(f"amplitudes not normalized (norm^2 = {norm!r})")
    if gs.amplitudes.size != gs.sector.dimension:
        raise ContractViolation("amplitude count does not match sector dimension")
    jz, jz2, pair = _sums(gs.sector, gs.amplitudes)
    return RdmPoint(
        jz=jz, jz2=jz2, jpm2=2.0 * pair,
        params=gs.params, source=Source.EXACT,
        energy=gs.energy, degenerate=gs.degenerate,
    )


def exact_point(params: LmgParams, degeneracy_tol: float = DEFAULT_DEGENERACY_TOL) -> RdmPoint:
    return order_parameters(ground_state(params, degeneracy_tol))


def sweep_ground_states(grid: Sequence[LmgParams],
                        degeneracy_tol: float = DEFAULT_DEGENERACY_TOL) -> List[RdmPoint]:
    """One exact RdmPoint per grid entry, in grid order"""
    if not grid:
        raise DomainError("sweep grid is empty")
    points = []
    for index, params in enumerate(grid):
        try:
            points.append(exact_point(params, degeneracy_tol))
        except Exception as exc:
            raise SweepPointError(index, exc) from exc
    return points
