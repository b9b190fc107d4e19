"""
Ansatz - Exact ground-state targets in the symmetric qubit basis
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List

import numpy as np

from ..lmg.exact_solver import DEFAULT_DEGENERACY_TOL, ground_state
from ..models.lmg_models import LmgParams
from ..utils.errors import ContractViolation, DomainError

SUPPORTED_SIZES = (3, 4)
NORM_TOL = 1e-12


class Reference(str, Enum):
    """Start of the preparation: every qubit flipped to |1> (down) or left in |0> (up)"""

    DOWN = "down"
    UP = "up"


def bitstrings_with_weight(n_qubits: int, ones: int) -> List[str]:
    return [
        format(i, f"0{n_qubits}b")
        for i in range(2 ** n_qubits)
        if bin(i).count("1") == ones
    ]


def ansatz_support(n_qubits: int, reference: Reference) -> List[str]:
    """
    Bitstrings the preparation circuit can populate: odd weight for three
    qubits from the all-down reference, even weight otherwise
    """
    if n_qubits not in SUPPORTED_SIZES:
        raise DomainError(f"no ansatz for {n_qubits} qubits")
    odd = n_qubits == 3 and reference == Reference.DOWN
    return [
        format(i, f"0{n_qubits}b")
        for i in range(2 ** n_qubits)
        if bin(i).count("1") % 2 == (1 if odd else 0)
    ]


@dataclass
class AnsatzTarget:
    n_qubits: int
    coefficients: Dict[str, float]
    params: LmgParams
    reference: Reference = Reference.DOWN

    def __post_init__(self):
        support = set(ansatz_support(self.n_qubits, self.reference))
        stray = [b for b, c in self.coefficients.items() if b not in support and c != 0.0]
        if stray:
            raise ContractViolation(f"target has weight outside the ansatz support: {stray}")
        norm = math.fsum(c * c for c in self.coefficients.values())
        if abs(norm - 1.0) > NORM_TOL:
            raise ContractViolation(f"target not normalized (norm^2 = {norm!r})")

    def vector(self) -> np.ndarray:
        psi = np.zeros(2 ** self.n_qubits)
        for bits, amplitude in self.coefficients.items():
            psi[int(bits, 2)] = amplitude
        return psi


def dicke_amplitudes(n_qubits: int, m_values: np.ndarray, amplitudes: np.ndarray) -> np.ndarray:
    """
    Spread |j=N/2, m> uniformly over the C(N, N/2 - m) bitstrings with that
    many spin-down (|1>) qubits
    """
    psi = np.zeros(2 ** n_qubits)
    for m, a in zip(m_values, amplitudes):
        ones = int(round(n_qubits / 2.0 - m))
        strings = bitstrings_with_weight(n_qubits, ones)
        share = a / math.sqrt(len(strings))
        for bits in strings:
            psi[int(bits, 2)] = share
    return psi


def exact_coefficients(params: LmgParams, degeneracy_tol: float = DEFAULT_DEGENERACY_TOL) -> AnsatzTarget:
    n = params.n_particles
    if n not in SUPPORTED_SIZES:
        raise DomainError(f"state preparation is available for N in {SUPPORTED_SIZES}, got {n}")
    gs = ground_state(params, degeneracy_tol)
    if gs.sector.two_j != n:
        raise ContractViolation(f"ground state lies in j={gs.sector.j}, outside the symmetric subspace")

    psi = dicke_amplitudes(n, gs.m_values, gs.amplitudes)
    # renormalize away the rounding of the sqrt(C(N,k)) shares
    psi = psi / np.linalg.norm(psi)
    odd_weight = any(bin(i).count("1") % 2 for i in np.flatnonzero(psi))
    reference = Reference.DOWN if (n == 4 or odd_weight) else Reference.UP
    coefficients = {bits: float(psi[int(bits, 2)]) for bits in ansatz_support(n, reference)}
    return AnsatzTarget(n_qubits=n, coefficients=coefficients, params=params, reference=reference)
