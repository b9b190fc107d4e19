"""
Operators - Full-register matrices of Pauli strings and LMG collective operators

|0> is spin up, so Jz = 1/2 sum Z_p and J+^2 + J-^2 = sum_{p<q} (X_p X_q - Y_p Y_q).
"""
from functools import reduce
from itertools import combinations
from typing import Dict, Mapping

import numpy as np

from ..models.lmg_models import LmgParams
from .quantum_state import PAULI


def pauli_string_matrix(n_qubits: int, ops: Mapping[int, str]) -> np.ndarray:
    factors = [PAULI[ops.get(q, "I")] for q in range(n_qubits)]
    return reduce(np.kron, factors)


def collective_operators(n_qubits: int) -> Dict[str, np.ndarray]:
    """Jz, Jz^2 and J+^2 + J-^2 as 2^n x 2^n matrices"""
    jz = 0.5 * sum(pauli_string_matrix(n_qubits, {p: "Z"}) for p in range(n_qubits))
    jpm2 = np.zeros((2 ** n_qubits,) * 2, dtype=complex)
    for p, q in combinations(range(n_qubits), 2):
        jpm2 = jpm2 + pauli_string_matrix(n_qubits, {p: "X", q: "X"}) - pauli_string_matrix(n_qubits, {p: "Y", q: "Y"})
    return {"jz": jz, "jz2": jz @ jz, "jpm2": jpm2}


def lmg_hamiltonian(params: LmgParams) -> np.ndarray:
    ops = collective_operators(params.n_particles)
    return params.epsilon * ops["jz"] + 0.5 * params.lam * ops["jpm2"]
