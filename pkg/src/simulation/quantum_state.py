"""
Quantum State - Statevector and density-matrix registers

Qubit 0 is the most significant bit of the basis index, so the bitstring
"011" means qubit 0 in |0> and qubits 1, 2 in |1>.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from ..utils.errors import ContractViolation, DomainError, UnsupportedModeError
from .gates import Gate

logger = logging.getLogger(__name__)

MAX_DENSITY_QUBITS = 6
NORM_TOL = 1e-12
PSD_FLOOR = -1e-10

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class StateMode(str, Enum):
    STATEVECTOR = "statevector"
    DENSITY_MATRIX = "density_matrix"


@dataclass(frozen=True)
class QuantumState:
    mode: StateMode
    n_qubits: int
    data: np.ndarray

    @classmethod
    def zero(cls, n_qubits: int, mode: StateMode = StateMode.STATEVECTOR) -> "QuantumState":
        if n_qubits < 1:
            raise DomainError("n_qubits must be >= 1")
        dim = 2 ** n_qubits
        if mode is StateMode.DENSITY_MATRIX:
            if n_qubits > MAX_DENSITY_QUBITS:
                raise UnsupportedModeError(
                    f"density matrices are limited to {MAX_DENSITY_QUBITS} qubits, got {n_qubits}"
                )
            rho = np.zeros((dim, dim), dtype=complex)
            rho[0, 0] = 1.0
            return cls(mode, n_qubits, rho)
        psi = np.zeros(dim, dtype=complex)
        psi[0] = 1.0
        return cls(mode, n_qubits, psi)

    @classmethod
    def from_vector(cls, vector: Sequence[complex]) -> "QuantumState":
        psi = np.asarray(vector, dtype=complex)
        n_qubits = int(round(np.log2(psi.size)))
        if 2 ** n_qubits != psi.size:
            raise DomainError(f"vector length {psi.size} is not a power of two")
        state = cls(StateMode.STATEVECTOR, n_qubits, psi)
        state.check()
        return state

    def to_density_matrix(self) -> "QuantumState":
        if self.mode is StateMode.DENSITY_MATRIX:
            return self
        if self.n_qubits > MAX_DENSITY_QUBITS:
            raise UnsupportedModeError(f"density matrices are limited to {MAX_DENSITY_QUBITS} qubits")
        return QuantumState(StateMode.DENSITY_MATRIX, self.n_qubits, np.outer(self.data, self.data.conj()))

    def check(self) -> None:
        """Raise ContractViolation unless the state is normalized (and PSD for rho)"""
        if self.mode is StateMode.STATEVECTOR:
            norm = float(np.vdot(self.data, self.data).real)
            if abs(norm - 1.0) > NORM_TOL:
                raise ContractViolation(f"statevector norm^2 {norm!r} != 1")
            return
        rho = self.data
        if not np.allclose(rho, rho.conj().T, atol=NORM_TOL, rtol=0):
            raise ContractViolation("density matrix is not Hermitian")
        trace = float(np.trace(rho).real)
        if abs(trace - 1.0) > NORM_TOL:
            raise ContractViolation(f"density matrix trace {trace!r} != 1")
        if np.min(np.linalg.eigvalsh(rho)) < PSD_FLOOR:
            raise ContractViolation("density matrix has a negative eigenvalue")

    def probabilities(self) -> np.ndarray:
        if self.mode is StateMode.STATEVECTOR:
            probs = np.abs(self.data) ** 2
        else:
            probs = np.clip(np.diag(self.data).real, 0.0, None)
        return probs / probs.sum()


def _check_qubits(state: QuantumState, qubits: Sequence[int]) -> None:
    for q in qubits:
        if not 0 <= q < state.n_qubits:
            raise DomainError(f"qubit {q} out of range for a {state.n_qubits}-qubit register")


def _apply_matrix(tensor: np.ndarray, matrix: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    k = len(axes)
    gate = matrix.reshape((2,) * (2 * k))
    moved = np.tensordot(gate, tensor, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(moved, list(range(k)), list(axes))


def _conjugate(rho: np.ndarray, n: int, matrix: np.ndarray, qubits: Sequence[int]) -> np.ndarray:
    """matrix rho matrix^dag on the given qubits"""
    tensor = rho.reshape((2,) * (2 * n))
    tensor = _apply_matrix(tensor, matrix, qubits)
    tensor = _apply_matrix(tensor, matrix.conj(), [n + q for q in qubits])
    return tensor.reshape(2 ** n, 2 ** n)


def apply_gate(state: QuantumState, gate: Gate) -> QuantumState:
    _check_qubits(state, gate.qubits)
    n = state.n_qubits
    matrix = gate.matrix()
    if state.mode is StateMode.STATEVECTOR:
        tensor = _apply_matrix(state.data.reshape((2,) * n), matrix, gate.qubits)
        return QuantumState(state.mode, n, tensor.reshape(-1))
    return QuantumState(state.mode, n, _conjugate(state.data, n, matrix, gate.qubits))


def damping_kraus(p: float):
    return (
        np.array([[1, 0], [0, np.sqrt(1.0 - p)]], dtype=complex),
        np.array([[0, np.sqrt(p)], [0, 0]], dtype=complex),
    )


def apply_amplitude_damping(state: QuantumState, qubit: int, p: float) -> QuantumState:
    """T1 relaxation toward |0> on one qubit"""
    if state.mode is not StateMode.DENSITY_MATRIX:
        raise UnsupportedModeError("amplitude damping needs a density-matrix state")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"damping probability {p} outside [0, 1]")
    _check_qubits(state, [qubit])
    if p == 0.0:
        return state
    n = state.n_qubits
    rho = sum(_conjugate(state.data, n, k, [qubit]) for k in damping_kraus(p))
    return QuantumState(state.mode, n, rho)


def expectation(state: QuantumState, operator: np.ndarray) -> float:
    """Real part of <O> for a Hermitian operator on the full register"""
    dim = 2 ** state.n_qubits
    if operator.shape != (dim, dim):
        raise DomainError(f"operator shape {operator.shape} does not match {dim}x{dim}")
    if state.mode is StateMode.STATEVECTOR:
        return float(np.vdot(state.data, operator @ state.data).real)
    return float(np.trace(operator @ state.data).real)


def pauli_expectation(state: QuantumState, ops: Mapping[int, str]) -> float:
    """<P> for a Pauli string given as {qubit: 'X' | 'Y' | 'Z'}"""
    _check_qubits(state, list(ops))
    n = state.n_qubits
    if state.mode is StateMode.STATEVECTOR:
        tensor = state.data.reshape((2,) * n)
        for q, axis in ops.items():
            tensor = _apply_matrix(tensor, PAULI[axis], [q])
        return float(np.vdot(state.data, tensor.reshape(-1)).real)
    tensor = state.data.reshape((2,) * (2 * n))
    for q, axis in ops.items():
        tensor = _apply_matrix(tensor, PAULI[axis], [q])
    return float(np.trace(tensor.reshape(2 ** n, 2 ** n)).real)


def fidelity(state: QuantumState, target: Sequence[complex]) -> float:
    """|<t|psi>|^2, or <t|rho|t> for mixed states"""
    t = np.asarray(target, dtype=complex)
    if t.size != 2 ** state.n_qubits:
        raise DomainError("target dimension does not match the register")
    t = t / np.linalg.norm(t)
    if state.mode is StateMode.STATEVECTOR:
        return float(abs(np.vdot(t, state.data)) ** 2)
    return float(np.vdot(t, state.data @ t).real)
