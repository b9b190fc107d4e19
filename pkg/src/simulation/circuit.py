"""
Circuit - Ordered gate lists and their (optionally noisy) execution
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from ..utils.errors import DomainError, UnsupportedModeError
from .gates import Gate, GateKind, u_gate_decomposed
from .noise import NoiseModel
from .quantum_state import QuantumState, StateMode, apply_amplitude_damping, apply_gate

logger = logging.getLogger(__name__)


@dataclass
class Circuit:
    n_qubits: int
    ops: List[Gate] = field(default_factory=list)
    measured_qubits: List[int] = field(default_factory=list)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise DomainError("a circuit needs at least one qubit")
        if not self.measured_qubits:
            self.measured_qubits = list(range(self.n_qubits))
        self.validate()

    def validate(self) -> None:
        for gate in self.ops:
            for q in gate.qubits:
                if q >= self.n_qubits:
                    raise DomainError(f"{gate.label()} touches qubit {q} of a {self.n_qubits}-qubit circuit")
        for q in self.measured_qubits:
            if not 0 <= q < self.n_qubits:
                raise DomainError(f"measured qubit {q} out of range")

    def extended(self, gates: Sequence[Gate]) -> "Circuit":
        """A copy with gates appended, e.g. measurement-basis rotations"""
        return Circuit(self.n_qubits, list(self.ops) + list(gates), list(self.measured_qubits))

    def cnot_count(self) -> int:
        return sum(1 for g in self.ops if g.kind is GateKind.CNOT)

    def decomposed(self) -> "Circuit":
        """Every U(theta) replaced by its SX/Rz sequence"""
        ops: List[Gate] = []
        for gate in self.ops:
            if gate.kind is GateKind.U:
                ops.extend(u_gate_decomposed(gate.angle, gate.qubits[0]))
            else:
                ops.append(gate)
        return Circuit(self.n_qubits, ops, list(self.measured_qubits))


def run_circuit(circuit: Circuit,
                noise: Optional[NoiseModel] = None,
                mode: Optional[StateMode] = None,
                decompose_u: bool = False,
                initial: Optional[QuantumState] = None) -> QuantumState:
    """
    Apply the gates in order starting from |0...0> (or `initial`).

    With a noise model the run uses a density matrix and damps each qubit a gate
    touched right after that gate.
    """
    if decompose_u:
        circuit = circuit.decomposed()
    if mode is None:
        mode = StateMode.DENSITY_MATRIX if noise is not None else StateMode.STATEVECTOR
    if noise is not None and mode is StateMode.STATEVECTOR:
        raise UnsupportedModeError("noisy runs need density-matrix mode")

    if initial is None:
        state = QuantumState.zero(circuit.n_qubits, mode)
    else:
        if initial.n_qubits != circuit.n_qubits:
            raise DomainError("initial state size does not match the circuit")
        state = initial.to_density_matrix() if mode is StateMode.DENSITY_MATRIX else initial

    for gate in circuit.ops:
        state = apply_gate(state, gate)
        if noise is not None:
            for q in gate.qubits:
                p = noise.damping_probability(gate, q)
                if p > 0.0:
                    state = apply_amplitude_damping(state, q, p)
    logger.debug("ran %d gates on %d qubits (%s)", len(circuit.ops), circuit.n_qubits, state.mode.value)
    return state
