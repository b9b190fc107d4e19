"""
Simulation - Small-register qubit simulator with amplitude-damping noise
"""
from .circuit import Circuit, run_circuit
from .gates import Gate, GateKind, cnot, composite_unitary, rotation_matrix, u, u_gate_decomposed, x
from .noise import NoiseModel
from .operators import collective_operators, lmg_hamiltonian, pauli_string_matrix
from .quantum_state import (
    QuantumState,
    StateMode,
    apply_amplitude_damping,
    apply_gate,
    expectation,
    fidelity,
    pauli_expectation,
)
from .sampling import sample_counts
