import math
import os
import sys
import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from src.models.lmg_models import LmgParams, NoiseSection
from src.simulation.circuit import Circuit, run_circuit
from src.simulation.gates import (
    Gate,
    GateKind,
    cnot,
    composite_unitary,
    rotation_matrix,
    u,
    u_gate_decomposed,
    x,
)
from src.simulation.noise import NoiseModel
from src.simulation.operators import collective_operators, lmg_hamiltonian, pauli_string_matrix
from src.simulation.quantum_state import (
    QuantumState,
    StateMode,
    apply_amplitude_damping,
    apply_gate,
    expectation,
    fidelity,
    pauli_expectation,
)
from src.simulation.sampling import sample_counts
from src.utils.errors import ContractViolation, DomainError, UnsupportedModeError

angles = st.floats(min_value=-4 * math.pi, max_value=4 * math.pi, allow_nan=False)


class TestGates(unittest.TestCase):
    @settings(max_examples=50, deadline=None)
    @given(theta=angles)
    def test_u_decomposition_matches_rotation_up_to_phase(self, theta):
        composite = composite_unitary(u_gate_decomposed(theta))
        expected = 1j * np.exp(0.5j * theta) * rotation_matrix(theta)
        np.testing.assert_allclose(composite, expected, atol=1e-12)

    def test_gate_validation(self):
        with self.assertRaises(DomainError):
            Gate(GateKind.CNOT, (0,))
        with self.assertRaises(DomainError):
            cnot(1, 1)
        with self.assertRaises(DomainError):
            Gate(GateKind.U, (0,))
        with self.assertRaises(DomainError):
            u(float("nan"), 0)

    def test_cnot_on_composite_rejected(self):
        with self.assertRaises(DomainError):
            composite_unitary([cnot(0, 1)])


class TestStatevector(unittest.TestCase):
    def test_qubit_zero_is_leftmost(self):
        state = run_circuit(Circuit(3, [x(0)]))
        self.assertEqual(int(np.argmax(state.probabilities())), 0b100)
        counts = sample_counts(state, 10, seed=1)
        self.assertEqual(counts, {"100": 10})

    def test_cnot_truth_table(self):
        state = run_circuit(Circuit(2, [x(0), cnot(0, 1)]))
        self.assertAlmostEqual(state.probabilities()[0b11], 1.0, delta=1e-12)
        state = run_circuit(Circuit(2, [cnot(0, 1)]))
        self.assertAlmostEqual(state.probabilities()[0b00], 1.0, delta=1e-12)

    def test_rotation_amplitudes(self):
        theta = 0.8
        state = run_circuit(Circuit(1, [u(theta, 0)]))
        np.testing.assert_allclose(state.data, [math.cos(theta / 2), math.sin(theta / 2)], atol=1e-14)

    def test_from_vector_checks_norm(self):
        with self.assertRaises(ContractViolation):
            QuantumState.from_vector([1.0, 1.0])
        with self.assertRaises(DomainError):
            QuantumState.from_vector([1.0, 0.0, 0.0])

    def test_qubit_out_of_range(self):
        with self.assertRaises(DomainError):
            apply_gate(QuantumState.zero(2), x(2))

    def test_decomposed_run_same_state_up_to_phase(self):
        circuit = Circuit(2, [u(0.3, 0), u(-1.1, 1), cnot(0, 1), u(2.0, 1)])
        plain = run_circuit(circuit)
        decomposed = run_circuit(circuit, decompose_u=True)
        self.assertAlmostEqual(fidelity(decomposed, plain.data), 1.0, delta=1e-12)


class TestDensityMatrix(unittest.TestCase):
    def test_modes_agree_without_noise(self):
        circuit = Circuit(3, [u(0.4, 0), u(1.3, 1), cnot(0, 1), u(-0.7, 2), cnot(1, 2),
                              Gate(GateKind.SDG, (0,)), Gate(GateKind.H, (2,))])
        sv = run_circuit(circuit)
        dm = run_circuit(circuit, mode=StateMode.DENSITY_MATRIX)
        for ops in ({0: "Z"}, {0: "X", 2: "X"}, {1: "Y", 2: "Z"}, {0: "Y", 1: "Y"}):
            self.assertAlmostEqual(pauli_expectation(sv, ops), pauli_expectation(dm, ops), delta=1e-12)
        dm.check()

    def test_density_matrix_size_limit(self):
        with self.assertRaises(UnsupportedModeError):
            QuantumState.zero(7, StateMode.DENSITY_MATRIX)

    def test_damping_needs_density_matrix(self):
        with self.assertRaises(UnsupportedModeError):
            apply_amplitude_damping(QuantumState.zero(1), 0, 0.1)
        with self.assertRaises(UnsupportedModeError):
            run_circuit(Circuit(1, [x(0)]), noise=NoiseModel.uniform(0.1, 1), mode=StateMode.STATEVECTOR)

    def test_damping_relaxes_toward_zero(self):
        rho = run_circuit(Circuit(1, [x(0)]), mode=StateMode.DENSITY_MATRIX)
        damped = apply_amplitude_damping(rho, 0, 0.25)
        self.assertAlmostEqual(damped.probabilities()[0], 0.25, delta=1e-14)
        self.assertAlmostEqual(float(np.trace(damped.data).real), 1.0, delta=1e-14)
        with self.assertRaises(DomainError):
            apply_amplitude_damping(rho, 0, 1.5)

    def test_noisy_run_shifts_sigma_z_up(self):
        noisy = run_circuit(Circuit(1, [x(0)]), noise=NoiseModel.uniform(0.1, 1))
        self.assertAlmostEqual(pauli_expectation(noisy, {0: "Z"}), -0.8, delta=1e-12)


class TestNoiseModel(unittest.TestCase):
    def test_from_section_broadcasts_t1(self):
        section = NoiseSection(t1=[50.0], gate_durations={"CNOT": 0.5, "U": 0.1})
        model = NoiseModel.from_section(section, 3)
        self.assertEqual(model.t1_per_qubit, [50.0, 50.0, 50.0])
        p = model.damping_probability(cnot(0, 1), 1)
        self.assertAlmostEqual(p, 1.0 - math.exp(-0.5 / 50.0), delta=1e-15)
        self.assertEqual(model.damping_probability(x(0), 0), 0.0)

    def test_per_gate_override(self):
        model = NoiseModel.from_section(NoiseSection(per_gate_p=0.02), 4)
        self.assertEqual(model.damping_probability(u(0.1, 3), 3), 0.02)

    def test_t1_length_mismatch(self):
        with self.assertRaises(DomainError):
            NoiseModel.from_section(NoiseSection(t1=[1.0, 2.0]), 3)


class TestOperators(unittest.TestCase):
    def test_jz_spectrum(self):
        jz = collective_operators(3)["jz"]
        np.testing.assert_allclose(np.sort(np.diag(jz).real), [-1.5, -0.5, -0.5, -0.5, 0.5, 0.5, 0.5, 1.5])

    def test_hamiltonian_hermitian(self):
        h = lmg_hamiltonian(LmgParams(epsilon=0.3, lam=-1.7, n_particles=4))
        np.testing.assert_allclose(h, h.conj().T, atol=1e-14)

    def test_expectation_matches_pauli_expectation(self):
        state = run_circuit(Circuit(2, [u(0.9, 0), cnot(0, 1)]))
        op = pauli_string_matrix(2, {0: "X", 1: "X"})
        self.assertAlmostEqual(expectation(state, op), pauli_expectation(state, {0: "X", 1: "X"}), delta=1e-14)


class TestSampling(unittest.TestCase):
    def test_deterministic_per_seed(self):
        state = run_circuit(Circuit(2, [u(1.0, 0), u(2.0, 1)]))
        first = sample_counts(state, 1000, seed=42)
        second = sample_counts(state, 1000, seed=np.random.SeedSequence(42))
        self.assertEqual(first, second)
        self.assertEqual(sum(first.values()), 1000)
        self.assertEqual(list(first), sorted(first))

    def test_shots_must_be_positive(self):
        with self.assertRaises(DomainError):
            sample_counts(QuantumState.zero(1), 0, seed=0)


if __name__ == "__main__":
    unittest.main()
