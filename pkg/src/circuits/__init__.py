"""
Circuits - Ground-state preparation circuits for 3 and 4 qubits
"""
from .angle_solver import PreparedState, prepare_ground_state, solve_angles
from .ansatz import AnsatzTarget, Reference, ansatz_support, exact_coefficients
from .builder import CircuitTemplate, build_circuit, load_template
