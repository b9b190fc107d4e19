"""
Gates - Gate set of the ground-state preparation circuits and measurement rotations
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from ..utils.errors import DomainError


class GateKind(str, Enum):
    X = "X"
    SX = "SX"
    RZ = "RZ"
    U = "U"
    H = "H"
    SDG = "SDG"
    CNOT = "CNOT"


PARAMETRIC = {GateKind.RZ, GateKind.U}

_SQRT_HALF = 1.0 / math.sqrt(2.0)

_FIXED = {
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.SX: 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex),
    GateKind.H: _SQRT_HALF * np.array([[1, 1], [1, -1]], dtype=complex),
    GateKind.SDG: np.array([[1, 0], [0, -1j]], dtype=complex),
    # basis |control target>
    GateKind.CNOT: np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
}


def rotation_matrix(theta: float) -> np.ndarray:
    """Real two-dimensional rotation R(theta) realized by the U gate"""
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz_matrix(alpha: float) -> np.ndarray:
    return np.array([[1, 0], [0, complex(math.cos(alpha), math.sin(alpha))]], dtype=complex)


@dataclass(frozen=True)
class Gate:
    """One gate on explicit qubits; CNOT qubits are (control, target)"""

    kind: GateKind
    qubits: Tuple[int, ...]
    angle: Optional[float] = None

    def __post_init__(self):
        arity = 2 if self.kind is GateKind.CNOT else 1
        if len(self.qubits) != arity:
            raise DomainError(f"{self.kind.value} acts on {arity} qubit(s), got {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise DomainError(f"negative qubit index in {self.qubits}")
        if self.kind is GateKind.CNOT and self.qubits[0] == self.qubits[1]:
            raise DomainError("CNOT control and target must differ")
        if self.kind in PARAMETRIC:
            if self.angle is None or not math.isfinite(self.angle):
                raise DomainError(f"{self.kind.value} needs a finite angle")

    def matrix(self) -> np.ndarray:
        if self.kind is GateKind.U:
            return rotation_matrix(self.angle)
        if self.kind is GateKind.RZ:
            return rz_matrix(self.angle)
        return _FIXED[self.kind]

    def label(self) -> str:
        targets = ",".join(str(q) for q in self.qubits)
        if self.angle is None:
            return f"{self.kind.value}({targets})"
        return f"{self.kind.value}[{self.angle:.6f}]({targets})"


def x(qubit: int) -> Gate:
    return Gate(GateKind.X, (qubit,))


def u(theta: float, qubit: int) -> Gate:
    return Gate(GateKind.U, (qubit,), theta)


def cnot(control: int, target: int) -> Gate:
    return Gate(GateKind.CNOT, (control, target))


def u_gate_decomposed(theta: float, qubit: int = 0) -> List[Gate]:
    """
    U(theta) as SX, Rz(theta + pi), SX, Rz(pi) in time order.

    The composite equals i*exp(i theta/2) R(theta), so it induces the same
    conjugation map M -> U^dag M U as the real rotation.
    """
    if not math.isfinite(theta):
        raise DomainError("theta must be finite")
    return [
        Gate(GateKind.SX, (qubit,)),
        Gate(GateKind.RZ, (qubit,), theta + math.pi),
        Gate(GateKind.SX, (qubit,)),
        Gate(GateKind.RZ, (qubit,), math.pi),
    ]


def composite_unitary(gates: List[Gate]) -> np.ndarray:
    """Product of single-qubit gates in time order (later gates on the left)"""
    total = np.eye(2, dtype=complex)
    for gate in gates:
        if gate.kind is GateKind.CNOT:
            raise DomainError("composite_unitary only handles single-qubit gates")
        total = gate.matrix() @ total
    return total
