"""
Pauli - Pauli strings, measurement groups and basis rotations
"""
import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Mapping, Tuple

from ..simulation.gates import Gate, GateKind
from ..utils.errors import DomainError, MissingExpectationError

AXES = ("X", "Y", "Z")
_LABEL = re.compile(r"([XYZ])(\d+)")


@dataclass(frozen=True, order=True)
class PauliString:
    """Non-identity factors as sorted (qubit, axis) pairs"""

    ops: Tuple[Tuple[int, str], ...]

    def __post_init__(self):
        if not self.ops:
            raise DomainError("a Pauli string needs at least one non-identity factor")
        qubits = [q for q, _ in self.ops]
        if len(set(qubits)) != len(qubits) or any(q < 0 for q in qubits):
            raise DomainError(f"invalid qubit indices {qubits}")
        if any(axis not in AXES for _, axis in self.ops):
            raise DomainError(f"axes must be X, Y or Z: {self.ops}")

    @classmethod
    def of(cls, ops: Mapping[int, str]) -> "PauliString":
        return cls(tuple(sorted((int(q), axis.upper()) for q, axis in ops.items())))

    @classmethod
    def parse(cls, label: str) -> "PauliString":
        """Inverse of label(), e.g. 'X0X2'"""
        factors = _LABEL.findall(label)
        if "".join(a + q for a, q in factors) != label:
            raise DomainError(f"bad Pauli label '{label}'")
        return cls.of({int(q): a for a, q in factors})

    @property
    def qubits(self) -> List[int]:
        return [q for q, _ in self.ops]

    def as_dict(self) -> Dict[int, str]:
        return dict(self.ops)

    def label(self) -> str:
        return "".join(f"{axis}{q}" for q, axis in self.ops)

    def __str__(self) -> str:
        return self.label()


def z_string(p: int) -> PauliString:
    return PauliString.of({p: "Z"})


def pair_string(axis: str, p: int, q: int) -> PauliString:
    return PauliString.of({p: axis, q: axis})


def required_strings(n_qubits: int) -> List[PauliString]:
    """Z singles plus ZZ, XX and YY on every pair"""
    strings = [z_string(p) for p in range(n_qubits)]
    for axis in ("Z", "X", "Y"):
        strings.extend(pair_string(axis, p, q) for p, q in combinations(range(n_qubits), 2))
    return strings


def basis_rotation_gates(axis: str, qubit: int = 0) -> List[Gate]:
    """Gates that map the axis eigenbasis onto the computational basis"""
    axis = axis.upper()
    if axis == "Z":
        return []
    if axis == "X":
        return [Gate(GateKind.H, (qubit,))]
    if axis == "Y":
        return [Gate(GateKind.SDG, (qubit,)), Gate(GateKind.H, (qubit,))]
    raise DomainError(f"unknown measurement axis '{axis}'")


@dataclass(frozen=True)
class MeasurementGroup:
    """One global basis setting, e.g. 'XXX', and the strings it reads"""

    setting: str
    strings: Tuple[PauliString, ...]

    def reads(self, string: PauliString) -> bool:
        return all(q < len(self.setting) and self.setting[q] == axis for q, axis in string.ops)

    def rotation_gates(self) -> List[Gate]:
        gates: List[Gate] = []
        for q, axis in enumerate(self.setting):
            gates.extend(basis_rotation_gates(axis, q))
        return gates


@dataclass
class TomographyPlan:
    n_qubits: int
    groups: List[MeasurementGroup]
    shots_per_group: int
    required: List[PauliString] = field(default_factory=list)

    def __post_init__(self):
        if self.shots_per_group < 1:
            raise DomainError("shots_per_group must be >= 1")
        for group in self.groups:
            if len(group.setting) != self.n_qubits:
                raise DomainError(f"setting '{group.setting}' does not cover {self.n_qubits} qubits")
            for string in group.strings:
                if not group.reads(string):
                    raise DomainError(f"{string} is not diagonal in setting '{group.setting}'")
        uncovered = [s for s in self.required if not any(s in g.strings for g in self.groups)]
        if uncovered:
            raise MissingExpectationError(f"plan leaves {[str(s) for s in uncovered]} unmeasured")

    def group_for(self, string: PauliString) -> MeasurementGroup:
        for group in self.groups:
            if string in group.strings:
                return group
        raise MissingExpectationError(f"{string} is not covered by the tomography plan")

    def group_by_setting(self, setting: str) -> MeasurementGroup:
        for group in self.groups:
            if group.setting == setting:
                return group
        raise MissingExpectationError(f"no measurement group with setting '{setting}'")


def default_plan(n_qubits: int, shots_per_group: int) -> TomographyPlan:
    """All-Z, all-X and all-Y settings; together they read every required string"""
    required = required_strings(n_qubits)
    groups = []
    for axis in ("Z", "X", "Y"):
        setting = axis * n_qubits
        strings = tuple(s for s in required if all(a == axis for _, a in s.ops))
        groups.append(MeasurementGroup(setting, strings))
    return TomographyPlan(n_qubits=n_qubits, groups=groups, shots_per_group=shots_per_group, required=required)
