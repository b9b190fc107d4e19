"""
Builder - Preparation circuits instantiated from JSON templates
"""
import json
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, List, Sequence

from ..simulation.circuit import Circuit
from ..simulation.gates import Gate, GateKind
from ..utils.errors import DomainError
from .ansatz import Reference

TEMPLATE_DIR = os.path.join(os.path.dirname(__file__), "templates")


@dataclass(frozen=True)
class CircuitTemplate:
    """
    Template schema: {n_qubits, max_cnots, coupling_map, ops: [{kind, qubits,
    angle_slot?, role?}]}. Ops with role "reference" form the initial X layer.
    """

    name: str
    n_qubits: int
    max_cnots: int
    coupling_map: tuple
    ops: tuple

    @property
    def n_angles(self) -> int:
        return sum(1 for op in self.ops if "angle_slot" in op)

    def cnot_count(self) -> int:
        return sum(1 for op in self.ops if op["kind"] == GateKind.CNOT.value)

    def validate(self) -> None:
        allowed = {frozenset(edge) for edge in self.coupling_map}
        for op in self.ops:
            if op["kind"] == GateKind.CNOT.value and frozenset(op["qubits"]) not in allowed:
                raise DomainError(f"{self.name}: CNOT {op['qubits']} violates the coupling map")
            if any(not 0 <= q < self.n_qubits for q in op["qubits"]):
                raise DomainError(f"{self.name}: qubit index out of range in {op}")
        if self.cnot_count() > self.max_cnots:
            raise DomainError(f"{self.name}: {self.cnot_count()} CNOTs exceed the budget of {self.max_cnots}")
        slots = sorted(op["angle_slot"] for op in self.ops if "angle_slot" in op)
        if slots != list(range(len(slots))):
            raise DomainError(f"{self.name}: angle slots must be 0..{len(slots) - 1}")


def parse_template(data: Dict[str, Any]) -> CircuitTemplate:
    template = CircuitTemplate(
        name=data.get("name", f"template{data['n_qubits']}"),
        n_qubits=int(data["n_qubits"]),
        max_cnots=int(data["max_cnots"]),
        coupling_map=tuple(tuple(edge) for edge in data["coupling_map"]),
        ops=tuple(data["ops"]),
    )
    template.validate()
    return template


@lru_cache(maxsize=None)
def load_template(n_qubits: int) -> CircuitTemplate:
    path = os.path.join(TEMPLATE_DIR, f"lmg{n_qubits}.json")
    if not os.path.exists(path):
        raise DomainError(f"no preparation template for {n_qubits} qubits")
    with open(path, "r") as f:
        return parse_template(json.load(f))


def instantiate(template: CircuitTemplate, angles: Sequence[float],
                reference: Reference = Reference.DOWN) -> Circuit:
    if len(angles) != template.n_angles:
        raise DomainError(f"{template.name} takes {template.n_angles} angles, got {len(angles)}")
    gates: List[Gate] = []
    for op in template.ops:
        if op.get("role") == "reference" and reference == Reference.UP:
            continue
        kind = GateKind(op["kind"])
        angle = float(angles[op["angle_slot"]]) if "angle_slot" in op else None
        gates.append(Gate(kind, tuple(op["qubits"]), angle))
    return Circuit(template.n_qubits, gates)


def build_circuit(n_qubits: int, angles: Sequence[float],
                  reference: Reference = Reference.DOWN) -> Circuit:
    """The preparation circuit for 3 or 4 qubits with the given rotation angles"""
    return instantiate(load_template(n_qubits), angles, reference)
