"""
Noise - Amplitude-damping (T1) noise model
"""
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from ..models.lmg_models import NoiseSection
from ..utils.errors import DomainError
from .gates import Gate, GateKind


@dataclass
class NoiseModel:
    """
    Damping after every gate on the gate's qubits, p = 1 - exp(-duration/T1).

    extra_damping_per_gate, when set, replaces the duration-derived probability
    for every gate.
    """

    t1_per_qubit: List[float]
    gate_durations: Dict[GateKind, float] = field(default_factory=dict)
    extra_damping_per_gate: Optional[float] = None

    def __post_init__(self):
        if not self.t1_per_qubit or any(t <= 0 or not math.isfinite(t) for t in self.t1_per_qubit):
            raise DomainError("T1 values must be positive and finite")
        if any(d < 0 for d in self.gate_durations.values()):
            raise DomainError("gate durations must be non-negative")
        if self.extra_damping_per_gate is not None and not 0.0 <= self.extra_damping_per_gate <= 1.0:
            raise DomainError("per-gate damping probability must be in [0, 1]")

    @classmethod
    def from_section(cls, section: NoiseSection, n_qubits: int) -> "NoiseModel":
        t1 = list(section.t1)
        if len(t1) == 1:
            t1 = t1 * n_qubits
        elif len(t1) != n_qubits:
            raise DomainError(f"noise.t1 has {len(t1)} entries for {n_qubits} qubits")
        durations = {GateKind(kind): value for kind, value in section.gate_durations.items()}
        return cls(t1_per_qubit=t1, gate_durations=durations, extra_damping_per_gate=section.per_gate_p)

    @classmethod
    def uniform(cls, p: float, n_qubits: int) -> "NoiseModel":
        return cls(t1_per_qubit=[1.0] * n_qubits, extra_damping_per_gate=p)

    def damping_probability(self, gate: Gate, qubit: int) -> float:
        if self.extra_damping_per_gate is not None:
            return self.extra_damping_per_gate
        if qubit >= len(self.t1_per_qubit):
            raise DomainError(f"no T1 value for qubit {qubit}")
        duration = self.gate_durations.get(gate.kind, 0.0)
        return 1.0 - math.exp(-duration / self.t1_per_qubit[qubit])
