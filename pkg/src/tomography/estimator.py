"""
Estimator - Pauli expectations from shot counts or exact operator averages
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from ..simulation.circuit import Circuit, run_circuit
from ..simulation.noise import NoiseModel
from ..simulation.quantum_state import QuantumState, pauli_expectation
from ..simulation.sampling import sample_counts
from ..utils.config import derive_seed
from ..utils.errors import DomainError, MissingExpectationError
from .pauli import PauliString, TomographyPlan

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EstimatedValue:
    mean: float
    std_error: float = 0.0
    # None for infinite-shot (exact) values
    shots: Optional[int] = None

    def __post_init__(self):
        if self.std_error < 0 or math.isnan(self.std_error):
            raise DomainError("std_error must be >= 0")


@dataclass
class CountRecord:
    """Histogram of one (repetition, basis setting) run"""

    basis_setting: str
    shots: int
    seed: int
    counts: Dict[str, int]
    repetition: int = 0
    point_index: int = 0


def parity(bits: str, qubits: Sequence[int]) -> int:
    """+1 / -1 eigenvalue of the measured string on its support"""
    ones = sum(1 for q in qubits if bits[q] == "1")
    return -1 if ones % 2 else 1


def pooled_estimate(records: List[CountRecord], value: Callable[[str], float]) -> EstimatedValue:
    """
    Per-shot observable averaged over repetitions: mean of per-repetition means,
    error from their spread (R >= 2) or from the single histogram (R = 1)
    """
    if not records:
        raise MissingExpectationError("no count records for the requested setting")
    means = []
    second_moment = 0.0
    total = 0
    for record in records:
        s = sum(record.counts.values())
        if s != record.shots:
            raise DomainError(f"counts sum to {s}, record says {record.shots} shots")
        first = math.fsum(value(bits) * n for bits, n in record.counts.items()) / s
        second_moment = math.fsum(value(bits) ** 2 * n for bits, n in record.counts.items()) / s
        means.append(first)
        total += s
    mean = math.fsum(means) / len(means)
    if len(means) >= 2:
        std_error = float(np.std(means, ddof=1)) / math.sqrt(len(means))
    else:
        variance = max(0.0, second_moment - mean * mean)
        std_error = math.sqrt(variance) / math.sqrt(total)
    return EstimatedValue(mean=mean, std_error=std_error, shots=total)


def records_for(records: List[CountRecord], setting: str) -> List[CountRecord]:
    return sorted((r for r in records if r.basis_setting == setting), key=lambda r: r.repetition)


def estimate_pauli(records: List[CountRecord], plan: TomographyPlan, string: PauliString) -> EstimatedValue:
    group = plan.group_for(string)
    qubits = string.qubits
    return pooled_estimate(records_for(records, group.setting), lambda bits: parity(bits, qubits))


def estimate_all(records: List[CountRecord], plan: TomographyPlan,
                 strings: Optional[Sequence[PauliString]] = None) -> Dict[PauliString, EstimatedValue]:
    return {s: estimate_pauli(records, plan, s) for s in (strings or plan.required)}


def exact_expectations(state: QuantumState, strings: Sequence[PauliString]) -> Dict[PauliString, EstimatedValue]:
    """Infinite-shot operator averages"""
    return {s: EstimatedValue(mean=pauli_expectation(state, s.as_dict())) for s in strings}


def measure_plan(circuit: Circuit, plan: TomographyPlan, repetitions: int,
                 root_seed: int, point_index: int = 0,
                 noise: Optional[NoiseModel] = None,
                 decompose_u: bool = False) -> List[CountRecord]:
    """
    Run each group's basis rotation after the circuit and sample it once per
    repetition; seeds are split from root_seed by (point, repetition, group)
    """
    if repetitions < 1:
        raise DomainError("repetitions must be >= 1")
    records: List[CountRecord] = []
    for g, group in enumerate(plan.groups):
        state = run_circuit(circuit.extended(group.rotation_gates()), noise=noise, decompose_u=decompose_u)
        for rep in range(repetitions):
            seed = derive_seed(root_seed, point_index, rep, g)
            counts = sample_counts(state, plan.shots_per_group, seed)
            records.append(CountRecord(group.setting, plan.shots_per_group, seed, counts, rep, point_index))
    logger.debug("point %d: sampled %d histograms", point_index, len(records))
    return records
