"""
Sampling - Shot sampling from the computational-basis distribution
"""
from typing import Dict, Union

import numpy as np

from ..utils.errors import DomainError
from .quantum_state import QuantumState

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator]


def sample_counts(state: QuantumState, shots: int, seed: SeedLike) -> Dict[str, int]:
    """Multinomial histogram {bitstring: count}, qubit 0 leftmost; deterministic per seed"""
    if shots < 1:
        raise DomainError("shots must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    counts = rng.multinomial(shots, state.probabilities())
    width = state.n_qubits
    return {
        format(index, f"0{width}b"): int(count)
        for index, count in enumerate(counts)
        if count
    }
