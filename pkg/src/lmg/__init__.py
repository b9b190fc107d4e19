"""
LMG - Exact quasi-spin solver for the Lipkin-Meshkov-Glick model
"""
from .exact_set import exact_set_points, extremal_point, sphere_directions
from .exact_solver import (
    GroundStateResult,
    Parity,
    SpinSector,
    build_block_hamiltonian,
    exact_point,
    ground_state,
    iter_sectors,
    low_lying_states,
    order_parameters,
    sweep_ground_states,
)

__all__ = [
    "GroundStateResult",
    "Parity",
    "SpinSector",
    "build_block_hamiltonian",
    "exact_set_points",
    "extremal_point",
    "exact_point",
    "ground_state",
    "iter_sectors",
    "low_lying_states",
    "order_parameters",
    "sphere_directions",
    "sweep_ground_states",
]
