"""
Errors - Exception hierarchy shared by the solver, simulator, geometry and CLI layers
"""
from typing import Optional


class LipkinError(Exception):
    """Base class for every error raised by this package"""


class DomainError(LipkinError, ValueError):
    """Invalid model parameters, sectors, qubit indices or shot counts"""


class ContractViolation(LipkinError, AssertionError):
    """A computed object handed to an operation breaks that operation's precondition"""


class UnsupportedModeError(LipkinError):
    """Operation not available for the state's representation"""


class MissingExpectationError(LipkinError, KeyError):
    """A Pauli expectation needed for reconstruction is absent or not covered by the plan"""

    def __str__(self) -> str:
        # KeyError quotes its argument; keep messages readable
        return str(self.args[0]) if self.args else ""


class InfeasibleTargetError(LipkinError):
    """Angle solving could not reach the requested fidelity"""

    def __init__(self, message: str, best_fidelity: float):
        super().__init__(f"{message} (best fidelity {best_fidelity:.12f})")
        self.best_fidelity = best_fidelity


class HullDegeneracyError(LipkinError):
    """Point set is not affinely three-dimensional within tolerance"""

    def __init__(self, message: str, rank: int):
        super().__init__(f"{message} (affine rank {rank})")
        self.rank = rank


class SweepPointError(LipkinError):
    """A single grid point failed; carries the grid index of the failure"""

    def __init__(self, index: int, cause: Exception):
        super().__init__(f"grid point {index}: {cause}")
        self.index = index
        self.cause = cause


class ConfigError(LipkinError):
    """Configuration could not be parsed or validated"""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field
