"""
Angle Solver - Rotation angles that reproduce an exact ground state
"""
import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy.optimize import least_squares

from ..lmg.exact_solver import DEFAULT_DEGENERACY_TOL
from ..models.lmg_models import LmgParams
from ..simulation.circuit import Circuit, run_circuit
from ..utils.errors import InfeasibleTargetError
from .ansatz import AnsatzTarget, exact_coefficients
from .builder import build_circuit, instantiate, load_template

logger = logging.getLogger(__name__)

FIDELITY_TOL = 1e-8
DEFAULT_RESTARTS = 32


@dataclass
class PreparedState:
    target: AnsatzTarget
    angles: List[float]
    circuit: Circuit
    fidelity: float


def _overlap(psi: np.ndarray, target: np.ndarray) -> float:
    return float(np.dot(target, psi))


def solve_angles(target: AnsatzTarget, seed: int = 0,
                 restarts: int = DEFAULT_RESTARTS,
                 tol: float = FIDELITY_TOL) -> List[float]:
    """
    Levenberg-Marquardt on r(theta) = psi - <t|psi> t, whose squared norm is the
    infidelity. The circuits only use real gates, so psi stays real.
    """
    template = load_template(target.n_qubits)
    t = target.vector()

    def prepared(theta: np.ndarray) -> np.ndarray:
        circuit = instantiate(template, theta, target.reference)
        return run_circuit(circuit).data.real

    def residual(theta: np.ndarray) -> np.ndarray:
        psi = prepared(theta)
        return psi - _overlap(psi, t) * t

    rng = np.random.default_rng(seed)
    best_angles = np.zeros(template.n_angles)
    best_fidelity = _overlap(prepared(best_angles), t) ** 2
    starts = [np.zeros(template.n_angles)]
    starts.extend(rng.uniform(-2 * np.pi, 2 * np.pi, template.n_angles) for _ in range(restarts))

    for attempt, x0 in enumerate(starts):
        if best_fidelity >= 1.0 - tol:
            break
        result = least_squares(residual, x0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
        achieved = _overlap(prepared(result.x), t) ** 2
        logger.debug("angle solve attempt %d: fidelity %.3e short of 1", attempt, 1.0 - achieved)
        if achieved > best_fidelity:
            best_fidelity, best_angles = achieved, result.x

    if best_fidelity < 1.0 - tol:
        raise InfeasibleTargetError(
            f"no angles reach fidelity 1-{tol:g} for {target.n_qubits} qubits", best_fidelity
        )
    return [float(a) for a in best_angles]


def prepare_ground_state(params: LmgParams, seed: int = 0,
                         degeneracy_tol: float = DEFAULT_DEGENERACY_TOL,
                         restarts: Optional[int] = None) -> PreparedState:
    """exact_coefficients -> solve_angles -> build_circuit"""
    target = exact_coefficients(params, degeneracy_tol)
    angles = solve_angles(target, seed=seed, restarts=DEFAULT_RESTARTS if restarts is None else restarts)
    circuit = build_circuit(target.n_qubits, angles, target.reference)
    psi = run_circuit(circuit).data.real
    return PreparedState(target=target, angles=angles, circuit=circuit,
                         fidelity=_overlap(psi, target.vector()) ** 2)
