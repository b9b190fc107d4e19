"""
RDM - 1-/2-RDM elements, order parameters and energy from Pauli expectations

With |0> = spin up:
    1D_p   = <Z_p>
    2D_pq  = <X_p X_q> - <Y_p Y_q>
    <Jz>   = 1/2 sum_p 1D_p
    <Jz^2> = 1/4 (N + 2 sum_{p<q} <Z_p Z_q>)
    <J+^2 + J-^2> = sum_{p<q} 2D_pq
    E      = 1/2 eps sum_p 1D_p + 1/2 lambda sum_{p<q} 2D_pq
"""
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Tuple, Union

from ..models.lmg_models import LmgParams, RdmPoint, Source
from ..utils.errors import MissingExpectationError
from .estimator import CountRecord, EstimatedValue, pooled_estimate, records_for
from .pauli import PauliString, TomographyPlan, pair_string, z_string

Expectation = Union[float, EstimatedValue]


@dataclass
class RdmElements:
    n_qubits: int
    one_rdm_diag: Dict[int, EstimatedValue]
    two_rdm: Dict[Tuple[int, int], EstimatedValue]


def _lookup(expectations: Mapping[PauliString, Expectation], string: PauliString) -> EstimatedValue:
    if string not in expectations:
        raise MissingExpectationError(f"missing expectation for {string}")
    value = expectations[string]
    return value if isinstance(value, EstimatedValue) else EstimatedValue(mean=float(value))


def _quadrature(*errors: float) -> float:
    return math.sqrt(math.fsum(e * e for e in errors))


def _infer_qubits(expectations: Mapping[PauliString, Expectation]) -> int:
    singles = [s.qubits[0] for s in expectations if len(s.ops) == 1]
    if not singles:
        raise MissingExpectationError("no single-qubit Z expectations given")
    return max(singles) + 1


def rdm_elements(expectations: Mapping[PauliString, Expectation], n_qubits: Optional[int] = None) -> RdmElements:
    n = n_qubits if n_qubits is not None else _infer_qubits(expectations)
    one = {p: _lookup(expectations, z_string(p)) for p in range(n)}
    two = {}
    for p, q in combinations(range(n), 2):
        xx = _lookup(expectations, pair_string("X", p, q))
        yy = _lookup(expectations, pair_string("Y", p, q))
        two[(p, q)] = EstimatedValue(
            mean=xx.mean - yy.mean,
            std_error=_quadrature(xx.std_error, yy.std_error),
            shots=xx.shots,
        )
    return RdmElements(n_qubits=n, one_rdm_diag=one, two_rdm=two)


def energy_from_rdm(elements: RdmElements, params: LmgParams) -> float:
    ones = math.fsum(v.mean for v in elements.one_rdm_diag.values())
    twos = math.fsum(v.mean for v in elements.two_rdm.values())
    return 0.5 * params.epsilon * ones + 0.5 * params.lam * twos


def order_parameters_from_paulis(expectations: Mapping[PauliString, Expectation], n_qubits: int,
                                 params: LmgParams, source: Source = Source.SIM_IDEAL,
                                 shots: Optional[int] = None, seed: Optional[int] = None) -> RdmPoint:
    """
    Errors are propagated in quadrature, treating the strings as independent;
    order_parameters_from_counts keeps the within-group covariances.
    """
    elements = rdm_elements(expectations, n_qubits)
    zz = [_lookup(expectations, pair_string("Z", p, q)) for p, q in combinations(range(n_qubits), 2)]
    singles = list(elements.one_rdm_diag.values())
    pairs = list(elements.two_rdm.values())

    jz = 0.5 * math.fsum(v.mean for v in singles)
    jz2 = 0.25 * (n_qubits + 2.0 * math.fsum(v.mean for v in zz))
    jpm2 = math.fsum(v.mean for v in pairs)
    return RdmPoint(
        jz=jz, jz2=jz2, jpm2=jpm2, params=params, source=source, shots=shots, seed=seed,
        energy=energy_from_rdm(elements, params),
        jz_err=0.5 * _quadrature(*(v.std_error for v in singles)),
        jz2_err=0.5 * _quadrature(*(v.std_error for v in zz)),
        jpm2_err=_quadrature(*(v.std_error for v in pairs)),
    )


def _spin_sum(bits: str) -> float:
    """1/2 sum_p z_p for one outcome"""
    return 0.5 * sum(1 if b == "0" else -1 for b in bits)


def _pair_parity_sum(bits: str) -> float:
    """sum_{p<q} s_p s_q for one outcome in a global X or Y setting"""
    signs = [1 if b == "0" else -1 for b in bits]
    total = sum(signs)
    return 0.5 * (total * total - len(signs))


def order_parameters_from_counts(records: List[CountRecord], plan: TomographyPlan, params: LmgParams,
                                 source: Source = Source.SIM_IDEAL, seed: Optional[int] = None) -> RdmPoint:
    """
    Order parameters as per-shot observables of the all-Z, all-X and all-Y
    histograms, so correlations between strings in one group enter the errors
    """
    n = plan.n_qubits
    z_setting, x_setting, y_setting = "Z" * n, "X" * n, "Y" * n
    for setting in (z_setting, x_setting, y_setting):
        plan.group_by_setting(setting)

    z_records = records_for(records, z_setting)
    jz = pooled_estimate(z_records, _spin_sum)
    jz2 = pooled_estimate(z_records, lambda bits: _spin_sum(bits) ** 2)
    xx = pooled_estimate(records_for(records, x_setting), _pair_parity_sum)
    yy = pooled_estimate(records_for(records, y_setting), _pair_parity_sum)
    jpm2_mean = xx.mean - yy.mean
    return RdmPoint(
        jz=jz.mean, jz2=jz2.mean, jpm2=jpm2_mean, params=params, source=source,
        shots=plan.shots_per_group, seed=seed,
        energy=params.epsilon * jz.mean + 0.5 * params.lam * jpm2_mean,
        jz_err=jz.std_error, jz2_err=jz2.std_error,
        jpm2_err=_quadrature(xx.std_error, yy.std_error),
    )
