"""
Tomography - Pauli-string measurement and 2-RDM reconstruction
"""
from .counts_io import group_by_point, read_counts, write_counts
from .estimator import (
    CountRecord,
    EstimatedValue,
    estimate_all,
    estimate_pauli,
    exact_expectations,
    measure_plan,
)
from .pauli import (
    MeasurementGroup,
    PauliString,
    TomographyPlan,
    basis_rotation_gates,
    default_plan,
    required_strings,
)
from .rdm import (
    RdmElements,
    energy_from_rdm,
    order_parameters_from_counts,
    order_parameters_from_paulis,
    rdm_elements,
)
