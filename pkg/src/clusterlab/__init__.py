"""Monitored generalized-cluster circuit laboratory."""

from .pauli import (
    PauliString,
    PauliError,
    build_operator,
    cluster_op,
    symmetry_op,
    trivial_string_op,
    spt_string_op,
    local_order_op,
)
from .tableau import StabilizerState, TableauError
from .dense import DenseState, SchmidtSpectrum, DenseError, sample_symmetric_haar_gate
from .clifford import CliffordGate, GateError, sample_symmetric_clifford
from .circuit import (
    CircuitSpec,
    CircuitError,
    OperationRecord,
    TrajectoryResult,
    run_trajectory,
    sample_operation,
    make_clifford_gate,
    make_haar_gate,
)
from .fast_engine import FastStabilizerSim
from .observables import (
    ObservableEstimate,
    StringPlacement,
    StandardObserver,
    centered_placement,
    eval_string_trivial,
    eval_string_spt,
    eval_ssb_correlator,
    sublattice_average,
    accumulate,
)
from .analysis import (
    FitResult,
    CollapseResult,
    CriticalPoint,
    AnalysisError,
    fit_power_law,
    locate_critical,
    fit_collapse,
    classify_phase,
)
from .duality import DualLattice, DualityError, dualize, verify_lemma, verify_entropy_bound

__all__ = [
    "CircuitSpec",
    "CircuitError",
    "OperationRecord",
    "TrajectoryResult",
    "run_trajectory",
    "sample_operation",
    "make_clifford_gate",
    "make_haar_gate",
    "FastStabilizerSim",
    "ObservableEstimate",
    "StringPlacement",
    "StandardObserver",
    "centered_placement",
    "eval_string_trivial",
    "eval_string_spt",
    "eval_ssb_correlator",
    "sublattice_average",
    "accumulate",
    "FitResult",
    "CollapseResult",
    "CriticalPoint",
    "AnalysisError",
    "fit_power_law",
    "locate_critical",
    "fit_collapse",
    "classify_phase",
    "DualLattice",
    "DualityError",
    "dualize",
    "verify_lemma",
    "verify_entropy_bound",
    "PauliString",
    "PauliError",
    "build_operator",
    "cluster_op",
    "symmetry_op",
    "trivial_string_op",
    "spt_string_op",
    "local_order_op",
    "StabilizerState",
    "TableauError",
    "DenseState",
    "SchmidtSpectrum",
    "DenseError",
    "sample_symmetric_haar_gate",
    "CliffordGate",
    "GateError",
    "sample_symmetric_clifford",
]
