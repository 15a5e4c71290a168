"""Fault testing and probabilistic test-vector generation for quantum circuits."""

__version__ = "0.1.0"

from .atpg import (
    DetectionClass,
    DetectionOutcome,
    TestSetReport,
    best_vector_for_gate,
    detection_profile,
    generate_test_set,
    partition_atpg,
    trials_needed,
)
from .circuit import Circuit, CircuitError, Gate, embed_gate, gate, parse_circuit, total_matrix
from .faults import (
    MMGF,
    PGF,
    RGF,
    SMGF,
    CrossPoint,
    FaultEnumConfig,
    FaultError,
    StuckAt,
    apply_fault,
    enumerate_faults,
    faulty_output,
    parse_fault,
)
from .mcsim import TrialPlan, TrialResult, escape_curve, estimate_detection, measure_in_basis
