"""Detection profiles, trial counts, and test-set generation."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .circuit import Circuit, total_matrix
from .faults import FaultEnumConfig, FaultSpec, apply_fault, enumerate_faults, faulty_outputs
from .linalg import ComplexMatrix, as_matrix, fidelity

DETECT_TOL = 1e-9
DEFAULT_CONFIDENCE = 0.99
UNBOUNDED = math.inf


class DetectionClass(str, Enum):
    DETERMINISTIC = "D"
    PROBABILISTIC = "P"
    UNDETECTABLE = "U"


def classify(p: float) -> DetectionClass:
    if p >= 1 - DETECT_TOL:
        return DetectionClass.DETERMINISTIC
    if p <= DETECT_TOL:
        return DetectionClass.UNDETECTABLE
    return DetectionClass.PROBABILISTIC


def bitstring(index: int, width: int) -> str:
    """Basis label with line 0 leftmost, e.g. ``bitstring(2, 2) == "10"``."""
    return format(index, f"0{width}b")


@dataclass(frozen=True)
class DetectionOutcome:
    fault: FaultSpec
    input_index: int
    fidelity: float
    per_trial_p: float
    detection_class: DetectionClass


def detection_profile(
    c: Circuit, f: FaultSpec, good: ComplexMatrix | None = None
) -> list[DetectionOutcome]:
    """One outcome per basis input, in ascending input order.

    ``good`` may carry a precomputed fault-free total matrix of ``c``.
    """
    fc = apply_fault(c, f)
    u = total_matrix(c) if good is None else good
    bad = faulty_outputs(fc)
    outcomes = []
    for i in range(c.dim):
        fid = fidelity(u[:, i], bad[:, i])
        p = 1.0 - fid
        outcomes.append(DetectionOutcome(f, i, fid, p, classify(p)))
    return outcomes


def trials_needed(p: float, gamma: float = DEFAULT_CONFIDENCE) -> int | float:
    """Smallest k with ``1 - (1 - p)**k >= gamma``; ``UNBOUNDED`` if p is 0."""
    if not 0 < gamma < 1:
        raise ValueError(f"confidence must lie in (0, 1), got {gamma}")
    if not -DETECT_TOL <= p <= 1 + DETECT_TOL:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    if p >= 1 - DETECT_TOL:
        return 1
    if p <= DETECT_TOL:
        return UNBOUNDED
    k = max(1, math.ceil(math.log1p(-gamma) / math.log1p(-p)))
    # the closed form can land one off when the ratio is (nearly) an integer
    while k > 1 and 1 - (1 - p) ** (k - 1) >= gamma:
        k -= 1
    while 1 - (1 - p) ** k < gamma:
        k += 1
    return k


def best_vector_for_gate(g) -> tuple[list[int], float]:
    """Basis inputs with the smallest diagonal magnitude ``|g_ii|``.

    A missing gate leaves ``|i>`` untouched, so the per-trial detection
    probability on input ``i`` is ``1 - |g_ii|^2``; all tied minimisers are
    returned.
    """
    m = as_matrix(g)
    diag = np.abs(np.diag(m))
    low = float(diag.min())
    indices = [int(i) for i in np.flatnonzero(diag <= low + DETECT_TOL)]
    return indices, float(max(0.0, 1.0 - low * low))


@dataclass(frozen=True)
class FaultCoverage:
    test_input: int
    per_trial_p: float
    trials_needed: int | float
    detection_class: DetectionClass


@dataclass
class TestSetReport:
    __test__ = False  # not a pytest class

    width: int
    test_set: list[int]
    per_fault: dict[FaultSpec, FaultCoverage]
    undetectable: list[FaultSpec]
    confidence: float
    faults: list[FaultSpec] = field(default_factory=list)
    max_p: dict[FaultSpec, float] = field(default_factory=dict)

    @property
    def all_detectable(self) -> bool:
        return not self.undetectable


def _profiles(c: Circuit, faults: Sequence[FaultSpec], workers: int) -> list[np.ndarray]:
    good = total_matrix(c)

    def run(f):
        return np.array([o.per_trial_p for o in detection_profile(c, f, good)])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run, faults))
    return [run(f) for f in faults]


def generate_test_set(
    c: Circuit,
    faults: Sequence[FaultSpec],
    gamma: float = DEFAULT_CONFIDENCE,
    workers: int = 1,
) -> TestSetReport:
    """Greedy success-rate-first test-set selection.

    Each detectable fault keeps the inputs that reach its highest per-trial
    detection probability. Inputs are then picked greedily, ranked by the
    best rate among the uncovered faults they are optimal for, then by how
    many faults they detect at all, then by ascending basis index. A pick
    covers every fault for which it is an optimal input.
    """
    if not faults:
        raise ValueError("generate_test_set needs at least one fault")
    if not 0 < gamma < 1:
        raise ValueError(f"confidence must lie in (0, 1), got {gamma}")
    faults = list(faults)
    ps = _profiles(c, faults, workers)

    best = [float(p.max()) for p in ps]
    candidates = [set(np.flatnonzero(p >= b - DETECT_TOL).tolist()) for p, b in zip(ps, best)]
    detects = np.sum([p > DETECT_TOL for p in ps], axis=0)
    detectable = [k for k, b in enumerate(best) if b > DETECT_TOL]
    undetectable = [faults[k] for k, b in enumerate(best) if b <= DETECT_TOL]

    uncovered = set(detectable)
    test_set: list[int] = []
    covered_by: dict[int, int] = {}
    while uncovered:
        rate: dict[int, float] = {}
        for k in uncovered:
            for v in candidates[k]:
                rate[v] = max(rate.get(v, 0.0), round(best[k], 12))
        pick = max(rate, key=lambda v: (rate[v], int(detects[v]), -v))
        test_set.append(pick)
        for k in [k for k in uncovered if pick in candidates[k]]:
            covered_by[k] = pick
            uncovered.discard(k)

    per_fault = {}
    for k in detectable:
        v = covered_by[k]
        p = float(ps[k][v])
        per_fault[faults[k]] = FaultCoverage(v, p, trials_needed(p, gamma), classify(p))
    max_p = {f: b for f, b in zip(faults, best)}
    return TestSetReport(c.width, test_set, per_fault, undetectable, gamma, faults, max_p)


def partition_atpg(
    c: Circuit,
    boundaries: Sequence[int],
    cfg: FaultEnumConfig | None = None,
    gamma: float = DEFAULT_CONFIDENCE,
) -> list[tuple[Circuit, TestSetReport]]:
    """Split the gate list at ``boundaries`` and run ATPG on each piece."""
    m = len(c.gates)
    bounds = list(boundaries)
    if any(not isinstance(b, (int, np.integer)) for b in bounds):
        raise ValueError("partition boundaries must be integers")
    if any(b <= a for a, b in zip(bounds, bounds[1:])):
        raise ValueError(f"partition boundaries must be strictly ascending: {bounds}")
    if bounds and not (1 <= bounds[0] and bounds[-1] < m):
        raise ValueError(f"partition boundaries must lie in [1, {m}), got {bounds}")
    edges = [0, *bounds, m]
    out = []
    for lo, hi in zip(edges, edges[1:]):
        sub = c.replace_gates(c.gates[lo:hi])
        out.append((sub, generate_test_set(sub, enumerate_faults(sub, cfg), gamma)))
    return out
