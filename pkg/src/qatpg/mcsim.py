"""Seeded Monte-Carlo measurement of fault detection.

Random streams come from numpy's PCG64 bit generator. Every batch draws
from its own child of ``SeedSequence(seed)``, so results depend only on the
plan, never on how many workers ran the batches.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .atpg import detection_profile
from .circuit import Circuit, total_matrix
from .faults import FaultSpec, apply_fault, faulty_output
from .linalg import StateVector

RNG_ALGORITHM = "numpy PCG64 via SeedSequence.spawn"
BATCH_SIZE = 10_000
_ORTHO_TOL = 1e-8


def make_rng(seed: int, *key: int) -> np.random.Generator:
    """Generator for substream ``key`` of ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


@dataclass(frozen=True)
class TrialPlan:
    circuit: Circuit
    fault: FaultSpec
    input_index: int
    trials: int
    seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if not 0 <= self.input_index < self.circuit.dim:
            raise IndexError(f"input index {self.input_index} out of range")


@dataclass(frozen=True)
class TrialResult:
    detections: int
    trials: int
    p_hat: float
    analytic_p: float
    abs_error: float


def complete_basis(psi: StateVector) -> np.ndarray:
    """Orthonormal basis (rows) whose first element is ``psi``.

    Gram-Schmidt over ``psi, e_0, e_1, ...`` in that order, dropping
    vectors whose residual norm falls below 1e-8.
    """
    psi = np.asarray(psi, dtype=np.complex128)
    dim = psi.shape[0]
    basis = [psi / np.linalg.norm(psi)]
    for k in range(dim):
        if len(basis) == dim:
            break
        v = np.zeros(dim, dtype=np.complex128)
        v[k] = 1.0
        for _ in range(2):  # re-orthogonalise once for stability
            for b in basis:
                v = v - np.vdot(b, v) * b
        norm = np.linalg.norm(v)
        if norm > _ORTHO_TOL:
            basis.append(v / norm)
    return np.array(basis)


def born_probabilities(state, basis) -> np.ndarray:
    state = np.asarray(state, dtype=np.complex128)
    basis = np.asarray(basis, dtype=np.complex128)
    if abs(np.vdot(state, state).real - 1.0) > _ORTHO_TOL:
        raise ValueError("state is not normalized")
    gram = basis.conj() @ basis.T
    if np.max(np.abs(gram - np.eye(len(basis)))) > _ORTHO_TOL:
        raise ValueError("basis is not orthonormal")
    probs = np.abs(basis.conj() @ state) ** 2
    return probs / probs.sum()


def _sample(probs: np.ndarray, rng: np.random.Generator, size=None):
    cdf = np.cumsum(probs)
    u = rng.random(size)
    return np.minimum(np.searchsorted(cdf, u, side="right"), len(probs) - 1)


def measure_in_basis(state, basis, rng: np.random.Generator) -> int:
    """Sample one outcome index by inverse CDF over Born probabilities."""
    return int(_sample(born_probabilities(state, basis), rng))


def sample_in_basis(state, basis, rng: np.random.Generator, shots: int) -> np.ndarray:
    return _sample(born_probabilities(state, basis), rng, shots)


def _detection_probs(plan: TrialPlan) -> np.ndarray:
    good = total_matrix(plan.circuit)[:, plan.input_index]
    bad = faulty_output(apply_fault(plan.circuit, plan.fault), plan.input_index)
    return born_probabilities(bad, complete_basis(good))


def _count_batch(probs, seed, batch, size) -> int:
    outcomes = _sample(probs, make_rng(seed, batch), size)
    return int(np.count_nonzero(outcomes != 0))


def estimate_detection(plan: TrialPlan, workers: int = 1) -> TrialResult:
    """Measure the faulty output in a basis containing the fault-free output.

    A trial detects the fault when the outcome is not the fault-free element.
    """
    probs = _detection_probs(plan)
    sizes = [BATCH_SIZE] * (plan.trials // BATCH_SIZE)
    if plan.trials % BATCH_SIZE:
        sizes.append(plan.trials % BATCH_SIZE)
    jobs = [(probs, plan.seed, b, s) for b, s in enumerate(sizes)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(lambda j: _count_batch(*j), jobs))
    else:
        counts = [_count_batch(*j) for j in jobs]
    detections = sum(counts)
    analytic = detection_profile(plan.circuit, plan.fault)[plan.input_index].per_trial_p
    p_hat = detections / plan.trials
    return TrialResult(detections, plan.trials, p_hat, analytic, abs(p_hat - analytic))


def escape_curve(plan: TrialPlan, k_max: int) -> list[tuple[int, float]]:
    """Fraction of ``plan.trials`` independent k-trial batches with a detection.

    Each k uses its own substream of the plan seed.
    """
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    probs = _detection_probs(plan)
    curve = []
    for k in range(1, k_max + 1):
        rng = make_rng(plan.seed, 1 << 32, k)
        hit = np.zeros(plan.trials, dtype=bool)
        for _ in range(k):
            hit |= _sample(probs, rng, plan.trials) != 0
        curve.append((k, float(np.count_nonzero(hit)) / plan.trials))
    return curve
