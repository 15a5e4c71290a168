"""Dense complex linear algebra on 2^n-dimensional states and unitaries.

States and matrices are plain ``numpy`` arrays of dtype ``complex128``.
Matrices follow the column convention: column ``i`` of a unitary is the
image of the basis state ``|i>``.
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

StateVector = npt.NDArray[np.complex128]
ComplexMatrix = npt.NDArray[np.complex128]

ATOL = 1e-9

# Fidelities are snapped to this many decimals so that exact rational
# overlaps (1/2, 1/4, ...) survive the squaring of irrational amplitudes.
_FIDELITY_DECIMALS = 15


def as_matrix(a) -> ComplexMatrix:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def identity(dim: int) -> ComplexMatrix:
    return np.eye(dim, dtype=np.complex128)


def basis_state(index: int, dim: int) -> StateVector:
    if not 0 <= index < dim:
        raise IndexError(f"basis index {index} out of range for dimension {dim}")
    v = np.zeros(dim, dtype=np.complex128)
    v[index] = 1.0
    return v


def tensor(a, b) -> ComplexMatrix:
    """Kronecker product; the left factor is the most significant index."""
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def matmul(a, b) -> ComplexMatrix:
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b


def is_unitary(a, tol: float = ATOL) -> bool:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    if not np.all(np.isfinite(m)):
        return False
    err = m.conj().T @ m - np.eye(m.shape[0])
    return bool(np.max(np.abs(err)) <= tol)


def is_normalized(psi, tol: float = ATOL) -> bool:
    return abs(float(np.vdot(psi, psi).real) - 1.0) <= tol


def fidelity(psi, phi) -> float:
    """Return ``|<psi|phi>|^2`` clipped to [0, 1]."""
    psi = np.asarray(psi, dtype=np.complex128)
    phi = np.asarray(phi, dtype=np.complex128)
    if psi.shape != phi.shape:
        raise ValueError(f"dimension mismatch: {psi.shape} vs {phi.shape}")
    overlap = np.vdot(psi, phi)
    f = overlap.real * overlap.real + overlap.imag * overlap.imag
    return float(min(1.0, max(0.0, round(f, _FIDELITY_DECIMALS))))


def column(u, i: int) -> StateVector:
    u = as_matrix(u)
    if not 0 <= i < u.shape[0]:
        raise IndexError(f"column {i} out of range for dimension {u.shape[0]}")
    return u[:, i].copy()
