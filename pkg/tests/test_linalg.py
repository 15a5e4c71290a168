import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qatpg.linalg import basis_state, column, fidelity, identity, is_unitary, matmul, tensor

from conftest import EPR_B, EPR_B1

R = 1 / math.sqrt(2)
I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]])
H = np.array([[R, R], [R, -R]])
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


def random_unitary(dim, rng):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def kron_by_definition(a, b):
    da, db = a.shape[0], b.shape[0]
    out = np.zeros((da * db, da * db), dtype=complex)
    for ia in range(da):
        for ja in range(da):
            for ib in range(db):
                for jb in range(db):
                    out[ia * db + ib, ja * db + jb] = a[ia, ja] * b[ib, jb]
    return out


unitaries = st.builds(
    lambda seed, k: random_unitary(2**k, np.random.default_rng(seed)),
    st.integers(0, 2**32 - 1),
    st.integers(1, 2),
)


class TestTensor:
    def test_identity(self):
        np.testing.assert_array_equal(tensor(I2, I2), np.eye(4))

    def test_not_with_identity_golden(self):
        np.testing.assert_array_equal(tensor(X, I2), EPR_B1)

    def test_hh_matches_entry_formula(self):
        hh = tensor(H, H)
        np.testing.assert_allclose(hh, kron_by_definition(H, H), atol=1e-15)
        np.testing.assert_allclose(np.abs(hh), 0.5 * np.ones((4, 4)), atol=1e-15)

    @given(unitaries, unitaries, unitaries)
    @settings(max_examples=50, deadline=None)
    def test_associative(self, a, b, c):
        np.testing.assert_allclose(tensor(tensor(a, b), c), tensor(a, tensor(b, c)), atol=1e-12)


class TestMatmul:
    def test_identity_left(self):
        b = np.array(EPR_B, dtype=complex)
        np.testing.assert_array_equal(matmul(identity(4), b), b)

    def test_golden_product(self):
        # (NOT x I) . CNOT in row-convention multiplication order
        np.testing.assert_array_equal(matmul(tensor(X, I2), CNOT), EPR_B)

    def test_hadamard_self_inverse(self):
        np.testing.assert_allclose(matmul(H, H), I2, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            matmul(np.eye(2), np.eye(4))

    @given(st.integers(0, 2**32 - 1), st.integers(1, 3))
    @settings(max_examples=50, deadline=None)
    def test_preserves_unitarity(self, seed, k):
        rng = np.random.default_rng(seed)
        a, b = random_unitary(2**k, rng), random_unitary(2**k, rng)
        assert is_unitary(a) and is_unitary(b)
        assert is_unitary(matmul(a, b), 1e-8)


class TestIsUnitary:
    @pytest.mark.parametrize(
        "m, expected",
        [(np.eye(4), True), (H, True), (np.ones((2, 2)), False), (np.zeros((2, 3)), False)],
    )
    def test_cases(self, m, expected):
        assert is_unitary(m, 1e-9) is expected


class TestFidelity:
    def test_same_basis_state(self):
        assert fidelity(basis_state(0, 2), basis_state(0, 2)) == 1.0

    def test_hadamard_half(self):
        assert fidelity(basis_state(0, 2), H @ basis_state(0, 2)) == 0.5

    def test_plus_minus_orthogonal(self):
        assert fidelity(H[:, 0], H[:, 1]) == pytest.approx(0.0, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            fidelity(basis_state(0, 2), basis_state(0, 4))

    @given(unitaries, st.sampled_from([0.0, math.pi / 7, math.pi / 2, math.pi]))
    @settings(max_examples=50, deadline=None)
    def test_symmetry_and_phase(self, u, theta):
        psi, phi = u[:, 0], u[:, -1] * 0.6 + u[:, 0] * 0.8
        assert abs(fidelity(psi, phi) - fidelity(phi, psi)) <= 1e-12
        assert abs(fidelity(np.exp(1j * theta) * psi, phi) - fidelity(psi, phi)) <= 1e-12
        assert 0.0 <= fidelity(psi, phi) <= 1.0

    @given(st.permutations(range(8)))
    def test_permutation_columns_exact(self, perm):
        p = np.eye(8, dtype=complex)[:, perm]
        for i in range(8):
            for j in range(8):
                assert fidelity(p[:, i], p[:, j]) in (0.0, 1.0)


class TestColumn:
    def test_identity_column(self):
        np.testing.assert_array_equal(column(identity(4), 2), basis_state(2, 4))

    def test_epr_column_zero(self):
        # golden B row 0 is (0, 0, 0, 1): |00> goes to |11>
        u = np.array(EPR_B, dtype=complex).T
        np.testing.assert_array_equal(column(u, 0), basis_state(3, 4))

    def test_hadamard_minus(self):
        np.testing.assert_allclose(column(H, 1), [R, -R])

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            column(identity(2), 2)
