import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biunitary import (
    DEFAULT_TOL,
    DimensionError,
    Tolerance,
    commutes,
    dagger,
    is_unitary,
    kron,
    max_abs,
    proportional,
    regroup,
    trace_inner,
    unitary_scalar,
)
from biunitary.linalg import as_cmatrix

from conftest import rng_unitary

dims = st.integers(min_value=1, max_value=5)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def rand_matrix(seed, rows, cols):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


class TestTolerance:
    def test_defaults(self):
        assert DEFAULT_TOL.verify_tol == 1e-10
        assert DEFAULT_TOL.compare_tol == 1e-12

    @pytest.mark.parametrize("bad", [0.0, -1e-9, math.nan])
    def test_rejects_nonpositive(self, bad):
        with pytest.raises(ValueError):
            Tolerance(verify_tol=bad, compare_tol=1e-12)
        with pytest.raises(ValueError):
            Tolerance(verify_tol=1e-10, compare_tol=bad)

    def test_frozen(self):
        with pytest.raises(AttributeError):
            DEFAULT_TOL.verify_tol = 1.0


class TestCoercion:
    def test_as_cmatrix_accepts_lists(self):
        m = as_cmatrix([[1, 2], [3, 4]])
        assert m.dtype == np.complex128 and m.shape == (2, 2)

    @pytest.mark.parametrize("bad", [[1, 2, 3], np.zeros((2, 2, 2)), "text"])
    def test_as_cmatrix_rejects_non_2d(self, bad):
        with pytest.raises((DimensionError, ValueError, TypeError)):
            as_cmatrix(bad)

    def test_as_cmatrix_rejects_non_finite(self):
        with pytest.raises(ValueError):
            as_cmatrix([[1.0, math.inf], [0.0, 1.0]])
        with pytest.raises(ValueError):
            as_cmatrix([[1.0, math.nan], [0.0, 1.0]])


class TestDagger:
    @given(seed=seeds, n=dims, m=dims)
    def test_involution(self, seed, n, m):
        a = rand_matrix(seed, n, m)
        assert np.array_equal(dagger(dagger(a)), a)

    @given(seed=seeds, n=dims, m=dims, k=dims)
    def test_antihomomorphism(self, seed, n, m, k):
        a = rand_matrix(seed, n, m)
        c = rand_matrix(seed + 1, m, k)
        lhs = dagger(a @ c)
        rhs = dagger(c) @ dagger(a)
        assert max_abs(lhs - rhs) <= 1e-12 * max(1.0, max_abs(lhs))


class TestKron:
    def test_matches_numpy(self):
        a = rand_matrix(0, 2, 3)
        c = rand_matrix(1, 3, 2)
        assert np.array_equal(kron(a, c), np.kron(a, c))

    @given(seed=seeds, n=st.integers(1, 3), m=st.integers(1, 3))
    def test_associative(self, seed, n, m):
        a = rand_matrix(seed, n, n)
        c = rand_matrix(seed + 1, m, m)
        d = rand_matrix(seed + 2, 2, 2)
        assert max_abs(kron(kron(a, c), d) - kron(a, kron(c, d))) <= 1e-12


class TestTraceInner:
    @given(seed=seeds, n=dims)
    def test_conjugate_symmetry(self, seed, n):
        a = rand_matrix(seed, n, n)
        c = rand_matrix(seed + 1, n, n)
        assert abs(trace_inner(a, c) - np.conj(trace_inner(c, a))) <= 1e-10

    @given(seed=seeds, n=dims)
    def test_equals_frobenius(self, seed, n):
        a = rand_matrix(seed, n, n)
        assert trace_inner(a, a).real == pytest.approx(
            np.linalg.norm(a, "fro") ** 2, rel=1e-12
        )

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            trace_inner(np.eye(2), np.eye(3))


class TestUnitarity:
    @given(seed=seeds, n=dims)
    @settings(max_examples=30)
    def test_random_unitary_accepted(self, seed, n):
        u = rng_unitary(np.random.default_rng(seed), n)
        assert is_unitary(u)
        assert unitary_scalar(u) == pytest.approx(1.0, abs=1e-12)

    def test_scaled_unitary(self):
        assert unitary_scalar(2.0 * np.eye(3)) == pytest.approx(4.0)

    def test_non_unitary_rejected(self):
        m = np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex)
        assert not is_unitary(m)
        assert unitary_scalar(m) is None

    def test_zero_matrix(self):
        assert unitary_scalar(np.zeros((2, 2), dtype=complex)) is None


class TestProportional:
    @given(seed=seeds, n=dims)
    def test_scalar_multiple(self, seed, n):
        a = rand_matrix(seed, n, n)
        assert proportional(a, (0.3 - 0.7j) * a)

    def test_not_proportional(self):
        assert not proportional(np.eye(2), np.diag([1.0, -1.0]))

    def test_zero_cases(self):
        z = np.zeros((2, 2), dtype=complex)
        assert proportional(z, z)
        assert not proportional(z, np.eye(2))
        assert not proportional(np.eye(2), z)


class TestCommutes:
    def test_diagonal_matrices_commute(self):
        a = np.diag([1.0, 2.0, 3.0]).astype(complex)
        c = np.diag([4.0 + 1j, 5.0, 6.0])
        assert commutes(a, c)

    def test_shift_clock_do_not(self):
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        z = np.diag([1.0, -1.0]).astype(complex)
        assert not commutes(x, z)

    def test_scale_invariant(self):
        # the residual is relative, so big commuting pairs still pass
        a = 1e8 * np.diag([1.0, 2.0]).astype(complex)
        c = 1e8 * np.diag([3.0, 4.0]).astype(complex)
        assert commutes(a, c)


class TestRegroup:
    @given(seed=seeds)
    def test_round_trip_exact(self, seed):
        a = rand_matrix(seed, 6, 6)
        # split rows as 2*3, columns as 3*2, swap the inner factors, undo
        fwd = regroup(a, (2, 3, 3, 2), (0, 2, 1, 3), (6, 6))
        back = regroup(fwd, (2, 3, 3, 2), (0, 2, 1, 3), (6, 6))
        assert np.array_equal(back, a)

    def test_kron_factor_swap(self):
        a = rand_matrix(0, 2, 2)
        c = rand_matrix(1, 3, 3)
        swapped = regroup(np.kron(a, c), (2, 3, 2, 3), (1, 0, 3, 2), (6, 6))
        assert max_abs(swapped - np.kron(c, a)) <= 1e-15

    def test_bad_product(self):
        with pytest.raises(DimensionError):
            regroup(np.eye(6), (2, 2, 3, 2), (0, 1, 2, 3), (6, 6))

    def test_bad_permutation(self):
        with pytest.raises(DimensionError):
            regroup(np.eye(6), (2, 3, 3, 2), (0, 0, 1, 3), (6, 6))

    def test_bad_output_shape(self):
        with pytest.raises(DimensionError):
            regroup(np.eye(6), (2, 3, 3, 2), (0, 2, 1, 3), (5, 7))
