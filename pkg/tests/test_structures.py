import numpy as np
import pytest

from biunitary import (
    ControlledFamily,
    HadamardMatrix,
    LatinSquare,
    QuantumLatinSquare,
    StructureError,
    Tolerance,
    UnitaryErrorBasis,
    cyclic_latin,
    fourier,
    pauli_ueb,
    proportional,
    qls_from_latin,
    reference_inputs,
    verify_family,
    verify_hadamard,
    verify_qls,
    verify_ueb,
)


class TestVerifyHadamard:
    @pytest.mark.parametrize("n", range(1, 9))
    def test_fourier_passes(self, n):
        r = verify_hadamard(fourier(n))
        assert r.passed and r.lam == float(n)
        assert r.worst_residual <= 1e-12

    def test_real_hadamard(self):
        h = np.array([[1, 1], [1, -1]], dtype=complex)
        assert verify_hadamard(h).passed

    def test_non_unimodular_fails(self):
        r = verify_hadamard(2.0 * np.ones((2, 2)))
        assert not r.passed and "unimodular" in r.failed

    def test_non_orthogonal_rows_fail(self):
        r = verify_hadamard(np.ones((2, 2)))
        assert not r.passed
        assert "rows" in r.failed and "cols" in r.failed

    def test_non_square_is_structural_failure(self):
        r = verify_hadamard(np.ones((2, 3)))
        assert not r.passed and r.note != ""

    def test_report_detail_keys(self):
        r = verify_hadamard(fourier(3))
        assert set(r.detail) == {"unimodular", "rows", "cols"}


class TestLatinSquare:
    def test_cyclic(self):
        sq = cyclic_latin(4)
        assert sq.n == 4
        assert sq.cells[0].tolist() == [0, 1, 2, 3]
        assert sq.cells[1].tolist() == [1, 2, 3, 0]

    def test_rejects_repeat_in_row(self):
        with pytest.raises(StructureError):
            LatinSquare([[0, 0], [1, 1]])

    def test_rejects_repeat_in_column(self):
        with pytest.raises(StructureError):
            LatinSquare([[0, 1], [0, 1]])

    def test_rejects_out_of_range(self):
        with pytest.raises(StructureError):
            LatinSquare([[0, 2], [2, 0]])

    def test_rejects_non_square(self):
        with pytest.raises(StructureError):
            LatinSquare([[0, 1, 2], [1, 2, 0]])


class TestVerifyQls:
    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_classical_latin_passes(self, n):
        r = verify_qls(qls_from_latin(cyclic_latin(n)))
        assert r.passed and r.lam == 1.0

    def test_reference_p_passes(self):
        r = verify_qls(reference_inputs().p)
        assert r.passed and r.worst_residual <= 1e-15

    def test_broken_row_fails(self):
        g = qls_from_latin(cyclic_latin(3)).grid.copy()
        g[0, 1] = g[0, 0]  # duplicate vector in a row
        r = verify_qls(g)
        assert not r.passed and "rows" in r.failed

    def test_wrong_rank_is_structural_failure(self):
        assert not verify_qls(np.ones((3, 3))).passed


class TestVerifyUeb:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_pauli_passes(self, n):
        r = verify_ueb(pauli_ueb(n))
        assert r.passed and r.lam == float(n)

    def test_wrong_count_is_structural_failure(self):
        u = pauli_ueb(2).elements[:3]
        r = verify_ueb(u)
        assert not r.passed and r.note != ""

    def test_non_unitary_element_fails(self):
        e = pauli_ueb(2).elements.copy()
        e[1] = [[1, 1], [0, 1]]
        r = verify_ueb(e)
        assert not r.passed and "unitary" in r.failed

    def test_non_orthogonal_fails(self):
        e = pauli_ueb(2).elements.copy()
        e[1] = e[0]
        r = verify_ueb(e)
        assert not r.passed and "trace_gram" in r.failed


class TestVerifyFamily:
    def test_hadamard_family_passes(self):
        fam = ControlledFamily.constant(fourier(3), (2, 2))
        r = verify_family(fam)
        assert r.passed and r.lam == 3.0

    def test_raw_items_accepted(self):
        items = [fourier(2).matrix, np.array([[1, 1], [1, -1]], dtype=complex)]
        r = verify_family(items, kind="hadamard", control_dims=(2,))
        assert r.passed

    def test_failure_names_the_item(self):
        items = [fourier(2).matrix, np.eye(2, dtype=complex)]
        r = verify_family(items, kind="hadamard", control_dims=(2,))
        assert not r.passed
        assert any(k.startswith("item(2)") for k in r.failed)

    def test_multi_index_item_naming(self):
        items = [fourier(2).matrix] * 4
        items[2] = np.eye(2, dtype=complex)
        r = verify_family(items, kind="hadamard", control_dims=(2, 2))
        assert any(k.startswith("item(2,1)") for k in r.failed)

    def test_mixed_lambda_fails(self):
        # a dim-2 and a dim-3 Hadamard cannot share one family
        items = [fourier(2).matrix, fourier(3).matrix]
        r = verify_family(items, kind="hadamard", control_dims=(2,))
        assert not r.passed and "lambda_consistent" in r.failed


class TestWrappers:
    def test_hadamard_rejects_bad_matrix(self):
        with pytest.raises(StructureError) as exc:
            HadamardMatrix(np.ones((2, 2)))
        assert "fail" in str(exc.value)

    def test_qls_rejects_bad_grid(self):
        with pytest.raises(StructureError):
            QuantumLatinSquare(np.ones((2, 2, 2)))

    def test_ueb_rejects_bad_elements(self):
        with pytest.raises(StructureError):
            UnitaryErrorBasis(np.ones((4, 2, 2)))

    def test_loose_tolerance_admits(self):
        m = fourier(2).matrix.copy()
        m[0, 0] += 1e-6
        with pytest.raises(StructureError):
            HadamardMatrix(m)
        loose = Tolerance(verify_tol=1e-3, compare_tol=1e-12)
        assert HadamardMatrix(m, tol=loose).n == 2

    def test_payload_is_read_only(self):
        h = fourier(2)
        with pytest.raises(ValueError):
            h.matrix[0, 0] = 0.0

    def test_array_conversion(self):
        h = fourier(2)
        assert np.array_equal(np.asarray(h), h.matrix)

    def test_ueb_count(self):
        u = pauli_ueb(3)
        assert u.count == 9 and u.n == 3


class TestControlledFamily:
    def test_constant(self):
        fam = ControlledFamily.constant(fourier(2), (3,))
        assert fam.control_dims == (3,)
        assert fam.base_kind == "hadamard"
        assert fam.base_dimension == 2
        assert np.array_equal(fam.item(1).matrix, fourier(2).matrix)

    def test_item_multi_index(self):
        items = [HadamardMatrix(fourier(2)) for _ in range(4)]
        fam = ControlledFamily((2, 2), items)
        assert fam.item(1, 1) is items[3]

    def test_item_out_of_range(self):
        fam = ControlledFamily.constant(fourier(2), (2,))
        with pytest.raises(IndexError):
            fam.item(2)

    def test_stack_shape(self):
        fam = ControlledFamily.constant(pauli_ueb(2), (3, 2))
        assert fam.stack().shape == (3, 2, 4, 2, 2)

    def test_count_mismatch(self):
        with pytest.raises(StructureError):
            ControlledFamily((3,), [fourier(2), fourier(2)])

    def test_mixed_kinds_rejected(self):
        with pytest.raises(StructureError):
            ControlledFamily((2,), [fourier(2), qls_from_latin(cyclic_latin(2))])

    def test_mixed_dimension_rejected(self):
        with pytest.raises(StructureError):
            ControlledFamily((2,), [fourier(2), fourier(3)])


class TestGenerators:
    def test_fourier4_matches_reference_hadamard_exactly(self):
        assert np.array_equal(fourier(4).matrix, reference_inputs().hadamard.matrix)

    def test_fourier2_exact(self):
        assert np.array_equal(
            fourier(2).matrix, np.array([[1, 1], [1, -1]], dtype=complex)
        )

    def test_fourier1(self):
        assert np.array_equal(fourier(1).matrix, np.ones((1, 1), dtype=complex))

    def test_fourier_rejects_nonpositive(self):
        with pytest.raises(Exception):
            fourier(0)

    def test_pauli2_spans_reference_basis(self):
        # same four one-qubit matrices up to scalars, in some order
        v = reference_inputs().basis.elements
        p = pauli_ueb(2).elements
        for m in v:
            assert any(proportional(m, q) for q in p)

    def test_pauli_entries_exact(self):
        p = pauli_ueb(2).elements
        assert np.array_equal(p[0], np.eye(2))
        assert np.array_equal(p[1], np.diag([1.0, -1.0]))
        assert np.array_equal(p[2], np.array([[0, 1], [1, 0]], dtype=complex))

    def test_qls_from_latin_grid(self):
        q = qls_from_latin(cyclic_latin(2))
        assert np.array_equal(q.grid[1, 0], [0.0, 1.0])
