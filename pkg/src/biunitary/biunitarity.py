"""Quarter-rotation checks: unitarity up to a scalar in the horizontal direction.

A structure is biunitary when it is unitary vertically and unitary up to a
positive scalar lambda horizontally. The rotation checks below recover
lambda numerically (as the mean diagonal of the relevant Gram matrix) and
compare it against the closed-form value: n for Hadamard matrices and
unitary error bases, 1 for quantum Latin squares.
"""

from __future__ import annotations

import math

import numpy as np

from .linalg import DEFAULT_TOL, Tolerance, _gram_scalar, as_cmatrix, max_abs, regroup
from .report import BiunitaryReport
from .structures import (
    HadamardMatrix,
    QuantumLatinSquare,
    UnitaryErrorBasis,
    _stack_matrices,
    _structural_failure,
)

__all__ = ["hadamard_rotation_check", "qls_rotation_check", "ueb_rotation_check"]


def _rotation_report(
    vertical: dict[str, float],
    lam_hat: float | None,
    gram_residual: float,
    lam_expected: float,
    tol: Tolerance,
) -> BiunitaryReport:
    detail = dict(vertical)
    detail["rotation"] = gram_residual
    if lam_hat is None:
        drift = math.inf
    else:
        drift = abs(lam_hat / lam_expected - 1.0)
    detail["lambda_drift"] = drift
    v_ok = all(v <= tol.verify_tol for v in vertical.values())
    h_ok = (
        lam_hat is not None
        and gram_residual <= tol.verify_tol
        and drift <= tol.verify_tol
    )
    failed = tuple(k for k, v in detail.items() if v > tol.verify_tol)
    return BiunitaryReport(
        vertical_ok=v_ok,
        horizontal_ok=bool(h_ok),
        lam=lam_hat if h_ok else None,
        worst_residual=max(detail.values()),
        detail=detail,
        failed=failed,
    )


def hadamard_rotation_check(h, tol: Tolerance = DEFAULT_TOL) -> BiunitaryReport:
    """Vertical: unimodular entries. Horizontal: both quarter rotations
    proportional to unitaries with the same scalar, lambda = n."""
    if isinstance(h, HadamardMatrix):
        h = h.matrix
    try:
        m = as_cmatrix(h)
    except (ValueError, TypeError) as exc:
        return _structural_failure(str(exc))
    n = m.shape[0]
    if m.shape[1] != n or n == 0:
        return _structural_failure(f"expected a nonempty square matrix, got {m.shape}")
    vertical = {"unimodular": max_abs(m * np.conj(m) - 1.0)}
    lam_cw, res_cw = _gram_scalar(m)
    lam_ccw, res_ccw = _gram_scalar(np.conj(m).T)
    if lam_cw is None or lam_ccw is None:
        return _rotation_report(vertical, None, math.inf, float(n), tol)
    lam_hat = 0.5 * (lam_cw + lam_ccw)
    return _rotation_report(vertical, lam_hat, max(res_cw, res_ccw), float(n), tol)


def qls_rotation_check(q, tol: Tolerance = DEFAULT_TOL) -> BiunitaryReport:
    """Vertical: rows orthonormal. Horizontal: columns orthonormal up to
    lambda, expected lambda = 1."""
    if isinstance(q, QuantumLatinSquare):
        q = q.grid
    g = np.asarray(q, dtype=np.complex128)
    if g.ndim != 3 or g.shape[0] == 0 or g.shape != (g.shape[0],) * 3:
        return _structural_failure(f"expected an (n, n, n) grid, got {g.shape}")
    n = g.shape[0]
    eye = np.eye(n)
    row_gram = np.einsum("abi,aci->abc", np.conj(g), g)
    vertical = {"rows": max_abs(row_gram - eye)}
    col_gram = np.einsum("abi,cbi->bac", np.conj(g), g)
    diag = np.einsum("baa->ba", col_gram).real
    lam_hat = float(diag.mean())
    if lam_hat <= 0.0:
        return _rotation_report(vertical, None, math.inf, 1.0, tol)
    res = max_abs(col_gram - lam_hat * eye) / lam_hat
    return _rotation_report(vertical, lam_hat, res, 1.0, tol)


def ueb_rotation_check(u, tol: Tolerance = DEFAULT_TOL) -> BiunitaryReport:
    """Vertical: each element unitary. Horizontal: the (n^2, n^2) matrix of
    flattened elements proportional to a unitary, expected lambda = n."""
    if isinstance(u, UnitaryErrorBasis):
        u = u.elements
    try:
        s = _stack_matrices(u)
    except (ValueError, TypeError) as exc:
        return _structural_failure(f"ragged or non-numeric element stack ({exc})")
    if s.ndim != 3 or s.shape[1] != s.shape[2] or s.shape[1] == 0:
        return _structural_failure(f"expected a (k, n, n) stack, got {s.shape}")
    k, n = s.shape[0], s.shape[1]
    if k != n * n:
        return _structural_failure(f"{k} elements given, dimension {n} needs {n * n}")
    eye = np.eye(n)
    left = np.einsum("aij,aik->ajk", np.conj(s), s)
    right = np.einsum("aij,akj->aik", s, np.conj(s))
    vertical = {"unitary": max(max_abs(left - eye), max_abs(right - eye))}
    flat = regroup(s, (k, n, n), (0, 1, 2), (k, n * n))
    lam_hat, res = _gram_scalar(flat)
    return _rotation_report(vertical, lam_hat, res, float(n), tol)
