"""Dense complex matrix primitives shared by every structure type.

Matrices are 2-D ``numpy.ndarray`` objects with dtype complex128. The
verification norm throughout the library is the maximum absolute entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "as_cmatrix",
    "max_abs",
    "dagger",
    "kron",
    "trace_inner",
    "is_unitary",
    "unitary_scalar",
    "proportional",
    "commutes",
    "regroup",
]


@dataclass(frozen=True)
class Tolerance:
    """Numerical slack: ``verify_tol`` for axiom checks, ``compare_tol`` for equality."""

    verify_tol: float = 1e-10
    compare_tol: float = 1e-12

    def __post_init__(self):
        if not (self.verify_tol > 0.0 and self.compare_tol > 0.0):
            raise ValueError("tolerances must be strictly positive")


DEFAULT_TOL = Tolerance()


def as_cmatrix(a) -> np.ndarray:
    """Coerce input to a finite 2-D complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got an array of rank {m.ndim}")
    if m.size and not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def _as_square(a) -> np.ndarray:
    m = as_cmatrix(a)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def max_abs(a) -> float:
    """Maximum absolute entry (the verification norm)."""
    a = np.asarray(a)
    return float(np.abs(a).max()) if a.size else 0.0


def dagger(a) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(as_cmatrix(a)).T


def kron(a, b) -> np.ndarray:
    """Kronecker product with row-major (left-factor-major) index blocks."""
    return np.kron(as_cmatrix(a), as_cmatrix(b))


def trace_inner(a, b) -> complex:
    """Trace inner product Tr(A† B) of two equal-shape matrices."""
    a, b = as_cmatrix(a), as_cmatrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    # vdot conjugates its first argument, so this is exactly sum(conj(A)*B)
    return complex(np.vdot(a, b))


def _gram_scalar(a: np.ndarray) -> tuple[float | None, float]:
    """Mean diagonal of A†A and the scaled off-scalar residual ||A†A - lam*I|| / lam."""
    g = dagger(a) @ a
    if g.shape[0] == 0:
        return None, math.inf
    lam = float(np.mean(np.diagonal(g).real))
    if lam <= 0.0:
        return None, math.inf
    res = max_abs(g - lam * np.eye(g.shape[0])) / lam
    return lam, res


def is_unitary(a, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True when A†A = AA† = I within verify_tol (max-entry norm)."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.size == 0:
        return False
    eye = np.eye(m.shape[0])
    md = np.conj(m).T
    return (
        max_abs(md @ m - eye) <= tol.verify_tol
        and max_abs(m @ md - eye) <= tol.verify_tol
    )


def unitary_scalar(a, tol: Tolerance = DEFAULT_TOL) -> float | None:
    """The scalar lam > 0 with A†A = lam*I, or None when no such scalar fits.

    lam is reported as the mean diagonal of the Gram matrix; the residual is
    measured relative to lam, so the test is scale-free.
    """
    m = _as_square(a)
    lam, res = _gram_scalar(m)
    if lam is None or res > tol.verify_tol:
        return None
    # A†A = lam*I forces AA† = lam*I for square A, no second check needed
    return lam


def proportional(a, b, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True when B = c*A for some nonzero scalar c, within verify_tol.

    Uses the Cauchy-Schwarz gap: |<A,B>|^2 >= (1 - verify_tol)*<A,A><B,B>.
    The zero matrix is proportional only to itself.
    """
    a, b = as_cmatrix(a), as_cmatrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    na = float(np.vdot(a, a).real)
    nb = float(np.vdot(b, b).real)
    if na == 0.0 or nb == 0.0:
        return na == nb
    return abs(np.vdot(a, b)) ** 2 >= (1.0 - tol.verify_tol) * na * nb


def commutes(a, b, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True when ||AB - BA|| <= verify_tol * max(1, ||A||*||B||)."""
    a, b = _as_square(a), _as_square(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    scale = max(1.0, max_abs(a) * max_abs(b))
    return max_abs(a @ b - b @ a) <= tol.verify_tol * scale


def regroup(t, axis_dims, perm, out_shape) -> np.ndarray:
    """Reshape to ``axis_dims``, permute axes by ``perm``, reshape to ``out_shape``.

    This is the workhorse for composite-index bookkeeping: splitting a flat
    row or column index into factors, reordering them, and flattening again.
    Bijective on entries, so it is exactly invertible by the inverse data.
    """
    arr = np.asarray(t, dtype=np.complex128)
    axis_dims = tuple(int(d) for d in axis_dims)
    out_shape = tuple(int(d) for d in out_shape)
    if any(d < 0 for d in axis_dims) or any(d < 0 for d in out_shape):
        raise DimensionError("axis dimensions must be nonnegative")
    if math.prod(axis_dims) != arr.size:
        raise DimensionError(
            f"axis_dims {axis_dims} give {math.prod(axis_dims)} entries, "
            f"input has {arr.size}"
        )
    if sorted(perm) != list(range(len(axis_dims))):
        raise DimensionError(f"perm {tuple(perm)} is not a permutation of the axes")
    if math.prod(out_shape) != arr.size:
        raise DimensionError(
            f"out_shape {out_shape} gives {math.prod(out_shape)} entries, "
            f"input has {arr.size}"
        )
    return arr.reshape(axis_dims).transpose(tuple(perm)).reshape(out_shape)
