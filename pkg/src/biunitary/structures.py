"""Core structure types, their verifiers, and standard generators.

Four structure families live here:

* complex Hadamard matrices (unimodular entries, orthogonal rows/columns),
* quantum Latin squares (square grids of vectors whose rows and columns
  are orthonormal bases),
* unitary error bases (n^2 unitaries orthogonal under the trace inner
  product),
* controlled families (ordered collections of any of the above indexed by
  one or more control indices).

Wrapper construction validates; a wrapped value is always a verified one.
The ``verify_*`` functions accept raw arrays as well, so candidates can be
checked without committing to a wrapper.

All indices are 0-based in memory. File I/O and command-line labels are
1-based and converted at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import InitVar, dataclass
from typing import Iterator, Sequence, Union

import numpy as np

from .errors import DimensionError, StructureError
from .linalg import DEFAULT_TOL, Tolerance, as_cmatrix, max_abs
from .report import BiunitaryReport

__all__ = [
    "LatinSquare",
    "HadamardMatrix",
    "QuantumLatinSquare",
    "UnitaryErrorBasis",
    "ControlledFamily",
    "Structure",
    "verify_hadamard",
    "verify_qls",
    "verify_ueb",
    "verify_family",
    "fourier",
    "cyclic_latin",
    "qls_from_latin",
    "pauli_ueb",
]


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, copy=True)
    out.setflags(write=False)
    return out


def _structural_failure(reason: str) -> BiunitaryReport:
    return BiunitaryReport(
        vertical_ok=False,
        horizontal_ok=False,
        lam=None,
        worst_residual=math.inf,
        detail={"structure": math.inf},
        failed=("structure",),
        note=reason,
    )


def _build_report(
    vertical: dict[str, float],
    horizontal: dict[str, float],
    lam: float,
    tol: Tolerance,
) -> BiunitaryReport:
    detail = {**vertical, **horizontal}
    failed = tuple(k for k, v in detail.items() if v > tol.verify_tol)
    v_ok = all(v <= tol.verify_tol for v in vertical.values())
    h_ok = all(v <= tol.verify_tol for v in horizontal.values())
    return BiunitaryReport(
        vertical_ok=v_ok,
        horizontal_ok=h_ok,
        lam=lam if h_ok else None,
        worst_residual=max(detail.values(), default=0.0),
        detail=detail,
        failed=failed,
    )


# ---------------------------------------------------------------------------
# verifiers
# ---------------------------------------------------------------------------


def verify_hadamard(h, tol: Tolerance = DEFAULT_TOL) -> BiunitaryReport:
    """Check the complex Hadamard axioms on a square matrix.

    Axioms (n = side length), all in the max-entry norm:

    * ``unimodular``: |H_ij|^2 = 1 for every entry,
    * ``rows``:  H H† = n I,
    * ``cols``:  H† H = n I.
    """
    if isinstance(h, HadamardMatrix):
        h = h.matrix
    try:
        m = as_cmatrix(h)
    except (ValueError, DimensionError) as exc:
        return _structural_failure(str(exc))
    n = m.shape[0]
    if m.shape[1] != n or n == 0:
        return _structural_failure(f"expected a nonempty square matrix, got {m.shape}")
    eye = n * np.eye(n)
    vertical = {"unimodular": max_abs(m * np.conj(m) - 1.0)}
    horizontal = {
        "rows": max_abs(m @ np.conj(m).T - eye),
        "cols": max_abs(np.conj(m).T @ m - eye),
    }
    return _build_report(vertical, horizontal, float(n), tol)


def verify_qls(q, tol: Tolerance = DEFAULT_TOL) -> BiunitaryReport:
    """Check the quantum Latin square axioms on an (n, n, n) grid of vectors.

    ``grid[a, b]`` is the vector in row a, column b. Axioms:

    * ``rows``: each row is an orthonormal basis of C^n,
    * ``cols``: each column is an orthonormal basis of C^n.
    """
    if isinstance(q, QuantumLatinSquare):
        q = q.grid
    try:
        g = np.asarray(q, dtype=np.complex128)
    except (ValueError, TypeError) as exc:
        return _structural_failure(f"ragged or non-numeric grid ({exc})")
    if g.ndim != 3 or g.shape[0] == 0 or g.shape != (g.shape[0],) * 3:
        return _structural_failure(f"expected an (n, n, n) grid, got {g.shape}")
    if not np.all(np.isfinite(g)):
        return _structural_failure("grid entries must be finite")
    n = g.shape[0]
    eye = np.eye(n)
    row_gram = np.einsum("abi,aci->abc", np.conj(g), g)
    col_gram = np.einsum("abi,cbi->bac", np.conj(g), g)
    vertical = {"rows": max_abs(row_gram - eye)}
    horizontal = {"cols": max_abs(col_gram - eye)}
    return _build_report(vertical, horizontal, 1.0, tol)


def verify_ueb(u, tol: Tolerance = DEFAULT_TOL) -> BiunitaryReport:
    """Check the unitary error basis axioms on a stack of n^2 matrices.

    Axioms:

    * ``unitary``: every element U_a satisfies U_a† U_a = U_a U_a† = I,
    * ``trace_gram``: Tr(U_a† U_b) = n * delta_ab.
    """
    if isinstance(u, UnitaryErrorBasis):
        u = u.elements
    try:
        s = _stack_matrices(u)
    except (ValueError, TypeError, DimensionError) as exc:
        return _structural_failure(f"ragged or non-numeric element stack ({exc})")
    if s.ndim != 3 or s.shape[1] != s.shape[2] or s.shape[1] == 0:
        return _structural_failure(f"expected a (k, n, n) stack, got {s.shape}")
    if not np.all(np.isfinite(s)):
        return _structural_failure("element entries must be finite")
    k, n = s.shape[0], s.shape[1]
    if k != n * n:
        return _structural_failure(f"{k} elements given, dimension {n} needs {n * n}")
    eye = np.eye(n)
    left = np.einsum("aij,aik->ajk", np.conj(s), s)
    right = np.einsum("aij,akj->aik", s, np.conj(s))
    vertical = {
        "unitary": max(max_abs(left - eye), max_abs(right - eye)),
    }
    flat = s.reshape(k, n * n)
    trace_gram = np.conj(flat) @ flat.T
    horizontal = {"trace_gram": max_abs(trace_gram - n * np.eye(k))}
    return _build_report(vertical, horizontal, float(n), tol)


_KIND_VERIFIERS = {}


def verify_family(
    f,
    tol: Tolerance = DEFAULT_TOL,
    *,
    kind: str | None = None,
    control_dims: Sequence[int] | None = None,
) -> BiunitaryReport:
    """Check every item of a controlled family with its base verifier.

    Accepts either a ``ControlledFamily`` or a raw sequence of item payloads
    together with ``kind`` ("hadamard", "qls" or "ueb") and optionally
    ``control_dims`` (defaults to a single control of size len(items)).
    Detail keys are prefixed with the 1-based control index of the item,
    for example ``item(2,1).rows``.
    """
    if isinstance(f, ControlledFamily):
        items = [it.payload for it in f.items]
        kind = f.base_kind
        control_dims = f.control_dims
    else:
        if kind is None:
            raise ValueError("kind is required when verifying a raw item sequence")
        items = list(f)
        if control_dims is None:
            control_dims = (len(items),)
    if kind not in _KIND_VERIFIERS:
        raise ValueError(f"unknown family kind {kind!r}")
    control_dims = tuple(int(d) for d in control_dims)
    if any(d < 1 for d in control_dims):
        return _structural_failure(f"control dims must be positive, got {control_dims}")
    if math.prod(control_dims) != len(items):
        return _structural_failure(
            f"control dims {control_dims} require {math.prod(control_dims)} items, "
            f"got {len(items)}"
        )
    verifier = _KIND_VERIFIERS[kind]
    detail: dict[str, float] = {}
    vertical_ok = horizontal_ok = True
    failed: list[str] = []
    lam: float | None = None
    lam_consistent = True
    worst = 0.0
    for i, item in enumerate(items):
        label = "item(" + ",".join(
            str(c + 1) for c in np.unravel_index(i, control_dims)
        ) + ")"
        rep = verifier(item, tol)
        vertical_ok &= rep.vertical_ok
        horizontal_ok &= rep.horizontal_ok
        worst = max(worst, rep.worst_residual)
        for k, v in rep.detail.items():
            detail[f"{label}.{k}"] = v
        failed.extend(f"{label}.{k}" for k in rep.failed)
        if rep.lam is not None:
            if lam is None:
                lam = rep.lam
            elif rep.lam != lam:
                lam_consistent = False
    horizontal_ok = horizontal_ok and lam is not None and lam_consistent
    if not lam_consistent:
        failed.append("lambda_consistent")
        detail["lambda_consistent"] = math.inf
        worst = math.inf
    return BiunitaryReport(
        vertical_ok=bool(vertical_ok),
        horizontal_ok=bool(horizontal_ok),
        lam=lam if horizontal_ok else None,
        worst_residual=worst,
        detail=detail,
        failed=tuple(failed),
    )


def _stack_matrices(u) -> np.ndarray:
    if isinstance(u, np.ndarray):
        return np.asarray(u, dtype=np.complex128)
    return np.asarray([as_cmatrix(m) for m in u], dtype=np.complex128)


# ---------------------------------------------------------------------------
# wrapper types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LatinSquare:
    """An n x n array of symbols 0..n-1, each exactly once per row and column."""

    cells: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.cells)
        if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] == 0:
            raise StructureError(f"expected a nonempty square cell array, got {c.shape}")
        if not np.issubdtype(c.dtype, np.integer):
            raise StructureError("cells must be integers")
        n = c.shape[0]
        want = np.arange(n)
        for axis, name in ((1, "row"), (0, "column")):
            sorted_lines = np.sort(c, axis=axis)
            expect = want[None, :] if axis == 1 else want[:, None]
            if not np.array_equal(sorted_lines, np.broadcast_to(expect, c.shape)):
                raise StructureError(f"some {name} is not a permutation of 0..{n - 1}")
        object.__setattr__(self, "cells", _freeze(c.astype(np.int64)))

    @property
    def n(self) -> int:
        return self.cells.shape[0]

    @property
    def payload(self) -> np.ndarray:
        return self.cells


@dataclass(frozen=True, eq=False)
class HadamardMatrix:
    """A verified complex Hadamard matrix."""

    matrix: np.ndarray
    tol: InitVar[Tolerance | None] = None

    def __post_init__(self, tol):
        m = _freeze(as_cmatrix(self.matrix))
        object.__setattr__(self, "matrix", m)
        rep = verify_hadamard(m, tol or DEFAULT_TOL)
        if not rep.passed:
            raise StructureError(f"not a complex Hadamard matrix: {rep.summary()}")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def payload(self) -> np.ndarray:
        return self.matrix

    def __array__(self, dtype=None, copy=None):
        return self.matrix.astype(dtype) if dtype is not None else self.matrix


@dataclass(frozen=True, eq=False)
class QuantumLatinSquare:
    """A verified quantum Latin square; ``grid[a, b]`` is the vector at (a, b)."""

    grid: np.ndarray
    tol: InitVar[Tolerance | None] = None

    def __post_init__(self, tol):
        g = np.asarray(self.grid, dtype=np.complex128)
        object.__setattr__(self, "grid", _freeze(g))
        rep = verify_qls(self.grid, tol or DEFAULT_TOL)
        if not rep.passed:
            raise StructureError(f"not a quantum Latin square: {rep.summary()}")

    @property
    def n(self) -> int:
        return self.grid.shape[0]

    @property
    def payload(self) -> np.ndarray:
        return self.grid

    def vector(self, a: int, b: int) -> np.ndarray:
        return self.grid[a, b]


@dataclass(frozen=True, eq=False)
class UnitaryErrorBasis:
    """A verified unitary error basis stored as an (n^2, n, n) stack."""

    elements: np.ndarray
    tol: InitVar[Tolerance | None] = None

    def __post_init__(self, tol):
        s = _stack_matrices(self.elements)
        object.__setattr__(self, "elements", _freeze(s))
        rep = verify_ueb(self.elements, tol or DEFAULT_TOL)
        if not rep.passed:
            raise StructureError(f"not a unitary error basis: {rep.summary()}")

    @property
    def n(self) -> int:
        return self.elements.shape[1]

    @property
    def count(self) -> int:
        return self.elements.shape[0]

    @property
    def payload(self) -> np.ndarray:
        return self.elements

    def __len__(self) -> int:
        return self.count

    def __getitem__(self, i: int) -> np.ndarray:
        return self.elements[i]

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self.elements)


BaseStructure = Union[HadamardMatrix, QuantumLatinSquare, UnitaryErrorBasis]

_BASE_KINDS = {
    HadamardMatrix: "hadamard",
    QuantumLatinSquare: "qls",
    UnitaryErrorBasis: "ueb",
}

_KIND_VERIFIERS.update(
    {"hadamard": verify_hadamard, "qls": verify_qls, "ueb": verify_ueb}
)


@dataclass(frozen=True, eq=False)
class ControlledFamily:
    """An ordered collection of equal-kind structures under control indices.

    Items are stored flat in row-major order over ``control_dims``. Each item
    is an already-verified wrapper, so family construction only has to check
    counts and uniformity.
    """

    control_dims: tuple[int, ...]
    items: tuple[BaseStructure, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.control_dims)
        items = tuple(self.items)
        if not dims or any(d < 1 for d in dims):
            raise StructureError(f"control dims must be positive, got {dims}")
        if math.prod(dims) != len(items):
            raise StructureError(
                f"control dims {dims} require {math.prod(dims)} items, got {len(items)}"
            )
        kinds = {type(it) for it in items}
        if not kinds <= set(_BASE_KINDS) or len(kinds) != 1:
            raise StructureError("items must all be the same base structure type")
        base_dims = {it.n for it in items}
        if len(base_dims) != 1:
            raise StructureError(f"items have mixed dimensions {sorted(base_dims)}")
        object.__setattr__(self, "control_dims", dims)
        object.__setattr__(self, "items", items)

    @classmethod
    def constant(
        cls, structure: BaseStructure, control_dims: Sequence[int]
    ) -> "ControlledFamily":
        dims = tuple(int(d) for d in control_dims)
        return cls(dims, (structure,) * math.prod(dims))

    @property
    def base_kind(self) -> str:
        return _BASE_KINDS[type(self.items[0])]

    @property
    def base_dimension(self) -> int:
        return self.items[0].n

    def item(self, *index: int) -> BaseStructure:
        if len(index) != len(self.control_dims):
            raise DimensionError(
                f"expected {len(self.control_dims)} control indices, got {len(index)}"
            )
        try:
            flat = int(np.ravel_multi_index(index, self.control_dims))
        except ValueError:
            raise IndexError(
                f"control index {index} out of range for {self.control_dims}"
            ) from None
        return self.items[flat]

    def stack(self) -> np.ndarray:
        """All payloads as one array, control axes first."""
        base_shape = self.items[0].payload.shape
        flat = np.stack([it.payload for it in self.items])
        return flat.reshape(self.control_dims + base_shape)


Structure = Union[BaseStructure, LatinSquare, ControlledFamily]


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def _roots_of_unity(n: int) -> np.ndarray:
    """exp(2 pi i k / n) for k in 0..n-1, exact at the quarter points."""
    w = np.exp(2j * np.pi * np.arange(n) / n)
    w[0] = 1.0
    if n % 2 == 0:
        w[n // 2] = -1.0
    if n % 4 == 0:
        w[n // 4] = 1j
        w[3 * n // 4] = -1j
    return w


def _check_dim(n: int) -> int:
    n = int(n)
    if n < 1:
        raise DimensionError(f"dimension must be at least 1, got {n}")
    return n


def fourier(n: int) -> HadamardMatrix:
    """The n x n Fourier matrix F[j, k] = exp(2 pi i j k / n)."""
    n = _check_dim(n)
    w = _roots_of_unity(n)
    return HadamardMatrix(w[np.outer(np.arange(n), np.arange(n)) % n])


def cyclic_latin(n: int) -> LatinSquare:
    """The addition table of Z_n: cell (a, b) holds (a + b) mod n."""
    n = _check_dim(n)
    a = np.arange(n)
    return LatinSquare((a[:, None] + a[None, :]) % n)


def qls_from_latin(latin: LatinSquare) -> QuantumLatinSquare:
    """Lift a Latin square to the quantum Latin square of basis vectors."""
    grid = np.eye(latin.n, dtype=np.complex128)[latin.cells]
    return QuantumLatinSquare(grid)


def pauli_ueb(n: int) -> UnitaryErrorBasis:
    """The shift-and-clock basis {X^a Z^b} with X the cyclic shift, Z the clock.

    Element order is a-major: index a*n + b. Entries are exact, built from
    the snapped root-of-unity table rather than matrix powers.
    """
    n = _check_dim(n)
    w = _roots_of_unity(n)
    cols = np.arange(n)
    elems = np.zeros((n * n, n, n), dtype=np.complex128)
    for a in range(n):
        rows = (cols + a) % n
        for b in range(n):
            elems[a * n + b, rows, cols] = w[(b * cols) % n]
    return UnitaryErrorBasis(elems)
