"""Diagonal composition constructions.

Every operation here composes verified structures into a new one by a single
tensor contraction. Composite indices written as pairs (x, y) flatten with
the leftmost factor major: (x, y) maps to x * dim_y + y. The swap of
independent wires (the interchanger) is absorbed into this index ordering,
so no explicit permutation matrices appear.

Outputs are wrapped (and therefore re-verified) before being returned, so a
construction either produces a valid structure or raises.
"""

from __future__ import annotations

import math
import string
from typing import Sequence

import numpy as np

from .errors import DimensionError
from .linalg import Tolerance
from .structures import (
    ControlledFamily,
    HadamardMatrix,
    QuantumLatinSquare,
    UnitaryErrorBasis,
)

__all__ = [
    "had_had_to_qls",
    "ueb_ueb_to_qls",
    "hosoya_suzuki",
    "dita",
    "controlled_ueb_tensor",
    "qsm",
    "triple_hadamard_ueb",
    "ternary_a",
    "ternary_b",
    "ternary_c",
    "ternary_d",
    "quad_a",
    "octo_b",
    "f_family",
    "CONSTRUCTIONS",
]


def _want(x, cls, name):
    if isinstance(x, cls):
        return x
    try:
        return cls(x)
    except (TypeError, ValueError) as exc:
        raise DimensionError(f"{name}: expected {cls.__name__}, got {type(x).__name__} ({exc})") from exc


def _want_family(fam, name, *, kind, control_dims=None, base_dim=None) -> ControlledFamily:
    if not isinstance(fam, ControlledFamily):
        raise DimensionError(f"{name}: expected a ControlledFamily, got {type(fam).__name__}")
    if fam.base_kind != kind:
        raise DimensionError(f"{name}: expected a family of {kind}, got {fam.base_kind}")
    if control_dims is not None and fam.control_dims != tuple(control_dims):
        raise DimensionError(
            f"{name}: expected control dims {tuple(control_dims)}, got {fam.control_dims}"
        )
    if base_dim is not None and fam.base_dimension != base_dim:
        raise DimensionError(
            f"{name}: expected base dimension {base_dim}, got {fam.base_dimension}"
        )
    return fam


# ---------------------------------------------------------------------------
# binary constructions
# ---------------------------------------------------------------------------


def had_had_to_qls(h, j, tol: Tolerance | None = None) -> QuantumLatinSquare:
    """Two n-dim Hadamards give an n-dim quantum Latin square.

    Q[a, b, c] = H[a, c] * J[c, b] / sqrt(n)
    """
    h = _want(h, HadamardMatrix, "h")
    j = _want(j, HadamardMatrix, "j")
    if h.n != j.n:
        raise DimensionError(f"dimension mismatch: h is {h.n}, j is {j.n}")
    grid = np.einsum("ac,cb->abc", h.matrix, j.matrix) / math.sqrt(h.n)
    return QuantumLatinSquare(grid, tol=tol)


def ueb_ueb_to_qls(u, v, tol: Tolerance | None = None) -> QuantumLatinSquare:
    """Two n-dim unitary error bases give an n^2-dim quantum Latin square.

    Q[a, b, (c, d)] = sum_k U[a][c, k] * V[b][k, d] / sqrt(n)
    with a, b element indices in [n^2] and c, d, k in [n].
    """
    u = _want(u, UnitaryErrorBasis, "u")
    v = _want(v, UnitaryErrorBasis, "v")
    if u.n != v.n:
        raise DimensionError(f"dimension mismatch: u is {u.n}, v is {v.n}")
    n = u.n
    grid = np.einsum("ack,bkd->abcd", u.elements, v.elements) / math.sqrt(n)
    return QuantumLatinSquare(grid.reshape(n * n, n * n, n * n), tol=tol)


def hosoya_suzuki(j, k, tol: Tolerance | None = None) -> HadamardMatrix:
    """An m-controlled family of Had_n and an n-controlled family of Had_m
    give an nm-dim Hadamard.

    H[(a, b), (c, d)] = J^b[a, c] * K^c[b, d]
    with a, c in [n] and b, d in [m].
    """
    j = _want_family(j, "j", kind="hadamard")
    if len(j.control_dims) != 1:
        raise DimensionError(f"j: expected one control index, got {j.control_dims}")
    n, m = j.base_dimension, j.control_dims[0]
    k = _want_family(k, "k", kind="hadamard", control_dims=(n,), base_dim=m)
    out = np.einsum("bac,cbd->abcd", j.stack(), k.stack())
    return HadamardMatrix(out.reshape(n * m, n * m), tol=tol)


def dita(j, k, tol: Tolerance | None = None) -> HadamardMatrix:
    """Special case of hosoya_suzuki with the left family constant at J."""
    j = _want(j, HadamardMatrix, "j")
    k = _want_family(k, "k", kind="hadamard", control_dims=(j.n,))
    lifted = ControlledFamily.constant(j, (k.base_dimension,))
    return hosoya_suzuki(lifted, k, tol=tol)


def controlled_ueb_tensor(v, w, tol: Tolerance | None = None) -> UnitaryErrorBasis:
    """An m^2-controlled family of UEB_n and a UEB_m give a UEB_nm.

    U[(a, b)][(c, d), (e, f)] = V^b[a][d, e] * W[b][c, f]
    with a in [n^2], b in [m^2], c, f in [m], d, e in [n].
    """
    w = _want(w, UnitaryErrorBasis, "w")
    m = w.n
    v = _want_family(v, "v", kind="ueb", control_dims=(m * m,))
    n = v.base_dimension
    out = np.einsum("bade,bcf->abcdef", v.stack(), w.elements)
    return UnitaryErrorBasis(out.reshape(n * n * m * m, m * n, n * m), tol=tol)


def qsm(h, q, tol: Tolerance | None = None) -> UnitaryErrorBasis:
    """Shift-and-multiply: an n-controlled Hadamard family and a QLS_n give a UEB_n.

    U[(a, b)][c, d] = H^b[a, d] * Q[b, d, c]
    """
    q = _want(q, QuantumLatinSquare, "q")
    n = q.n
    h = _want_family(h, "h", kind="hadamard", control_dims=(n,), base_dim=n)
    out = np.einsum("bad,bdc->abcd", h.stack(), q.grid)
    return UnitaryErrorBasis(out.reshape(n * n, n, n), tol=tol)


def triple_hadamard_ueb(h, f, g, tol: Tolerance | None = None) -> UnitaryErrorBasis:
    """An n-controlled Hadamard family plus two n-dim Hadamards give a UEB_n.

    U[(a, b)][c, d] = H^b[a, d] * F[b, c] * G[c, d] / sqrt(n)

    Evaluated in factored form (F and G combine into a QLS grid first), so
    the result is bit-identical to qsm(h, had_had_to_qls(f, g)).
    """
    f = _want(f, HadamardMatrix, "f")
    g = _want(g, HadamardMatrix, "g")
    if f.n != g.n:
        raise DimensionError(f"dimension mismatch: f is {f.n}, g is {g.n}")
    n = f.n
    h = _want_family(h, "h", kind="hadamard", control_dims=(n,), base_dim=n)
    grid = np.einsum("ac,cb->abc", f.matrix, g.matrix) / math.sqrt(n)
    out = np.einsum("bad,bdc->abcd", h.stack(), grid)
    return UnitaryErrorBasis(out.reshape(n * n, n, n), tol=tol)


# ---------------------------------------------------------------------------
# ternary constructions
# ---------------------------------------------------------------------------


def ternary_a(h, v, q, tol: Tolerance | None = None) -> UnitaryErrorBasis:
    """(m^2, n)-controlled Had_n + (n, n)-controlled UEB_m + QLS_n give UEB_nm.

    U[(a, b, c)][(d, e), (f, g)] = H^(b,c)[a, f] * V^(c,f)[b][e, g] * Q[c, f, d]
    with a, c, d, f in [n], b in [m^2], e, g in [m].
    """
    q = _want(q, QuantumLatinSquare, "q")
    n = q.n
    v = _want_family(v, "v", kind="ueb", control_dims=(n, n))
    m = v.base_dimension
    h = _want_family(h, "h", kind="hadamard", control_dims=(m * m, n), base_dim=n)
    out = np.einsum(
        "bcaf,cfbeg,cfd->abcdefg", h.stack(), v.stack(), q.grid, optimize=True
    )
    nm = n * m
    return UnitaryErrorBasis(out.reshape(nm * nm, nm, nm), tol=tol)


def ternary_b(h, p, q, tol: Tolerance | None = None) -> UnitaryErrorBasis:
    """(n, m)-controlled Had_nm + (m, m)-controlled QLS_n + QLS_m give UEB_nm.

    U[(a, b, c)][(d, e), (f, g)] = H^(b,c)[a, (e, g)] * P^(c,g)[e, b, f] * Q[c, g, d]
    with a in [nm], b, e, f in [n], c, d, g in [m].
    """
    q = _want(q, QuantumLatinSquare, "q")
    m = q.n
    p = _want_family(p, "p", kind="qls", control_dims=(m, m))
    n = p.base_dimension
    h = _want_family(h, "h", kind="hadamard", control_dims=(n, m), base_dim=n * m)
    nm = n * m
    # split the column index of each Hadamard into its (e, g) factors
    hs = h.stack().reshape(n, m, nm, n, m)
    out = np.einsum("bcaeg,cgebf,cgd->abcdefg", hs, p.stack(), q.grid, optimize=True)
    return UnitaryErrorBasis(out.reshape(nm * nm, m * n, n * m), tol=tol)


def ternary_c(h, v, w, tol: Tolerance | None = None) -> UnitaryErrorBasis:
    """n^2 m^2-controlled Had_{m^2} + UEB_nm + UEB_m give UEB_{n m^2}.

    U[(a, b)][(c, d), (e, f)] =
        sum_{r in [m]} H^b[a, e] * V[b][c, (r, f)] * W[e][r, d] / sqrt(m)
    with a, e in [m^2], b in [n^2 m^2], c in [nm], d in [m], f in [n].

    The 1/sqrt(m) factor is forced: each output column is the
    vectorization of an isometry image with Frobenius norm sqrt(m).
    """
    w = _want(w, UnitaryErrorBasis, "w")
    v = _want(v, UnitaryErrorBasis, "v")
    m = w.n
    if v.n % m != 0:
        raise DimensionError(f"v dimension {v.n} is not a multiple of w dimension {m}")
    n = v.n // m
    h = _want_family(
        h, "h", kind="hadamard", control_dims=(n * n * m * m,), base_dim=m * m
    )
    # split the column index of each V element into its (r, f) factors
    vs = v.elements.reshape(n * n * m * m, n * m, m, n)
    out = np.einsum(
        "bae,bcrf,erd->abcdef", h.stack(), vs, w.elements, optimize=True
    ) / math.sqrt(m)
    dim = n * m * m
    return UnitaryErrorBasis(out.reshape(dim * dim, n * m * m, m * m * n), tol=tol)


def ternary_d(v, q, w, tol: Tolerance | None = None) -> UnitaryErrorBasis:
    """(n, p)-controlled UEB_nm + p-controlled QLS_n + UEB_sqrt(np) give
    UEB_{n m sqrt(np)}. Requires np to be a perfect square.

    U[(a, b, c)][(d, e, f), (g, h)] =
        sum_{r in [n]} V^(b,c)[a][(r, f), g] * Q^c[b, r, d] * W[(r, c)][e, h]
    with a in [n^2 m^2], b, d in [n], c in [p], e, h in [sqrt(np)],
    f in [m], g in [nm].
    """
    q = _want_family(q, "q", kind="qls")
    if len(q.control_dims) != 1:
        raise DimensionError(f"q: expected one control index, got {q.control_dims}")
    p = q.control_dims[0]
    n = q.base_dimension
    s = math.isqrt(n * p)
    if s * s != n * p:
        raise DimensionError(f"n*p = {n * p} is not a perfect square")
    w = _want(w, UnitaryErrorBasis, "w")
    if w.n != s:
        raise DimensionError(f"w must have dimension sqrt(n*p) = {s}, got {w.n}")
    v = _want_family(v, "v", kind="ueb", control_dims=(n, p))
    if v.base_dimension % n != 0:
        raise DimensionError(
            f"v base dimension {v.base_dimension} is not a multiple of n = {n}"
        )
    m = v.base_dimension // n
    nm = n * m
    # split the row index of each V element into (r, f); the W element index into (r, c)
    vs = v.stack().reshape(n, p, nm * nm, n, m, nm)
    ws = w.elements.reshape(n, p, s, s)
    out = np.einsum(
        "bcarfg,cbrd,rceh->abcdefgh", vs, q.stack(), ws, optimize=True
    )
    dim = n * m * s
    return UnitaryErrorBasis(
        out.reshape(nm * nm * n * p, n * s * m, nm * s), tol=tol
    )


# ---------------------------------------------------------------------------
# higher constructions
# ---------------------------------------------------------------------------


def quad_a(h, p, q, v, tol: Tolerance | None = None) -> UnitaryErrorBasis:
    """(n^2, n^2)-controlled Had_{n^2} + two QLS_{n^2} + UEB_n give UEB_{n^3}.

    U[(a, b, c)][(d, e), (f, g)] =
        sum_{r in [n^2]} H^(b,c)[a, r] * P[c, r, d] * Q[r, b, f] * V[r][e, g]
    with a, b, c, d, f in [n^2] and e, g in [n].
    """
    v = _want(v, UnitaryErrorBasis, "v")
    n = v.n
    n2 = n * n
    p = _want(p, QuantumLatinSquare, "p")
    q = _want(q, QuantumLatinSquare, "q")
    if p.n != n2 or q.n != n2:
        raise DimensionError(
            f"p and q must be quantum Latin squares of dimension n^2 = {n2}, "
            f"got {p.n} and {q.n}"
        )
    h = _want_family(h, "h", kind="hadamard", control_dims=(n2, n2), base_dim=n2)
    out = np.einsum(
        "bcar,crd,rbf,reg->abcdefg",
        h.stack(),
        p.grid,
        q.grid,
        v.elements,
        optimize=True,
    )
    n3 = n2 * n
    return UnitaryErrorBasis(out.reshape(n3 * n3, n3, n3), tol=tol)


def octo_b(a, b, c, d, h, k, q, p, tol: Tolerance | None = None) -> UnitaryErrorBasis:
    """Four Had_n + two n-controlled Had_n families + two QLS_n give UEB_{n^2}.

    U[(a, b, c, d)][(e, f), (g, h)] = (1/n) * sum_{r, s in [n]}
        A[f, h] * B[s, f] * C[r, h] * D[s, r] * H^d[a, s] * K^c[b, r]
        * Q[d, s, e] * P[r, c, g]
    with every index in [n].
    """
    a = _want(a, HadamardMatrix, "a")
    b = _want(b, HadamardMatrix, "b")
    c = _want(c, HadamardMatrix, "c")
    d = _want(d, HadamardMatrix, "d")
    n = a.n
    for name, mat in (("b", b), ("c", c), ("d", d)):
        if mat.n != n:
            raise DimensionError(f"{name}: dimension {mat.n} differs from a's {n}")
    h = _want_family(h, "h", kind="hadamard", control_dims=(n,), base_dim=n)
    k = _want_family(k, "k", kind="hadamard", control_dims=(n,), base_dim=n)
    q = _want(q, QuantumLatinSquare, "q")
    p = _want(p, QuantumLatinSquare, "p")
    if q.n != n or p.n != n:
        raise DimensionError(f"q and p must have dimension {n}, got {q.n} and {p.n}")
    out = np.einsum(
        "fh,sf,rh,sr,das,cbr,dse,rcg->abcdefgh",
        a.matrix,
        b.matrix,
        c.matrix,
        d.matrix,
        h.stack(),
        k.stack(),
        q.grid,
        p.grid,
        optimize=True,
    ) / n
    n2 = n * n
    return UnitaryErrorBasis(out.reshape(n2 * n2, n2, n2), tol=tol)


def f_family(
    m: int, v, qs: Sequence, w, tol: Tolerance | None = None
) -> UnitaryErrorBasis:
    """The arity-indexed family: for arity m, an n^2-controlled family of
    UEB_{n^(2m)}, m quantum Latin squares of dimension n^2, and a UEB_n give
    a UEB_{n^(2m+1)}.

    U[(a, r0)][(c1..cm, d), (e, f)] =
        sum_{r1..rm in [n^2]} V^r0[a][(r1..rm), e]
            * prod_{i in 1..m} Q_i[r_{i-1}, r_i, c_i]
            * W[r_m][d, f]
    with a in [n^(4m)], e in [n^(2m)], r_i, c_i in [n^2], d, f in [n].
    """
    m = int(m)
    if m < 1:
        raise DimensionError(f"arity must be at least 1, got {m}")
    if m > 9:
        raise DimensionError(f"arity {m} exceeds the supported contraction size")
    w = _want(w, UnitaryErrorBasis, "w")
    n = w.n
    n2 = n * n
    qs = [_want(qi, QuantumLatinSquare, f"qs[{i}]") for i, qi in enumerate(qs)]
    if len(qs) != m:
        raise DimensionError(f"expected {m} quantum Latin squares, got {len(qs)}")
    for i, qi in enumerate(qs):
        if qi.n != n2:
            raise DimensionError(f"qs[{i}]: expected dimension n^2 = {n2}, got {qi.n}")
    base = n2**m
    v = _want_family(v, "v", kind="ueb", control_dims=(n2,), base_dim=base)
    # split the row index of each V element into its m factors of size n^2
    vs = v.stack().reshape((n2, base * base) + (n2,) * m + (base,))

    pool = [ch for ch in string.ascii_lowercase if ch not in "azedf"]
    rs = pool[:m]
    cs = pool[m : 2 * m]
    operands = [vs]
    subs = ["z" + "a" + "".join(rs) + "e"]
    for i in range(m):
        prev = "z" if i == 0 else rs[i - 1]
        subs.append(prev + rs[i] + cs[i])
        operands.append(qs[i].grid)
    subs.append(rs[-1] + "d" + "f")
    operands.append(w.elements)
    out_sub = "a" + "z" + "".join(cs) + "d" + "e" + "f"
    out = np.einsum(",".join(subs) + "->" + out_sub, *operands, optimize=True)
    dim = base * n
    return UnitaryErrorBasis(out.reshape(dim * dim, dim, dim), tol=tol)


CONSTRUCTIONS = {
    "had_had_to_qls": had_had_to_qls,
    "ueb_ueb_to_qls": ueb_ueb_to_qls,
    "hosoya_suzuki": hosoya_suzuki,
    "dita": dita,
    "controlled_ueb_tensor": controlled_ueb_tensor,
    "qsm": qsm,
    "triple_hadamard_ueb": triple_hadamard_ueb,
    "ternary_a": ternary_a,
    "ternary_b": ternary_b,
    "ternary_c": ternary_c,
    "ternary_d": ternary_d,
    "quad_a": quad_a,
    "octo_b": octo_b,
    "f_family": f_family,
}
