"""Equivalence tools and obstruction primitives.

Hadamard equivalence (phase and permutation gauge) is decided by brute force
for n <= 6. Commutativity graphs and exact maximum cliques support the
pairwise-commuting obstruction; adjoint closure up to phase supports the
nice-error-basis obstruction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapabilityError, DimensionError, StructureError
from .linalg import DEFAULT_TOL, Tolerance, as_cmatrix, dagger, max_abs
from .structures import HadamardMatrix, UnitaryErrorBasis, verify_hadamard

__all__ = [
    "HadEquivalenceWitness",
    "CommGraph",
    "dephase_hadamard",
    "hadamard_equivalent",
    "ueb_normalize",
    "adjoint_closed_up_to_phase",
    "commutativity_graph",
    "max_commuting_subset",
]

HADAMARD_BRUTE_FORCE_LIMIT = 6
CLIQUE_VERTEX_LIMIT = 256


# ---------------------------------------------------------------------------
# Hadamard equivalence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HadEquivalenceWitness:
    """Gauge data with W[a, b] = row_phases[a] * col_phases[b] * H[row_perm[a], col_perm[b]].

    Permutations are 0-based tuples; phases are unimodular complex vectors.
    """

    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    row_phases: np.ndarray
    col_phases: np.ndarray

    def __post_init__(self):
        n = len(self.row_perm)
        if sorted(self.row_perm) != list(range(n)):
            raise StructureError("row_perm is not a permutation")
        if sorted(self.col_perm) != list(range(len(self.col_perm))):
            raise StructureError("col_perm is not a permutation")
        for name in ("row_phases", "col_phases"):
            ph = np.asarray(getattr(self, name), dtype=np.complex128)
            if ph.ndim != 1:
                raise StructureError(f"{name} must be a vector")
            if max_abs(np.abs(ph) - 1.0) > DEFAULT_TOL.compare_tol:
                raise StructureError(f"{name} must be unimodular")
            ph = ph.copy()
            ph.setflags(write=False)
            object.__setattr__(self, name, ph)

    def apply(self, h) -> np.ndarray:
        """Transform H by this witness; the result should equal W."""
        m = h.matrix if isinstance(h, HadamardMatrix) else as_cmatrix(h)
        permuted = m[np.ix_(self.row_perm, self.col_perm)]
        return self.row_phases[:, None] * self.col_phases[None, :] * permuted

    def residual(self, h, w) -> float:
        target = w.matrix if isinstance(w, HadamardMatrix) else as_cmatrix(w)
        return max_abs(self.apply(h) - target)


def _raw_square(x) -> np.ndarray:
    m = x.matrix if isinstance(x, HadamardMatrix) else as_cmatrix(x)
    if m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionError(f"expected a nonempty square matrix, got {m.shape}")
    return m


def dephase_hadamard(h, tol: Tolerance = DEFAULT_TOL) -> HadamardMatrix:
    """Normal form with all-ones first row and column, in the same
    equivalence class as the input."""
    if not isinstance(h, HadamardMatrix):
        rep = verify_hadamard(h, tol)
        if not rep.passed:
            raise StructureError(f"not a complex Hadamard matrix: {rep.summary()}")
        h = HadamardMatrix(h, tol=tol)
    m = h.matrix
    out = np.conj(m[:, 0])[:, None] * m * np.conj(m[0, :])[None, :] * m[0, 0]
    return HadamardMatrix(out, tol=tol)


def hadamard_equivalent(
    h, w, tol: Tolerance = DEFAULT_TOL
) -> HadEquivalenceWitness | None:
    """Search for phases and permutations carrying H onto W.

    Candidates whose entries are not unimodular (within verify_tol) are
    rejected before any permutation is tried. Matches are accepted at
    compare_tol in the max-entry norm. Brute force, n <= 6.
    """
    hm = _raw_square(h)
    wm = _raw_square(w)
    n = hm.shape[0]
    if wm.shape[0] != n:
        return None
    if n > HADAMARD_BRUTE_FORCE_LIMIT:
        raise CapabilityError(
            f"equivalence search is bounded at n = {HADAMARD_BRUTE_FORCE_LIMIT}, got {n}"
        )
    for m in (hm, wm):
        if max_abs(m * np.conj(m) - 1.0) > tol.verify_tol:
            return None
    perms = np.array(list(itertools.permutations(range(n))))
    for sigma in itertools.permutations(range(n)):
        rows = hm[list(sigma)]
        # candidates[t][a, b] = H[sigma(a), tau_t(b)] for every tau at once
        candidates = rows[:, perms].transpose(1, 0, 2)
        # phases are forced by the first column and first row (gauge d_0 = 1)
        c = wm[None, :, 0] / candidates[:, :, 0]
        d = wm[None, 0, :] / (candidates[:, 0, :] * c[:, :1])
        rebuilt = c[:, :, None] * d[:, None, :] * candidates
        dev = np.abs(rebuilt - wm[None]).max(axis=(1, 2))
        t = int(dev.argmin())
        if dev[t] <= tol.compare_tol:
            return HadEquivalenceWitness(
                row_perm=tuple(sigma),
                col_perm=tuple(int(x) for x in perms[t]),
                row_phases=c[t],
                col_phases=d[t],
            )
    return None


# ---------------------------------------------------------------------------
# unitary error basis tools
# ---------------------------------------------------------------------------


def ueb_normalize(u, pivot: int, tol: Tolerance | None = None) -> UnitaryErrorBasis:
    """Left-multiply every element by the adjoint of the pivot element,
    making the pivot the identity."""
    if not isinstance(u, UnitaryErrorBasis):
        u = UnitaryErrorBasis(u)
    pivot = int(pivot)
    if not 0 <= pivot < u.count:
        raise IndexError(f"pivot {pivot} out of range for {u.count} elements")
    rotated = np.einsum("ij,ajk->aik", dagger(u.elements[pivot]), u.elements)
    return UnitaryErrorBasis(rotated, tol=tol)


def _element_stack(u) -> np.ndarray:
    if isinstance(u, UnitaryErrorBasis):
        return u.elements
    arr = np.asarray(
        [as_cmatrix(m) for m in u] if not isinstance(u, np.ndarray) else u,
        dtype=np.complex128,
    )
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2] or arr.shape[0] == 0:
        raise DimensionError(f"expected a nonempty (k, n, n) stack, got {arr.shape}")
    return arr


def adjoint_closed_up_to_phase(
    u, tol: Tolerance = DEFAULT_TOL
) -> tuple[bool, int | None]:
    """Is the adjoint of every element proportional to some element?

    Returns (True, None) when closed, else (False, index) where index is the
    first element (0-based) whose adjoint is proportional to nothing.
    A necessary condition for a basis to be nice: failing it rules niceness out.
    """
    s = _element_stack(u)
    k = s.shape[0]
    adjoints = np.conj(np.transpose(s, (0, 2, 1)))
    flat = s.reshape(k, -1)
    aflat = adjoints.reshape(k, -1)
    # overlap[a, b] = <adjoint_a, U_b>, squared against the Cauchy-Schwarz bound
    overlap = np.abs(np.conj(aflat) @ flat.T) ** 2
    norms = np.einsum("ai,ai->a", np.conj(flat), flat).real
    anorms = np.einsum("ai,ai->a", np.conj(aflat), aflat).real
    bound = (1.0 - tol.verify_tol) * np.outer(anorms, norms)
    hit = overlap >= bound
    for a in range(k):
        if not hit[a].any():
            return False, a
    return True, None


# ---------------------------------------------------------------------------
# commutativity graphs and cliques
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CommGraph:
    """Undirected graph on basis elements; edges join commuting pairs."""

    labels: tuple[str, ...]
    adjacency: np.ndarray

    def __post_init__(self):
        adj = np.asarray(self.adjacency, dtype=bool)
        k = len(self.labels)
        if adj.shape != (k, k):
            raise StructureError(f"adjacency shape {adj.shape} does not match {k} labels")
        if not np.array_equal(adj, adj.T):
            raise StructureError("adjacency must be symmetric")
        if adj.trace() != 0:
            raise StructureError("adjacency must have an empty diagonal")
        if len(set(self.labels)) != k:
            raise StructureError("labels must be distinct")
        adj = adj.copy()
        adj.setflags(write=False)
        object.__setattr__(self, "adjacency", adj)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def vertex_count(self) -> int:
        return len(self.labels)

    @property
    def edge_count(self) -> int:
        return int(self.adjacency.sum()) // 2

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no vertex labeled {label!r}") from None

    def has_edge(self, a: str, b: str) -> bool:
        return bool(self.adjacency[self.index(a), self.index(b)])

    def edges(self) -> list[tuple[str, str]]:
        out = []
        for i in range(self.vertex_count):
            for j in range(i + 1, self.vertex_count):
                if self.adjacency[i, j]:
                    out.append((self.labels[i], self.labels[j]))
        return out


def _commutation_adjacency(s: np.ndarray, tol: Tolerance) -> np.ndarray:
    k = s.shape[0]
    norms = np.abs(s).max(axis=(1, 2))
    adj = np.zeros((k, k), dtype=bool)
    for i in range(k):
        ab = s[i] @ s
        ba = s @ s[i]
        res = np.abs(ab - ba).max(axis=(1, 2))
        scale = np.maximum(1.0, norms[i] * norms)
        row = res <= tol.verify_tol * scale
        adj[i] = row
    np.fill_diagonal(adj, False)
    return adj


def _identity_mask(s: np.ndarray, tol: Tolerance) -> np.ndarray:
    k, n = s.shape[0], s.shape[1]
    eye_flat = np.eye(n).ravel()
    flat = s.reshape(k, -1)
    overlap = np.abs(np.conj(flat) @ eye_flat) ** 2
    norms = np.einsum("ai,ai->a", np.conj(flat), flat).real
    return overlap >= (1.0 - tol.verify_tol) * norms * n


def commutativity_graph(
    u,
    tol: Tolerance = DEFAULT_TOL,
    exclude_identity: bool = False,
    labels: Sequence[str] | None = None,
) -> CommGraph:
    """Graph whose vertices are elements and whose edges join commuting pairs.

    With exclude_identity, elements proportional to the identity (which
    commute with everything) are dropped from the vertex set. Accepts a
    UnitaryErrorBasis or any sequence of equal-size square matrices.
    """
    s = _element_stack(u)
    k = s.shape[0]
    if labels is None:
        labels = tuple(str(i + 1) for i in range(k))
    else:
        labels = tuple(labels)
        if len(labels) != k:
            raise DimensionError(f"{len(labels)} labels given for {k} elements")
    keep = np.ones(k, dtype=bool)
    if exclude_identity:
        keep = ~_identity_mask(s, tol)
    adj = _commutation_adjacency(s[keep], tol)
    kept_labels = tuple(lab for lab, k_ in zip(labels, keep) if k_)
    return CommGraph(labels=kept_labels, adjacency=adj)


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _max_clique_size(neigh: list[int], cand: int, floor: int = 0) -> int:
    """Exact maximum clique size within the candidate set (branch and bound)."""
    best = floor

    def bb(size: int, cand: int):
        nonlocal best
        if cand == 0:
            best = max(best, size)
            return
        if size + cand.bit_count() <= best:
            return
        pivot = max(_bits(cand), key=lambda v: (cand & neigh[v]).bit_count())
        ext = cand & ~neigh[pivot]
        for v in _bits(ext):
            bb(size + 1, cand & neigh[v])
            cand &= ~(1 << v)

    bb(0, cand)
    return best


def _lex_least_clique(neigh: list[int], size: int, nverts: int) -> list[int]:
    chosen: list[int] = []
    cand = (1 << nverts) - 1
    while len(chosen) < size:
        for v in _bits(cand):
            rest = cand & neigh[v]
            if _max_clique_size(neigh, rest) >= size - len(chosen) - 1:
                chosen.append(v)
                cand = rest
                break
        else:  # pragma: no cover - unreachable when size is the true maximum
            raise RuntimeError("clique certification failed")
    return chosen


def max_commuting_subset(
    u,
    tol: Tolerance = DEFAULT_TOL,
    labels: Sequence[str] | None = None,
) -> tuple[int, tuple[str, ...]]:
    """Exact maximum pairwise-commuting subset (identity elements included).

    Returns the size and a certified witness, as labels. The witness is
    the lexicographically least maximum clique with respect to element
    order, so repeated runs always name the same subset. Bounded at 256
    elements.
    """
    s = _element_stack(u)
    k = s.shape[0]
    if k > CLIQUE_VERTEX_LIMIT:
        raise CapabilityError(
            f"clique search is bounded at {CLIQUE_VERTEX_LIMIT} elements, got {k}"
        )
    if labels is None:
        labels = tuple(str(i + 1) for i in range(k))
    else:
        labels = tuple(labels)
        if len(labels) != k:
            raise DimensionError(f"{len(labels)} labels given for {k} elements")
    adj = _commutation_adjacency(s, tol)
    neigh = [sum(1 << j for j in range(k) if adj[i, j]) for i in range(k)]
    size = _max_clique_size(neigh, (1 << k) - 1)
    witness = _lex_least_clique(neigh, size, k)
    return size, tuple(labels[i] for i in witness)
