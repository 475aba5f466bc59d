"""The bundled 8-dimensional reference basis and its obstruction analyses.

This module rebuilds a 64-element unitary error basis of dimension 8 from
fixed 4-dimensional ingredients (one Hadamard matrix, two quantum Latin
squares, one 2-dimensional unitary error basis) through the quad_a
construction, normalizes it so element (1,1,1) is the identity, and checks
it against the fixture shipped in the package data.

Two necessary-condition tests are provided:

* adjoint closure up to phase (every nice error basis passes, so failure
  proves the basis is not nice), and
* the pairwise-commuting bound (every basis equivalent to a
  shift-and-multiply basis contains m pairwise-commuting elements once it
  contains the identity, so a maximum below m proves non-equivalence).

Elements are labeled "abc" with a, b, c in 1..4, the third digit fastest.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

import numpy as np

from .constructions import quad_a
from .equivalence import (
    adjoint_closed_up_to_phase,
    max_commuting_subset,
    ueb_normalize,
)
from .errors import DimensionError, StructureError
from .linalg import DEFAULT_TOL, Tolerance, max_abs
from . import io as _io
from .structures import (
    ControlledFamily,
    HadamardMatrix,
    LatinSquare,
    QuantumLatinSquare,
    UnitaryErrorBasis,
    qls_from_latin,
)

__all__ = [
    "REFERENCE_LABELS",
    "ReferenceInputs",
    "reference_inputs",
    "build_reference_ueb",
    "load_reference_fixture",
    "compare_to_fixture",
    "AdjointClosureReport",
    "CommutingBoundReport",
    "check_not_nice",
    "check_not_qsm",
    "element_label",
    "label_to_index",
]

_FIXTURE_RESOURCE = "ueb8_reference.json"

REFERENCE_LABELS: tuple[str, ...] = tuple(
    f"{a + 1}{b + 1}{c + 1}" for a in range(4) for b in range(4) for c in range(4)
)


def element_label(k: int) -> str:
    """Label of the k-th element (0-based k) in the 64-element scheme."""
    return REFERENCE_LABELS[k]


def label_to_index(label: str) -> int:
    """Flat 0-based index of an "abc" label."""
    try:
        return REFERENCE_LABELS.index(label)
    except ValueError:
        raise KeyError(f"no element labeled {label!r}") from None


@dataclass(frozen=True)
class ReferenceInputs:
    """The fixed ingredients of the reference basis."""

    hadamard: HadamardMatrix
    p: QuantumLatinSquare
    q: QuantumLatinSquare
    basis: UnitaryErrorBasis


def reference_inputs() -> ReferenceInputs:
    """Transcribed input data; every value is exact."""
    h = HadamardMatrix(
        np.array(
            [
                [1, 1, 1, 1],
                [1, 1j, -1, -1j],
                [1, -1, 1, -1],
                [1, -1j, -1, 1j],
            ],
            dtype=np.complex128,
        )
    )
    s2 = 1.0 / np.sqrt(2.0)
    s5 = 1.0 / np.sqrt(5.0)
    e = np.eye(4, dtype=np.complex128)
    p_grid = np.array(
        [
            [e[0], e[1], e[2], e[3]],
            [
                s2 * (e[1] - e[2]),
                s5 * (1j * e[0] + 2 * e[3]),
                s5 * (2 * e[0] + 1j * e[3]),
                s2 * (e[1] + e[2]),
            ],
            [
                s2 * (e[1] + e[2]),
                s5 * (2 * e[0] + 1j * e[3]),
                s5 * (1j * e[0] + 2 * e[3]),
                s2 * (e[1] - e[2]),
            ],
            [e[3], e[2], e[1], e[0]],
        ]
    )
    p = QuantumLatinSquare(p_grid)
    q = qls_from_latin(
        LatinSquare(
            np.array(
                [
                    [1, 4, 2, 3],
                    [4, 1, 3, 2],
                    [3, 2, 1, 4],
                    [2, 3, 4, 1],
                ]
            )
            - 1
        )
    )
    basis = UnitaryErrorBasis(
        np.array(
            [
                [[1, 0], [0, 1]],
                [[1, 0], [0, -1]],
                [[0, 1], [1, 0]],
                [[0, 1], [-1, 0]],
            ],
            dtype=np.complex128,
        )
    )
    return ReferenceInputs(hadamard=h, p=p, q=q, basis=basis)


def build_reference_ueb(tol: Tolerance | None = None) -> UnitaryErrorBasis:
    """Rebuild the 8-dimensional basis from its ingredients.

    quad_a with the constant (4, 4)-controlled Hadamard family, then the
    pivot rotation making element (1,1,1) the identity. Deterministic:
    identical calls produce bit-identical arrays.
    """
    inputs = reference_inputs()
    family = ControlledFamily.constant(inputs.hadamard, (4, 4))
    raw = quad_a(family, inputs.p, inputs.q, inputs.basis, tol=tol)
    return ueb_normalize(raw, label_to_index("111"), tol=tol)


def load_reference_fixture(path=None, tol: Tolerance = DEFAULT_TOL) -> UnitaryErrorBasis:
    """Load the shipped fixture (or an alternate file) as a verified basis."""
    if path is not None:
        structure = _io.load(path, tol=tol)
    else:
        resource = resources.files("biunitary").joinpath("data", _FIXTURE_RESOURCE)
        with resources.as_file(resource) as p:
            structure = _io.load(p, tol=tol)
    if not isinstance(structure, UnitaryErrorBasis):
        raise StructureError(
            "fixture must be a unitary error basis document, "
            f"got {type(structure).__name__}"
        )
    if structure.n != 8:
        raise DimensionError(f"fixture must have dimension 8, got {structure.n}")
    return structure


def compare_to_fixture(
    built: UnitaryErrorBasis, fixture: UnitaryErrorBasis | None = None
) -> float:
    """Maximum entrywise deviation from the fixture (shipped one by default)."""
    if fixture is None:
        fixture = load_reference_fixture()
    if built.elements.shape != fixture.elements.shape:
        raise DimensionError(
            f"shape mismatch {built.elements.shape} vs {fixture.elements.shape}"
        )
    return max_abs(built.elements - fixture.elements)


def _default_labels(count: int) -> tuple[str, ...]:
    if count == len(REFERENCE_LABELS):
        return REFERENCE_LABELS
    return tuple(str(i + 1) for i in range(count))


def _require_identity(u: UnitaryErrorBasis, tol: Tolerance) -> int:
    eye = np.eye(u.n)
    for i in range(u.count):
        if max_abs(u.elements[i] - eye) <= tol.verify_tol:
            return i
    raise StructureError(
        "basis contains no identity element; normalize it first (the "
        "obstruction tests assume a normalized basis)"
    )


@dataclass(frozen=True)
class AdjointClosureReport:
    """Outcome of the adjoint-closure necessary condition for niceness."""

    closed: bool
    witness_label: str | None

    @property
    def not_nice(self) -> bool:
        return not self.closed

    @property
    def verdict(self) -> str:
        if self.not_nice:
            return (
                f"not nice: the adjoint of element {self.witness_label} "
                "is proportional to no element"
            )
        return "inconclusive: closed under adjoints up to phase"


@dataclass(frozen=True)
class CommutingBoundReport:
    """Outcome of the pairwise-commuting necessary condition for
    shift-and-multiply equivalence."""

    dimension: int
    max_commuting: int
    witness: tuple[str, ...]

    @property
    def not_qsm(self) -> bool:
        return self.max_commuting < self.dimension

    @property
    def verdict(self) -> str:
        if self.not_qsm:
            return (
                "not equivalent to a shift-and-multiply basis: max commuting "
                f"subset {self.max_commuting} < {self.dimension}"
            )
        return (
            f"inconclusive: contains {self.max_commuting} pairwise-commuting "
            f"elements (dimension {self.dimension})"
        )


def check_not_nice(
    u: UnitaryErrorBasis,
    tol: Tolerance = DEFAULT_TOL,
    labels=None,
) -> AdjointClosureReport:
    """Adjoint-closure test. The basis must contain the identity."""
    if not isinstance(u, UnitaryErrorBasis):
        u = UnitaryErrorBasis(u)
    _require_identity(u, tol)
    labels = tuple(labels) if labels is not None else _default_labels(u.count)
    closed, witness = adjoint_closed_up_to_phase(u, tol)
    return AdjointClosureReport(
        closed=closed,
        witness_label=None if witness is None else labels[witness],
    )


def check_not_qsm(
    u: UnitaryErrorBasis,
    tol: Tolerance = DEFAULT_TOL,
    labels=None,
) -> CommutingBoundReport:
    """Pairwise-commuting bound. The basis must contain the identity."""
    if not isinstance(u, UnitaryErrorBasis):
        u = UnitaryErrorBasis(u)
    _require_identity(u, tol)
    labels = tuple(labels) if labels is not None else _default_labels(u.count)
    size, witness = max_commuting_subset(u, tol, labels=labels)
    return CommutingBoundReport(
        dimension=u.n, max_commuting=size, witness=witness
    )
