"""Quantum combinatorial structures through biunitarity.

Complex Hadamard matrices, quantum Latin squares, and unitary error
bases share one axiom scheme: unitarity along one index grouping, and
unitarity up to a positive scalar along the other.  This package
verifies those axioms, composes structures into larger ones through
index contractions, decides gauge equivalence of Hadamard matrices,
and computes commutativity obstructions for unitary error bases.
"""

from .biunitarity import (
    hadamard_rotation_check,
    qls_rotation_check,
    ueb_rotation_check,
)
from .constructions import (
    CONSTRUCTIONS,
    controlled_ueb_tensor,
    dita,
    f_family,
    had_had_to_qls,
    hosoya_suzuki,
    octo_b,
    qsm,
    quad_a,
    ternary_a,
    ternary_b,
    ternary_c,
    ternary_d,
    triple_hadamard_ueb,
    ueb_ueb_to_qls,
)
from .equivalence import (
    CLIQUE_VERTEX_LIMIT,
    HADAMARD_BRUTE_FORCE_LIMIT,
    CommGraph,
    HadEquivalenceWitness,
    adjoint_closed_up_to_phase,
    commutativity_graph,
    dephase_hadamard,
    hadamard_equivalent,
    max_commuting_subset,
    ueb_normalize,
)
from .errors import (
    BiunitaryError,
    CapabilityError,
    DimensionError,
    DocumentError,
    StructureError,
)
from .io import (
    document_to_structure,
    load,
    load_raw,
    save,
    structure_to_document,
)
from .linalg import (
    DEFAULT_TOL,
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
from .report import BiunitaryReport
from .reproduction import (
    AdjointClosureReport,
    CommutingBoundReport,
    REFERENCE_LABELS,
    ReferenceInputs,
    build_reference_ueb,
    check_not_nice,
    check_not_qsm,
    compare_to_fixture,
    element_label,
    label_to_index,
    load_reference_fixture,
    reference_inputs,
)
from .structures import (
    ControlledFamily,
    HadamardMatrix,
    LatinSquare,
    QuantumLatinSquare,
    UnitaryErrorBasis,
    cyclic_latin,
    fourier,
    pauli_ueb,
    qls_from_latin,
    verify_family,
    verify_hadamard,
    verify_qls,
    verify_ueb,
)

__version__ = "1.0.0"

__all__ = [
    "AdjointClosureReport",
    "BiunitaryError",
    "BiunitaryReport",
    "CLIQUE_VERTEX_LIMIT",
    "CONSTRUCTIONS",
    "CapabilityError",
    "CommGraph",
    "CommutingBoundReport",
    "ControlledFamily",
    "DEFAULT_TOL",
    "DimensionError",
    "DocumentError",
    "HADAMARD_BRUTE_FORCE_LIMIT",
    "HadEquivalenceWitness",
    "HadamardMatrix",
    "LatinSquare",
    "QuantumLatinSquare",
    "REFERENCE_LABELS",
    "ReferenceInputs",
    "StructureError",
    "Tolerance",
    "UnitaryErrorBasis",
    "adjoint_closed_up_to_phase",
    "build_reference_ueb",
    "check_not_nice",
    "check_not_qsm",
    "commutativity_graph",
    "commutes",
    "compare_to_fixture",
    "controlled_ueb_tensor",
    "cyclic_latin",
    "dagger",
    "dephase_hadamard",
    "dita",
    "document_to_structure",
    "element_label",
    "f_family",
    "fourier",
    "had_had_to_qls",
    "hadamard_equivalent",
    "hadamard_rotation_check",
    "hosoya_suzuki",
    "is_unitary",
    "kron",
    "label_to_index",
    "load",
    "load_raw",
    "load_reference_fixture",
    "max_abs",
    "max_commuting_subset",
    "octo_b",
    "pauli_ueb",
    "proportional",
    "qls_from_latin",
    "qls_rotation_check",
    "qsm",
    "quad_a",
    "regroup",
    "save",
    "structure_to_document",
    "ternary_a",
    "ternary_b",
    "ternary_c",
    "ternary_d",
    "trace_inner",
    "triple_hadamard_ueb",
    "ueb_normalize",
    "ueb_rotation_check",
    "ueb_ueb_to_qls",
    "unitary_scalar",
    "verify_family",
    "verify_hadamard",
    "verify_qls",
    "verify_ueb",
]
