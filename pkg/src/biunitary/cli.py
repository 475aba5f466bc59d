"""Command-line interface.

Exit codes: 0 success, 1 domain failure (verification, parse, or
computation errors), 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io as _io
from .biunitarity import (
    hadamard_rotation_check,
    qls_rotation_check,
    ueb_rotation_check,
)
from .constructions import CONSTRUCTIONS
from .equivalence import commutativity_graph, hadamard_equivalent, max_commuting_subset, ueb_normalize
from .errors import BiunitaryError, DimensionError
from .linalg import DEFAULT_TOL, Tolerance
from .reproduction import (
    REFERENCE_LABELS,
    build_reference_ueb,
    check_not_nice,
    check_not_qsm,
    compare_to_fixture,
    load_reference_fixture,
)
from .structures import (
    ControlledFamily,
    HadamardMatrix,
    LatinSquare,
    QuantumLatinSquare,
    UnitaryErrorBasis,
    verify_family,
    verify_hadamard,
    verify_qls,
    verify_ueb,
)

_VERIFIERS = {"hadamard": verify_hadamard, "qls": verify_qls, "ueb": verify_ueb}
_ROTATIONS = {
    "hadamard": hadamard_rotation_check,
    "qls": qls_rotation_check,
    "ueb": ueb_rotation_check,
}


def _tolerance(args) -> Tolerance:
    if args.tol is not None:
        return Tolerance(verify_tol=args.tol, compare_tol=DEFAULT_TOL.compare_tol)
    return DEFAULT_TOL


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, allow_nan=False, separators=(",", ":"), sort_keys=False))


def _scalar_json(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _cmd_verify(args) -> int:
    tol = _tolerance(args)
    kind, payload = _io.load_raw(args.file)
    if kind != args.kind:
        raise DimensionError(f"document holds a {kind!r}, not a {args.kind!r}")

    if kind == "latin":
        square = LatinSquare(payload)  # raises StructureError on bad squares
        if args.json:
            _print_json({"kind": "latin", "passed": True, "dimension": square.n})
        else:
            print(f"pass (Latin square of order {square.n})")
        return 0

    if kind == "controlled":
        verifier_report = verify_family(
            payload["items"],
            tol,
            kind=payload["base_kind"],
            control_dims=payload["control_dims"],
        )
        rotation = _ROTATIONS[payload["base_kind"]]
        item_reports = [rotation(item, tol) for item in payload["items"]]
        rotation_report = min(
            item_reports, key=lambda r: (r.passed, -r.worst_residual)
        )
    else:
        verifier_report = _VERIFIERS[kind](payload, tol)
        rotation_report = _ROTATIONS[kind](payload, tol)

    passed = verifier_report.passed and rotation_report.passed
    if args.json:
        _print_json(
            {
                "kind": kind,
                "passed": passed,
                "verifier": verifier_report.to_json(),
                "rotation": rotation_report.to_json(),
            }
        )
    else:
        lam = "-" if verifier_report.lam is None else f"{verifier_report.lam:g}"
        print(("pass" if passed else "fail") + f", λ={lam}")
        print(f"  verifier: {verifier_report.summary()}")
        print(f"  rotation: {rotation_report.summary()}")
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------

# formula-order argument recipe per construction: (flag role, how many)
_CONSTRUCT_ARGS: dict[str, list[tuple[str, int]]] = {
    "had_had_to_qls": [("hadamard", 2)],
    "ueb_ueb_to_qls": [("ueb", 2)],
    "hosoya_suzuki": [("hadamards", 2)],
    "dita": [("hadamard", 1), ("hadamards", 1)],
    "controlled_ueb_tensor": [("uebs", 1), ("ueb", 1)],
    "qsm": [("hadamards", 1), ("qls", 1)],
    "triple_hadamard_ueb": [("hadamards", 1), ("hadamard", 2)],
    "ternary_a": [("hadamards", 1), ("uebs", 1), ("qls", 1)],
    "ternary_b": [("hadamards", 1), ("qls_family", 1), ("qls", 1)],
    "ternary_c": [("hadamards", 1), ("ueb", 2)],
    "ternary_d": [("uebs", 1), ("qls_family", 1), ("ueb", 1)],
    "quad_a": [("hadamards", 1), ("qls", 2), ("ueb", 1)],
    "octo_b": [("hadamard", 4), ("hadamards", 2), ("qls", 2)],
    "f_family": [("uebs", 1), ("qls", "arity"), ("ueb", 1)],
}

_ROLE_TYPES = {
    "hadamard": (HadamardMatrix, "a Hadamard document"),
    "qls": (QuantumLatinSquare, "a qls document"),
    "ueb": (UnitaryErrorBasis, "a ueb document"),
    "hadamards": (ControlledFamily, "a controlled family of Hadamards"),
    "qls_family": (ControlledFamily, "a controlled family of quantum Latin squares"),
    "uebs": (ControlledFamily, "a controlled family of unitary error bases"),
}

_FAMILY_BASE = {"hadamards": "hadamard", "qls_family": "qls", "uebs": "ueb"}


def _load_role(path: str, role: str, tol: Tolerance):
    structure = _io.load(path, tol)
    want, description = _ROLE_TYPES[role]
    if not isinstance(structure, want):
        raise DimensionError(f"{path}: expected {description}")
    if role in _FAMILY_BASE and structure.base_kind != _FAMILY_BASE[role]:
        raise DimensionError(f"{path}: expected {_ROLE_TYPES[role][1]}")
    return structure


def _cmd_construct(args) -> int:
    tol = _tolerance(args)
    name = args.name
    recipe = _CONSTRUCT_ARGS[name]
    supplied = {
        "hadamard": list(args.hadamard or []),
        "hadamards": list(args.hadamards or []),
        "qls": list(args.qls or []),
        "qls_family": list(args.qls_family or []),
        "ueb": list(args.ueb or []),
        "uebs": list(args.uebs or []),
    }
    call_args: list = []
    if name == "f_family":
        if args.arity is None:
            raise DimensionError("f_family requires --arity")
        call_args.append(args.arity)
    for role, count in recipe:
        if count == "arity":
            count = args.arity or 0
        paths, supplied[role] = supplied[role][:count], supplied[role][count:]
        if len(paths) != count:
            flag = "--" + role.replace("_", "-")
            raise DimensionError(
                f"{name} needs {count} {flag} input(s) in formula order"
            )
        loaded = [_load_role(p, role, tol) for p in paths]
        if name == "f_family" and role == "qls":
            call_args.append(loaded)
        else:
            call_args.extend(loaded)
    leftovers = {role: v for role, v in supplied.items() if v}
    if leftovers:
        raise DimensionError(f"unused inputs for {name}: {sorted(leftovers)}")
    result = CONSTRUCTIONS[name](*call_args, tol=tol)
    _io.save(result, args.output)
    kind = {
        HadamardMatrix: "hadamard",
        QuantumLatinSquare: "qls",
        UnitaryErrorBasis: "ueb",
    }[type(result)]
    if args.json:
        _print_json(
            {"construction": name, "kind": kind, "dimension": result.n, "output": args.output}
        )
    else:
        print(f"wrote {kind} of dimension {result.n} to {args.output}")
    return 0


# ---------------------------------------------------------------------------
# equiv / graph / normalize / reproduce
# ---------------------------------------------------------------------------


def _cmd_equiv(args) -> int:
    tol = _tolerance(args)
    h = _io.load(args.first, tol)
    w = _io.load(args.second, tol)
    if not isinstance(h, HadamardMatrix) or not isinstance(w, HadamardMatrix):
        raise DimensionError("equiv hadamard expects two Hadamard documents")
    witness = hadamard_equivalent(h, w, tol)
    if args.json:
        payload: dict = {"equivalent": witness is not None}
        if witness is not None:
            payload["witness"] = {
                "row_perm": [p + 1 for p in witness.row_perm],
                "col_perm": [p + 1 for p in witness.col_perm],
                "row_phases": [_scalar_json(z) for z in witness.row_phases],
                "col_phases": [_scalar_json(z) for z in witness.col_phases],
                "residual": witness.residual(h, w),
            }
        _print_json(payload)
    elif witness is None:
        print("not equivalent")
    else:
        print("equivalent")
        print(f"  row permutation (1-based): {[p + 1 for p in witness.row_perm]}")
        print(f"  col permutation (1-based): {[p + 1 for p in witness.col_perm]}")
        print(f"  residual: {witness.residual(h, w):.3e}")
    return 0


def _graph_labels(u: UnitaryErrorBasis) -> tuple[str, ...]:
    if u.count == len(REFERENCE_LABELS):
        return REFERENCE_LABELS
    return tuple(str(i + 1) for i in range(u.count))


def _cmd_graph(args) -> int:
    tol = _tolerance(args)
    u = _io.load(args.file, tol)
    if not isinstance(u, UnitaryErrorBasis):
        raise DimensionError("graph commute expects a ueb document")
    labels = _graph_labels(u)
    g = commutativity_graph(u, tol, exclude_identity=args.exclude_identity, labels=labels)
    clique = None
    if args.max_clique:
        index = {lab: i for i, lab in enumerate(labels)}
        kept = [index[lab] for lab in g.labels]
        size, witness = max_commuting_subset(
            u.elements[kept], tol, labels=g.labels
        )
        clique = {"size": size, "witness": list(witness)}
    if args.json:
        payload = {
            "vertices": list(g.labels),
            "edges": [list(e) for e in g.edges()],
            "edge_count": g.edge_count,
        }
        if clique is not None:
            payload["max_clique"] = clique
        _print_json(payload)
    else:
        print(f"{g.vertex_count} vertices, {g.edge_count} edges")
        for a, b in g.edges():
            print(f"  {a} -- {b}")
        if clique is not None:
            print(
                f"max commuting subset: {clique['size']} "
                f"({', '.join(clique['witness'])})"
            )
    return 0


def _parse_pivot(spec: str, u: UnitaryErrorBasis) -> int:
    parts = spec.split(",")
    if len(parts) == 1:
        flat = int(parts[0]) - 1
    elif len(parts) == 3 and u.count == 64:
        a, b, c = (int(x) - 1 for x in parts)
        if not all(0 <= x < 4 for x in (a, b, c)):
            raise DimensionError(f"pivot parts must lie in 1..4, got {spec!r}")
        flat = a * 16 + b * 4 + c
    else:
        raise DimensionError(
            f"pivot {spec!r} must be a 1-based element index"
            + (", or an a,b,c triple" if u.count == 64 else "")
        )
    if not 0 <= flat < u.count:
        raise DimensionError(f"pivot {spec!r} out of range for {u.count} elements")
    return flat


def _cmd_normalize(args) -> int:
    tol = _tolerance(args)
    u = _io.load(args.file, tol)
    if not isinstance(u, UnitaryErrorBasis):
        raise DimensionError("normalize expects a ueb document")
    pivot = _parse_pivot(args.pivot, u)
    result = ueb_normalize(u, pivot, tol=tol)
    _io.save(result, args.output)
    if args.json:
        _print_json(
            {"kind": "ueb", "dimension": result.n, "pivot": pivot + 1, "output": args.output}
        )
    else:
        print(f"wrote normalized ueb of dimension {result.n} to {args.output}")
    return 0


def _cmd_reproduce(args) -> int:
    tol = _tolerance(args)
    built = build_reference_ueb()
    fixture = load_reference_fixture(args.fixture, tol=tol)
    per_element = np.abs(built.elements - fixture.elements).max(axis=(1, 2))
    matches = int((per_element <= tol.compare_tol).sum())
    total = built.count
    deviation = float(per_element.max())
    nice = check_not_nice(built, tol)
    qsm = check_not_qsm(built, tol)
    ok = matches == total and nice.not_nice and qsm.not_qsm
    if args.json:
        _print_json(
            {
                "matches": matches,
                "total": total,
                "max_deviation": deviation,
                "match_tolerance": tol.compare_tol,
                "not_nice": {
                    "verdict": nice.not_nice,
                    "witness": nice.witness_label,
                },
                "not_qsm": {
                    "verdict": qsm.not_qsm,
                    "max_commuting": qsm.max_commuting,
                    "dimension": qsm.dimension,
                    "witness": list(qsm.witness),
                },
                "passed": ok,
            }
        )
    else:
        print(
            f"{matches}/{total} matrices match "
            f"(max deviation {deviation:.3e}, tolerance {tol.compare_tol:g})"
        )
        print(nice.verdict)
        print(qsm.verdict)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biunitary",
        description=(
            "Verify, construct, and compare quantum combinatorial structures: "
            "complex Hadamard matrices, quantum Latin squares, and unitary "
            "error bases."
        ),
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--tol",
        type=float,
        default=None,
        help="override the verification tolerance (default 1e-10)",
    )
    common.add_argument(
        "--json", action="store_true", help="machine-readable JSON output"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser(
        "verify", parents=[common], help="run a verifier and rotation check on a file"
    )
    p_verify.add_argument(
        "kind", choices=["hadamard", "qls", "ueb", "controlled", "latin"]
    )
    p_verify.add_argument("file")
    p_verify.set_defaults(func=_cmd_verify)

    p_construct = sub.add_parser(
        "construct",
        parents=[common],
        help="compose structures; inputs are given per role in formula order",
    )
    p_construct.add_argument("name", choices=sorted(_CONSTRUCT_ARGS))
    p_construct.add_argument("--hadamard", action="append", metavar="FILE")
    p_construct.add_argument("--hadamards", action="append", metavar="FILE",
                             help="controlled family of Hadamards")
    p_construct.add_argument("--qls", action="append", metavar="FILE")
    p_construct.add_argument("--qls-family", dest="qls_family", action="append",
                             metavar="FILE")
    p_construct.add_argument("--ueb", action="append", metavar="FILE")
    p_construct.add_argument("--uebs", action="append", metavar="FILE",
                             help="controlled family of unitary error bases")
    p_construct.add_argument("--arity", type=int, default=None,
                             help="arity m for f_family")
    p_construct.add_argument("-o", "--output", required=True)
    p_construct.set_defaults(func=_cmd_construct)

    p_equiv = sub.add_parser(
        "equiv", parents=[common], help="decide gauge equivalence of two structures"
    )
    equiv_sub = p_equiv.add_subparsers(dest="equiv_kind", required=True)
    p_equiv_had = equiv_sub.add_parser("hadamard", parents=[common])
    p_equiv_had.add_argument("first")
    p_equiv_had.add_argument("second")
    p_equiv_had.set_defaults(func=_cmd_equiv)

    p_graph = sub.add_parser(
        "graph", parents=[common], help="commutativity graph of a unitary error basis"
    )
    graph_sub = p_graph.add_subparsers(dest="graph_kind", required=True)
    p_graph_commute = graph_sub.add_parser("commute", parents=[common])
    p_graph_commute.add_argument("file")
    p_graph_commute.add_argument("--max-clique", action="store_true",
                                 help="also report the exact maximum commuting subset")
    p_graph_commute.add_argument("--exclude-identity", action="store_true")
    p_graph_commute.set_defaults(func=_cmd_graph)

    p_norm = sub.add_parser(
        "normalize", parents=[common],
        help="left-multiply a basis by the adjoint of a pivot element",
    )
    p_norm.add_argument("file")
    p_norm.add_argument("--pivot", required=True,
                        help="1-based element index, or a,b,c label for 64-element bases")
    p_norm.add_argument("-o", "--output", required=True)
    p_norm.set_defaults(func=_cmd_normalize)

    p_repro = sub.add_parser(
        "reproduce", parents=[common],
        help="rebuild the bundled reference basis and run its obstruction checks",
    )
    p_repro.add_argument("target", choices=["appendix-a"])
    p_repro.add_argument("--fixture", default=None,
                         help="compare against an alternate fixture file")
    p_repro.set_defaults(func=_cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (BiunitaryError, OSError, IndexError) as exc:
        if getattr(args, "json", False):
            _print_json({"error": str(exc)})
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
