"""JSON interchange documents for every structure type.

Document layout (all files use 1-based indices):

    {
      "kind": "hadamard" | "qls" | "ueb" | "latin" | "controlled",
      "dims": {"dimension": n}            (plus "base_kind" for controlled),
      "control_dims": [..]                (controlled only),
      "index_base": 1,
      "data": ...
    }

``data`` holds nested arrays. Complex scalars are two-element [re, im]
arrays, bare numbers (read as real), or symbolic tokens such as "1/sqrt2".
Tokens are evaluated on load and re-emitted as numeric [re, im] pairs on
save, which round-trip doubles exactly. Latin square cells are 1-based
integers.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .errors import DocumentError
from .linalg import DEFAULT_TOL, Tolerance
from .structures import (
    ControlledFamily,
    HadamardMatrix,
    LatinSquare,
    QuantumLatinSquare,
    Structure,
    UnitaryErrorBasis,
)

__all__ = [
    "TOKENS",
    "load",
    "load_raw",
    "save",
    "document_to_structure",
    "structure_to_document",
]

_S2 = 1.0 / math.sqrt(2.0)
_S5 = 1.0 / math.sqrt(5.0)

TOKENS: dict[str, complex] = {
    "0": 0.0 + 0.0j,
    "1": 1.0 + 0.0j,
    "-1": -1.0 + 0.0j,
    "i": 1.0j,
    "-i": -1.0j,
    "1/sqrt2": _S2 + 0.0j,
    "-1/sqrt2": -_S2 + 0.0j,
    "i/sqrt2": _S2 * 1.0j,
    "-i/sqrt2": -_S2 * 1.0j,
    "1/sqrt5": _S5 + 0.0j,
    "-1/sqrt5": -_S5 + 0.0j,
    "i/sqrt5": _S5 * 1.0j,
    "-i/sqrt5": -_S5 * 1.0j,
    "2/sqrt5": 2.0 * _S5 + 0.0j,
    "-2/sqrt5": -2.0 * _S5 + 0.0j,
    "2i/sqrt5": 2.0 * _S5 * 1.0j,
    "-2i/sqrt5": -2.0 * _S5 * 1.0j,
}

_KINDS = ("hadamard", "qls", "ueb", "latin", "controlled")
_BASE_KINDS = ("hadamard", "qls", "ueb")


def _is_number(v: Any) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _parse_scalar(v: Any, path: str) -> complex:
    if isinstance(v, str):
        try:
            return TOKENS[v]
        except KeyError:
            raise DocumentError(path, f"unknown token {v!r}") from None
    if _is_number(v):
        return complex(float(v), 0.0)
    if isinstance(v, list) and len(v) == 2 and all(_is_number(x) for x in v):
        return complex(float(v[0]), float(v[1]))
    raise DocumentError(
        path, "expected a number, an [re, im] pair, or a symbolic token"
    )


def _parse_array(v: Any, shape: tuple[int, ...], path: str) -> np.ndarray:
    """Parse a nested list into a complex array of exactly the given shape."""
    if not shape:
        return np.complex128(_parse_scalar(v, path))
    if not isinstance(v, list):
        raise DocumentError(path, f"expected a list of length {shape[0]}")
    if len(v) != shape[0]:
        raise DocumentError(path, f"expected length {shape[0]}, got {len(v)}")
    out = np.empty(shape, dtype=np.complex128)
    for i, item in enumerate(v):
        out[i] = _parse_array(item, shape[1:], f"{path}[{i}]")
    return out


def _emit_scalar(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _emit_array(a: np.ndarray):
    if a.ndim == 0:
        return _emit_scalar(complex(a))
    return [_emit_array(x) for x in a]


def _require(doc: dict, key: str, path: str = "") -> Any:
    if key not in doc:
        raise DocumentError(path or key, f"missing required field {key!r}")
    return doc[key]


def _read_dimension(dims: Any) -> int:
    if not isinstance(dims, dict):
        raise DocumentError("dims", "expected an object")
    n = _require(dims, "dimension", "dims.dimension")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DocumentError("dims.dimension", f"expected a positive integer, got {n!r}")
    return n


def _parse_document(doc: Any) -> tuple[str, Any]:
    """Parse a document into (kind, raw payload) without verification.

    Payloads: complex arrays for hadamard/qls/ueb, a 0-based int array for
    latin, and a dict with base_kind, control_dims, and an items list of
    arrays for controlled.
    """
    if not isinstance(doc, dict):
        raise DocumentError("", "document must be a JSON object")
    kind = _require(doc, "kind")
    if kind not in _KINDS:
        raise DocumentError("kind", f"unknown kind {kind!r}")
    allowed = {"kind", "dims", "index_base", "data"}
    if kind == "controlled":
        allowed.add("control_dims")
    extra = set(doc) - allowed
    if extra:
        raise DocumentError(sorted(extra)[0], "unexpected field")
    base = _require(doc, "index_base")
    if base != 1:
        raise DocumentError("index_base", f"expected 1, got {base!r}")
    dims = _require(doc, "dims")
    data = _require(doc, "data")

    if kind == "latin":
        n = _read_dimension(dims)
        return kind, _parse_latin_cells(data, n)
    if kind in _BASE_KINDS:
        n = _read_dimension(dims)
        return kind, _parse_array(data, _base_shape(kind, n), "data")
    return kind, _parse_controlled_raw(doc)


def document_to_structure(doc: Any, tol: Tolerance = DEFAULT_TOL) -> Structure:
    """Build and verify a structure from a parsed document."""
    kind, payload = _parse_document(doc)
    if kind == "latin":
        return LatinSquare(payload)
    if kind in _BASE_KINDS:
        return _wrap_base(kind, payload, tol)
    items = tuple(
        _wrap_base(payload["base_kind"], item, tol) for item in payload["items"]
    )
    return ControlledFamily(payload["control_dims"], items)


def _base_shape(kind: str, n: int) -> tuple[int, ...]:
    if kind == "hadamard":
        return (n, n)
    if kind == "qls":
        return (n, n, n)
    return (n * n, n, n)


def _wrap_base(kind: str, payload: np.ndarray, tol: Tolerance):
    if kind == "hadamard":
        return HadamardMatrix(payload, tol=tol)
    if kind == "qls":
        return QuantumLatinSquare(payload, tol=tol)
    return UnitaryErrorBasis(payload, tol=tol)


def _parse_latin_cells(data: Any, n: int) -> np.ndarray:
    cells = np.empty((n, n), dtype=np.int64)
    if not isinstance(data, list) or len(data) != n:
        raise DocumentError("data", f"expected {n} rows")
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != n:
            raise DocumentError(f"data[{i}]", f"expected {n} entries")
        for j, v in enumerate(row):
            if not isinstance(v, int) or isinstance(v, bool) or not 1 <= v <= n:
                raise DocumentError(
                    f"data[{i}][{j}]", f"expected an integer in 1..{n}, got {v!r}"
                )
            cells[i, j] = v - 1
    return cells


def _parse_controlled_raw(doc: dict) -> dict:
    dims = doc["dims"]
    if not isinstance(dims, dict):
        raise DocumentError("dims", "expected an object")
    base_kind = _require(dims, "base_kind", "dims.base_kind")
    if base_kind not in _BASE_KINDS:
        raise DocumentError("dims.base_kind", f"unknown base kind {base_kind!r}")
    n = _read_dimension(dims)
    control_dims = _require(doc, "control_dims")
    if (
        not isinstance(control_dims, list)
        or not control_dims
        or not all(isinstance(d, int) and not isinstance(d, bool) and d >= 1 for d in control_dims)
    ):
        raise DocumentError("control_dims", "expected a list of positive integers")
    control_dims = tuple(control_dims)
    count = math.prod(control_dims)
    data = doc["data"]
    if not isinstance(data, list) or len(data) != count:
        raise DocumentError("data", f"expected {count} items for {control_dims}")
    items: list = [None] * count
    for i, entry in enumerate(data):
        path = f"data[{i}]"
        if not isinstance(entry, dict):
            raise DocumentError(path, "expected an object with control_index and data")
        extra = set(entry) - {"control_index", "data"}
        if extra:
            raise DocumentError(f"{path}.{sorted(extra)[0]}", "unexpected field")
        idx = _require(entry, "control_index", f"{path}.control_index")
        if (
            not isinstance(idx, list)
            or len(idx) != len(control_dims)
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in idx)
            or not all(1 <= x <= d for x, d in zip(idx, control_dims))
        ):
            raise DocumentError(
                f"{path}.control_index",
                f"expected 1-based indices within {list(control_dims)}",
            )
        flat = int(np.ravel_multi_index([x - 1 for x in idx], control_dims))
        if items[flat] is not None:
            raise DocumentError(f"{path}.control_index", f"duplicate index {idx}")
        items[flat] = _parse_array(
            _require(entry, "data", f"{path}.data"),
            _base_shape(base_kind, n),
            f"{path}.data",
        )
    return {"base_kind": base_kind, "control_dims": control_dims, "items": items}


def structure_to_document(s: Structure) -> dict:
    """Plain-dict document form, deterministically ordered."""
    if isinstance(s, HadamardMatrix):
        return _base_doc("hadamard", s.n, _emit_array(s.matrix))
    if isinstance(s, QuantumLatinSquare):
        return _base_doc("qls", s.n, _emit_array(s.grid))
    if isinstance(s, UnitaryErrorBasis):
        return _base_doc("ueb", s.n, _emit_array(s.elements))
    if isinstance(s, LatinSquare):
        return _base_doc("latin", s.n, (s.cells + 1).tolist())
    if isinstance(s, ControlledFamily):
        items = []
        for i, item in enumerate(s.items):
            idx = [int(x) + 1 for x in np.unravel_index(i, s.control_dims)]
            payload = structure_to_document(item)["data"]
            items.append({"control_index": idx, "data": payload})
        return {
            "kind": "controlled",
            "dims": {"base_kind": s.base_kind, "dimension": s.base_dimension},
            "control_dims": list(s.control_dims),
            "index_base": 1,
            "data": items,
        }
    raise TypeError(f"cannot serialize {type(s).__name__}")


def _base_doc(kind: str, n: int, data) -> dict:
    return {"kind": kind, "dims": {"dimension": n}, "index_base": 1, "data": data}


def _read_document(path) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"line {exc.lineno}", f"invalid JSON: {exc.msg}") from exc


def load(path, tol: Tolerance = DEFAULT_TOL) -> Structure:
    """Read, parse, and verify a structure document."""
    return document_to_structure(_read_document(path), tol)


def load_raw(path) -> tuple[str, Any]:
    """Read and parse a document without verifying it.

    Returns (kind, payload) as described by the document layout; useful for
    running verifiers on candidates that may fail them.
    """
    return _parse_document(_read_document(path))


def save(structure: Structure, path) -> None:
    """Write a structure document; numbers round-trip doubles exactly."""
    doc = structure_to_document(structure)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, allow_nan=False, separators=(",", ":"))
        fh.write("\n")
