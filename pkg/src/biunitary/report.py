"""Verification report shared by verifiers and rotation checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

__all__ = ["BiunitaryReport"]


@dataclass(frozen=True)
class BiunitaryReport:
    """Outcome of a biunitarity check.

    vertical_ok:     the vertical (unitarity-flavored) axioms hold
    horizontal_ok:   the horizontal axioms hold at some scalar lam > 0
    lam:             the horizontal scalar, present whenever horizontal_ok
    worst_residual:  largest residual over all checked axioms
    detail:          per-axiom residual map (structural failures map to inf)
    failed:          names of axioms whose residual exceeded tolerance
    """

    vertical_ok: bool
    horizontal_ok: bool
    lam: float | None
    worst_residual: float
    detail: Mapping[str, float] = field(default_factory=dict)
    failed: tuple[str, ...] = ()
    note: str = ""

    def __post_init__(self):
        if self.horizontal_ok and self.lam is None:
            raise ValueError("horizontal_ok requires a scalar lam")
        if self.lam is not None and not self.lam > 0.0:
            raise ValueError("lam must be strictly positive when present")
        object.__setattr__(self, "detail", MappingProxyType(dict(self.detail)))

    @property
    def passed(self) -> bool:
        return self.vertical_ok and self.horizontal_ok

    def summary(self) -> str:
        status = "pass" if self.passed else "fail"
        lam = "-" if self.lam is None else f"{self.lam:g}"
        text = f"{status}, lambda={lam}, worst residual {self.worst_residual:.3e}"
        if self.failed:
            text += ", failed: " + ", ".join(self.failed)
        if self.note:
            text += f" ({self.note})"
        return text

    def to_json(self) -> dict:
        """Deterministically ordered plain-dict form for machine output."""
        return {
            "passed": self.passed,
            "vertical_ok": self.vertical_ok,
            "horizontal_ok": self.horizontal_ok,
            "lambda": self.lam,
            "worst_residual": self.worst_residual,
            "detail": {k: _finite(v) for k, v in sorted(self.detail.items())},
            "failed": list(self.failed),
            "note": self.note,
        }


def _finite(v: float):
    return v if math.isfinite(v) else "inf"
