"""Pass/fail records produced by every law and lemma suite."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckReport:
    """Outcome of one check. ``witness`` is set iff the check failed."""

    lemma: str
    passed: bool = True
    cases: int = 0
    witness: Any = None
    notes: list = field(default_factory=list)

    def record(self, ok: bool, witness=None) -> bool:
        """Count one case; keep the first failing witness. Returns ``ok``.

        ``witness`` may be a zero-argument callable, evaluated only on failure.
        """
        self.cases += 1
        if not ok and self.passed:
            self.passed = False
            if callable(witness):
                witness = witness()
            self.witness = witness if witness is not None else "unspecified"
        return ok

    def absorb(self, other: "CheckReport") -> "CheckReport":
        self.cases += other.cases
        if not other.passed and self.passed:
            self.passed = False
            self.witness = {"sub": other.lemma, "witness": other.witness}
        return self

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        out = {"lemma": self.lemma, "status": self.status, "cases": self.cases}
        if not self.passed:
            out["witness"] = _plain(self.witness)
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _plain(obj):
    """Best-effort JSON-friendly rendering of witnesses."""
    from fractions import Fraction

    if isinstance(obj, Fraction):
        from .rational import format_rational
        return format_rational(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (frozenset, set)):
        return sorted(_plain(v) for v in obj)
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return repr(obj)
