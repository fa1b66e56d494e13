"""Outcome records shared by every verifier."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional


def _plain(value: Any) -> Any:
    """Coerce a value into something json can write without losing exactness."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        # large ints go out as decimal strings so readers never round them
        return value if abs(value) < 2**53 else str(value)
    if isinstance(value, float):
        return value
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if hasattr(value, "to_json"):
        return value.to_json()
    if hasattr(value, "item"):  # numpy scalars
        return _plain(value.item())
    return str(value)


@dataclass
class Verdict:
    """Result of checking one identity at one parameter point."""

    check: str
    params: dict
    passed: Optional[bool]
    lhs: Any = None
    rhs: Any = None
    observed_sign: Optional[int] = None
    note: str = ""
    items: list["Verdict"] = field(default_factory=list)

    def __bool__(self) -> bool:
        return bool(self.passed)

    def to_json(self) -> dict:
        out = {
            "check": self.check,
            "params": _plain(self.params),
            "pass": self.passed,
            "lhs": _plain(self.lhs),
            "rhs": _plain(self.rhs),
        }
        if self.observed_sign is not None:
            out["observed_sign"] = self.observed_sign
        if self.note:
            out["note"] = self.note
        if self.items:
            out["items"] = [v.to_json() for v in self.items]
        return out


def bundle(check: str, params: dict, items: list[Verdict]) -> Verdict:
    """Collapse item verdicts into one; report-only items (passed=None) never fail it."""
    return Verdict(check, params, not any(v.passed is False for v in items), items=items)
