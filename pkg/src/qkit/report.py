"""Check records shared by all verifiers."""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["Check", "check", "all_pass"]


@dataclass(frozen=True)
class Check:
    """One verified identity: its defect, the tolerance it was held to, and the verdict.

    ``anchor`` names the mathematical statement the check exercises.
    """

    name: str
    anchor: str
    defect: float
    tolerance: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "defect": _json_float(self.defect),
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def _json_float(x: float):
    # JSON has no inf/nan
    if math.isfinite(x):
        return x
    return str(x)


def check(name: str, anchor: str, defect: float, tol: float, expect_small: bool = True) -> Check:
    """Build a record; with ``expect_small=False`` the check passes when the defect exceeds tol."""
    defect = float(defect)
    ok = defect <= tol if expect_small else defect > tol
    if math.isnan(defect):
        ok = False
    return Check(name, anchor, defect, tol, bool(ok))


def all_pass(checks) -> bool:
    return all(c.passed for c in checks)
