"""Verification reports: named checks with PASS/FAIL/INDETERMINATE status."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

PASS = "PASS"
FAIL = "FAIL"
INDETERMINATE = "INDETERMINATE"


@dataclass
class Check:
    name: str
    status: str
    witnesses: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.status == FAIL and not self.witnesses:
            raise ValueError(f"FAIL check {self.name!r} must carry a witness")


@dataclass
class Report:
    suite: str
    checks: list[Check] = field(default_factory=list)
    params: dict = field(default_factory=dict)
    seconds: float | None = None

    def add(self, name: str, ok: bool, witnesses: list[str] | None = None) -> None:
        self.checks.append(Check(name, PASS if ok else FAIL, witnesses or []))

    def add_indeterminate(self, name: str, reason: str) -> None:
        self.checks.append(Check(name, INDETERMINATE, [reason]))

    @property
    def ok(self) -> bool:
        return all(c.status == PASS for c in self.checks)

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "ok": self.ok,
            "params": self.params,
            "seconds": self.seconds,
            "checks": [
                {"name": c.name, "status": c.status, "witnesses": c.witnesses}
                for c in self.checks
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def render(self) -> str:
        lines = [f"suite: {self.suite}"]
        if self.params:
            lines.append("params: " + ", ".join(f"{k}={v}" for k, v in self.params.items()))
        for c in self.checks:
            lines.append(f"  [{c.status}] {c.name}")
            for w in c.witnesses:
                lines.append(f"        witness: {w}")
        lines.append(f"result: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines)
