"""Small pass/fail report container shared by the verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Check:
    name: str
    passed: bool
    detail: Any = None


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)

    def add(self, name: str, passed: bool, detail: Any = None) -> bool:
        self.checks.append(Check(name, bool(passed), detail))
        return bool(passed)

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.detail))

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "checks": [
                {"name": c.name, "pass": c.passed, **({"detail": c.detail} if c.detail is not None else {})}
                for c in self.checks
            ],
            **({"data": self.data} if self.data else {}),
        }

    def text(self) -> str:
        lines = [f"{self.title}: {'PASS' if self.ok else 'FAIL'}"]
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            extra = f"  ({c.detail})" if (c.detail is not None and not c.passed) else ""
            lines.append(f"  [{mark}] {c.name}{extra}")
        return "\n".join(lines)
