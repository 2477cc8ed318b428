"""Check reports: named verdicts with optional counterexample words."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .lang import Word, format_word


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: Word | None = None
    note: str = ""

    def to_dict(self) -> dict:
        d: dict = {"name": self.name, "verdict": "pass" if self.passed else "fail"}
        if self.witness is not None:
            d["witness"] = format_word(self.witness)
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class Report:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def add(self, name: str, passed: bool, witness: Word | None = None, note: str = "") -> None:
        self.checks.append(CheckResult(name, passed, witness, note))

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }

    def render(self) -> str:
        lines = []
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            line = f"[{mark}] {c.name}"
            if c.witness is not None:
                line += f"  witness: {format_word(c.witness)}"
            if c.note:
                line += f"  ({c.note})"
            lines.append(line)
        return "\n".join(lines)


def merged(reports: Iterable[Report]) -> Report:
    out = Report()
    for r in reports:
        out.extend(r)
    return out
