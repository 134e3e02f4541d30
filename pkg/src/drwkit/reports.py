"""Structured pass/fail records shared by the verification code and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


def jsonable(x: Any) -> Any:
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (str, int, bool)) or x is None:
        return x
    return str(x)


@dataclass
class Check:
    name: str
    passed: bool
    lhs: Any = None
    rhs: Any = None
    witness: Any = None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "status": "pass" if self.passed else "fail",
            "lhs": jsonable(self.lhs),
            "rhs": jsonable(self.rhs),
            "witness": jsonable(self.witness),
        }


@dataclass
class VerificationReport:
    name: str
    params: dict
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, passed: bool, lhs: Any = None, rhs: Any = None, witness: Any = None) -> bool:
        self.checks.append(Check(name, bool(passed), lhs, rhs, witness))
        return bool(passed)

    def compare(self, name: str, lhs: Any, rhs: Any, witness: Any = None) -> bool:
        return self.add(name, lhs == rhs, lhs, rhs, witness if lhs != rhs else None)

    def merge(self, other: "VerificationReport", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.lhs, c.rhs, c.witness))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "params": jsonable(self.params),
            "status": "pass" if self.passed else "fail",
            "checks": [c.to_json() for c in self.checks],
        }
