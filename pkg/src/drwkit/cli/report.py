"""Run reports: assembly, digest, JSON and CSV output."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass
from pathlib import Path

from ..errors import IOFailure


def canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def flatten_cases(reports: list[dict]) -> list[dict]:
    cases = []
    for rep in reports:
        for check in rep["checks"]:
            cases.append(
                {
                    "params": {**rep["params"], "check": check["name"]},
                    "status": check["status"],
                    "lhs": check["lhs"],
                    "rhs": check["rhs"],
                    "witness": check["witness"],
                }
            )
    return cases


@dataclass
class RunReport:
    config: dict
    suites: list[dict]  # [{"name": ..., "cases": [...]}]
    version: str
    wall_clock: float = 0.0

    @property
    def digest(self) -> str:
        payload = {"config": self.config, "suites": self.suites, "version": self.version}
        return hashlib.sha256(canonical_json(payload).encode()).hexdigest()

    @property
    def failures(self) -> int:
        return sum(1 for s in self.suites for c in s["cases"] if c["status"] != "pass")

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def summary(self) -> dict:
        return {
            s["name"]: {
                "cases": len(s["cases"]),
                "failed": sum(1 for c in s["cases"] if c["status"] != "pass"),
            }
            for s in self.suites
        }

    def to_json(self) -> dict:
        return {
            "config": self.config,
            "suites": self.suites,
            "version": self.version,
            "status": "pass" if self.passed else "fail",
            "wall_clock_seconds": round(self.wall_clock, 3),
            "digest": self.digest,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RunReport":
        report = cls(data["config"], data["suites"], data["version"], data.get("wall_clock_seconds", 0.0))
        if report.digest != data.get("digest", report.digest):
            raise ValueError("digest does not match report contents")
        return report

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["suite", "params", "status", "lhs", "rhs", "witness"])
        for s in self.suites:
            for c in s["cases"]:
                writer.writerow(
                    [s["name"], canonical_json(c["params"]), c["status"],
                     canonical_json(c["lhs"]), canonical_json(c["rhs"]), canonical_json(c["witness"])]
                )
        writer.writerow(["#digest", self.digest, "", "", "", ""])
        return buf.getvalue()

    def write(self, path: str | Path, fmt: str) -> None:
        text = self.to_csv() if fmt == "csv" else json.dumps(self.to_json(), indent=1, sort_keys=True) + "\n"
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise IOFailure(f"cannot write report to {path}: {exc}") from exc
