"""Harness configuration: JSON file and command-line flags."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from ..base_rings import is_prime
from ..errors import ConfigParse, IOFailure

SUITES = ("witt", "basis", "fv-axioms", "kernel-lemmas", "cartier", "qkoszul", "eta", "compare")
FORMATS = ("json", "csv")

DEFAULT_CONFIG = {
    "primes": [2, 3],
    "levels": {"2": [1, 2, 3], "3": [1, 2]},
    "shapes": [[1, 1], [2, 1], [2, 2]],
    "box": 4,
    "seed": 20240601,
    "suites": list(SUITES),
    "output": "report.json",
    "format": "json",
}


@dataclass(frozen=True)
class HarnessConfig:
    primes: tuple[int, ...]
    levels: dict  # prime -> tuple of levels
    shapes: tuple[tuple[int, int], ...]
    box: int
    seed: int
    suites: tuple[str, ...]
    output: str | None = None
    format: str = "json"
    jobs: int = field(default=1, compare=False)

    def levels_for(self, p: int) -> tuple[int, ...]:
        return self.levels[p]

    def grid(self) -> list[tuple[int, int, tuple[int, int]]]:
        return [(p, n, s) for p in self.primes for n in self.levels_for(p) for s in self.shapes]

    def echo(self) -> dict:
        """Result-relevant fields, in canonical JSON form."""
        return {
            "primes": list(self.primes),
            "levels": {str(p): list(self.levels[p]) for p in self.primes},
            "shapes": [list(s) for s in self.shapes],
            "box": self.box,
            "seed": self.seed,
            "suites": list(self.suites),
        }


def _int_list(value, name: str) -> list[int]:
    if isinstance(value, int) and not isinstance(value, bool):
        return [value]
    if isinstance(value, str):
        value = [v for v in value.split(",") if v.strip()]
    try:
        return [int(v) for v in value]
    except (TypeError, ValueError) as exc:
        raise ConfigParse(f"{name}: expected integers, got {value!r}") from exc


def parse_shape(value) -> tuple[int, int]:
    parts = _int_list(value, "shape")
    if len(parts) != 2:
        raise ConfigParse(f"shape must be 'd,r', got {value!r}")
    d, r = parts
    if d < 1 or not 0 <= r <= d:
        raise ConfigParse(f"shape needs d >= 1 and 0 <= r <= d, got ({d}, {r})")
    return d, r


def from_dict(data: dict) -> HarnessConfig:
    unknown = set(data) - set(DEFAULT_CONFIG) - {"jobs"}
    if unknown:
        raise ConfigParse(f"unknown config keys: {sorted(unknown)}")
    merged = {**DEFAULT_CONFIG, **data}
    primes = _int_list(merged["primes"], "primes")
    if not primes or any(not is_prime(p) for p in primes):
        raise ConfigParse(f"primes must be a nonempty list of primes, got {primes}")
    raw_levels = merged["levels"]
    levels: dict[int, tuple[int, ...]] = {}
    for p in primes:
        if isinstance(raw_levels, dict):
            if str(p) not in raw_levels:
                raise ConfigParse(f"no levels given for p={p}")
            chosen = _int_list(raw_levels[str(p)], "levels")
        else:
            chosen = _int_list(raw_levels, "levels")
        if not chosen or min(chosen) < 1:
            raise ConfigParse(f"levels must be positive, got {chosen}")
        levels[p] = tuple(chosen)
    shapes = merged["shapes"]
    if not shapes:
        raise ConfigParse("shapes must be nonempty")
    shapes = tuple(parse_shape(s) for s in shapes)
    box = merged["box"]
    if not isinstance(box, int) or box < 1:
        raise ConfigParse(f"box must be a positive integer, got {box!r}")
    seed = merged["seed"]
    if not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise ConfigParse(f"seed must be a 64-bit unsigned integer, got {seed!r}")
    suites = merged["suites"]
    if isinstance(suites, str):
        suites = [s for s in suites.split(",") if s]
    if not suites:
        raise ConfigParse("at least one suite is required")
    bad = [s for s in suites if s not in SUITES]
    if bad:
        raise ConfigParse(f"unknown suites {bad}; choose from {list(SUITES)}")
    fmt = merged["format"]
    if fmt not in FORMATS:
        raise ConfigParse(f"format must be one of {FORMATS}, got {fmt!r}")
    jobs = merged.get("jobs", 1)
    if not isinstance(jobs, int) or jobs < 1:
        raise ConfigParse(f"jobs must be a positive integer, got {jobs!r}")
    return HarnessConfig(
        tuple(primes), levels, shapes, box, seed, tuple(dict.fromkeys(suites)),
        merged["output"], fmt, jobs,
    )


def load(path: str | Path) -> HarnessConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IOFailure(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParse(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigParse(f"{path}: top level must be an object")
    return from_dict(data)


def default() -> HarnessConfig:
    return from_dict({})


def with_overrides(cfg: HarnessConfig, **changes) -> HarnessConfig:
    """Replace fields given explicitly (None means "not given")."""
    data = {k: v for k, v in changes.items() if v is not None}
    if not data:
        return cfg
    base = asdict(cfg)
    base["levels"] = {str(p): list(v) for p, v in cfg.levels.items()}
    if "primes" in data and "levels" not in data:
        # keep the configured levels of primes we already know about
        data["levels"] = {
            str(p): base["levels"].get(str(p), [1]) for p in _int_list(data["primes"], "primes")
        }
    base.update(data)
    return from_dict(base)


__all__ = ["DEFAULT_CONFIG", "FORMATS", "HarnessConfig", "SUITES", "default", "from_dict", "load", "parse_shape", "with_overrides"]
