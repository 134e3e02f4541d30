"""Command-line entry point: ``drwkit verify | cohomology | witt``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from importlib.metadata import PackageNotFoundError, version

from ..cartier_verify import WeightComplexModel, as_weight, predicted_decomposition
from ..errors import ConfigParse, DrwError, IOFailure
from ..semistable import FrameShape, monomial_basis
from ..witt import canonical_expansion
from . import config as cfgmod
from .report import RunReport, flatten_cases
from .suites import run_task
from .witt_expr import evaluate_text

DEFAULT_CONFIG = cfgmod.DEFAULT_CONFIG


def artifact_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0.0.0"


def tasks_for(cfg: cfgmod.HarnessConfig) -> list[tuple]:
    tasks = []
    for suite in cfg.suites:
        if suite == "witt":
            for p in cfg.primes:
                for n in cfg.levels_for(p):
                    tasks.append((suite, p, n, None, cfg.box, cfg.seed))
            continue
        for p, n, shape in cfg.grid():
            tasks.append((suite, p, n, shape, cfg.box, cfg.seed))
    return tasks


def cmd_verify(cfg: cfgmod.HarnessConfig) -> RunReport:
    """Run every selected suite over the parameter grid, in a fixed order."""
    start = time.perf_counter()
    tasks = tasks_for(cfg)
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(run_task, tasks))
    else:
        results = [run_task(t) for t in tasks]
    by_suite: dict[str, list[dict]] = {s: [] for s in cfg.suites}
    for task, reports in zip(tasks, results):
        by_suite[task[0]].extend(flatten_cases(reports))
    suites = [{"name": name, "cases": cases} for name, cases in by_suite.items()]
    return RunReport(cfg.echo(), suites, artifact_version(), time.perf_counter() - start)


def cohomology_rows(p: int, n: int, shape: FrameShape, m) -> list[dict]:
    k = as_weight(p, n, m)
    model = WeightComplexModel(p, n, shape, k)
    koszul_h = model.koszul.cohomology()
    rows = []
    for l in range(shape.d + 1):
        symbolic = model.symbolic_module(l)
        rows.append(
            {
                "weight": str(k),
                "degree": l,
                "symbolic": str(symbolic),
                "koszul": str(koszul_h[l]),
                "predicted": str(predicted_decomposition(p, n, l, k)),
            }
        )
    return rows


def _format_table(rows: list[dict]) -> str:
    header = ("degree", "symbolic", "koszul", "predicted")
    widths = [max(len(h), *(len(str(r[h])) for r in rows)) for h in header]
    lines = [f"weight {rows[0]['weight']}" if rows else "", "  ".join(h.ljust(w) for h, w in zip(header, widths))]
    for r in rows:
        lines.append("  ".join(str(r[h]).ljust(w) for h, w in zip(header, widths)))
    return "\n".join(lines)


def _int_csv(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigParse(f"expected comma-separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="drwkit", description="Exact de Rham-Witt and Koszul model checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites and write a report")
    v.add_argument("--config", help="JSON config file")
    v.add_argument("-p", "--p", help="primes, comma separated")
    v.add_argument("-n", "--n", help="levels, comma separated")
    v.add_argument("--shape", action="append", help="d,r (repeatable)")
    v.add_argument("--box", type=int, help="weight box bound")
    v.add_argument("--suite", action="append", help="suite name (repeatable or comma separated)")
    v.add_argument("--seed", type=int)
    v.add_argument("--out", help="report path")
    v.add_argument("--format", choices=cfgmod.FORMATS)
    v.add_argument("--jobs", type=int)

    c = sub.add_parser("cohomology", help="invariant factors from the three models")
    c.add_argument("-p", "--p", type=int, required=True)
    c.add_argument("-n", "--n", type=int, required=True)
    c.add_argument("--shape", default="1,1")
    group = c.add_mutually_exclusive_group(required=True)
    group.add_argument("--weight", help="integral vector p^n k on [0,d], or its d Koszul entries")
    group.add_argument("--box", type=int)
    c.add_argument("--format", choices=("table", "json"), default="table")

    w = sub.add_parser("witt", help="evaluate a Witt vector expression")
    w.add_argument("-p", "--p", type=int, required=True)
    w.add_argument("-n", "--n", type=int, required=True)
    w.add_argument("--shape", default="1,1")
    w.add_argument("expr")
    return parser


def _verify_config(args) -> cfgmod.HarnessConfig:
    cfg = cfgmod.load(args.config) if args.config else cfgmod.default()
    suites = None
    if args.suite is not None:
        suites = [s for part in args.suite for s in part.split(",") if s]
        if not suites:
            raise ConfigParse("at least one suite is required")
    primes = _int_csv(args.p) if args.p else None
    levels = _int_csv(args.n) if args.n else None
    return cfgmod.with_overrides(
        cfg,
        primes=primes,
        levels=levels,
        shapes=[cfgmod.parse_shape(s) for s in args.shape] if args.shape else None,
        box=args.box,
        suites=suites,
        seed=args.seed,
        output=args.out,
        format=args.format,
        jobs=args.jobs,
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            cfg = _verify_config(args)
            report = cmd_verify(cfg)
            if cfg.output:
                report.write(cfg.output, cfg.format)
            for name, s in report.summary().items():
                print(f"{name}: {s['cases'] - s['failed']}/{s['cases']} passed")
            print(f"digest {report.digest}")
            return 0 if report.passed else 1
        if args.command == "cohomology":
            shape = FrameShape(*cfgmod.parse_shape(args.shape))
            if args.weight:
                m = _int_csv(args.weight)
                if len(m) == shape.d:
                    # Koszul entries given directly: they are the weight with m_0 = 0
                    m = [0, *m]
                if len(m) != shape.nvars:
                    raise ConfigParse(f"weight needs {shape.d} or {shape.nvars} entries for d={shape.d}")
                weights = [m]
            else:
                # every integral weight in the box, vanishing components included
                weights = [list(e) for e in monomial_basis(shape, args.box)]
            tables = [cohomology_rows(args.p, args.n, shape, m) for m in weights]
            if args.format == "json":
                print(json.dumps(tables, indent=1))
            else:
                print("\n\n".join(_format_table(t) for t in tables))
            return 0
        if args.command == "witt":
            shape = FrameShape(*cfgmod.parse_shape(args.shape))
            x = evaluate_text(args.expr, args.p, args.n, shape)
            print("(" + ", ".join(str(c) for c in x.coords) + ")")
            terms = canonical_expansion(x)
            print("expansion: " + ("0" if not terms else ", ".join(
                f"(mu={t.depth}, eta={t.eta}, k=({', '.join(str(v) for v in t.weight)}))" for t in terms
            )))
            return 0
    except (ConfigParse, IOFailure, DrwError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
