"""Verification suites run by the harness, one task per parameter point."""

from __future__ import annotations

import hashlib
import random
from math import comb

from ..base_rings import CycloTruncElem
from ..cartier_verify import (
    cartier_inverse_1,
    cartier_multiplicativity,
    cartier_n,
    compare_models,
    entries,
    eta_q_identity_check,
    qkoszul_report,
    qkoszul_weight_complex,
    raw_coordinates,
    sample_pairs,
)
from ..homological import eta_mod_f_comparison, koszul
from ..log_drw import (
    basis_elements,
    basis_index,
    component,
    normalize_expression,
    basic_expression,
    weights_in_box,
)
from ..log_drw.axioms import axiom_report
from ..reports import VerificationReport
from ..semistable import FrameShape
from ..witt import IntegersMod, witt_add, witt_mul, witt_vector
from .oracles import witt_oracle

WITT_PAIRS = 1000


def task_seed(seed: int, *key) -> int:
    digest = hashlib.sha256(repr((seed,) + key).encode()).digest()
    return int.from_bytes(digest[:8], "big")


def witt_suite(p: int, n: int, seed: int, pairs: int = WITT_PAIRS) -> list[VerificationReport]:
    out = []
    for modulus in (p, p * p):
        rng = random.Random(task_seed(seed, "witt", p, n, modulus))
        ring = IntegersMod(modulus)
        report = VerificationReport("witt", {"p": p, "n": n, "modulus": modulus, "pairs": pairs})
        bad = {"add": [], "mul": []}
        for _ in range(pairs):
            a = [rng.randrange(modulus) for _ in range(n)]
            b = [rng.randrange(modulus) for _ in range(n)]
            x, y = witt_vector(ring, p, a), witt_vector(ring, p, b)
            for op, fn in (("add", witt_add), ("mul", witt_mul)):
                got = list(fn(x, y).coords)
                want = witt_oracle(op, a, b, p, modulus)
                if got != want:
                    bad[op].append({"a": a, "b": b, "got": got, "oracle": want})
        for op in ("add", "mul"):
            report.add(f"{op} vs ghost oracle", not bad[op], lhs=len(bad[op]), rhs=0, witness=bad[op][:3] or None)
        out.append(report)
    return out


def basis_suite(p: int, n: int, shape: FrameShape, box: int) -> list[VerificationReport]:
    out = []
    for k in weights_in_box(shape, p, n, box):
        report = VerificationReport("basis", {"p": p, "n": n, "shape": [shape.d, shape.r], "k": str(k)})
        for l in range(shape.d + 1):
            comp = component(k, shape, l)
            report.compare(f"rank l={l}", comp.rank, comb(shape.d, l))
            index = basis_index(k, shape, l)
            report.compare(f"basis index prime to p l={l}", all(f % p for f in index.factors), True, str(index))
            bad = []
            for e in basis_elements(k, shape, n, l):
                (_, P, _), = e.terms
                back = normalize_expression(basic_expression(k, P, 1), p, shape, n, l)
                if back != e:
                    bad.append(str(P))
            report.add(f"round trip l={l}", not bad, witness=bad or None)
        out.append(report)
    return out


def axioms_suite(p: int, n: int, shape: FrameShape, box: int, seed: int) -> list[VerificationReport]:
    return [axiom_report(p, n, shape, box, task_seed(seed, "fv", p, n, shape.d, shape.r))]


def kernel_suite(p: int, n: int, shape: FrameShape, box: int) -> list[VerificationReport]:
    from ..cartier_verify import kernel_lemma_suite

    return [kernel_lemma_suite(p, n, shape.d, shape.r, box)]


def cartier_suite(p: int, n: int, shape: FrameShape, box: int, seed: int) -> list[VerificationReport]:
    out = []
    weights = weights_in_box(shape, p, n, box)
    for k in weights:
        for l in range(shape.d + 1):
            matrix, report = cartier_n(p, n, l, k, shape)
            if n == 1:
                bad = []
                for j, e in enumerate(basis_elements(k, shape, 1, l)):
                    image = cartier_inverse_1(e)
                    coords = [x % p for x in raw_coordinates(image, k.scaled(p))]
                    if coords != [row[j] % p for row in matrix]:
                        bad.append(j)
                report.add("agrees with level-one inverse Cartier", not bad, witness=bad or None)
            out.append(report)
    rng = random.Random(task_seed(seed, "cartier", p, n, shape.d, shape.r))
    for k1, k2 in sample_pairs(weights, 6, rng.randrange(2**32)):
        for a in range(shape.d + 1):
            for b in range(shape.d + 1 - a):
                r = cartier_multiplicativity(p, n, shape, k1, k2, a, b)
                if r.checks:
                    out.append(r)
    return out


def _entry_lists(p: int, n: int, shape: FrameShape, box: int) -> list[list[int]]:
    seen = {}
    for k in weights_in_box(shape, p, n, box):
        e = tuple(entries(k.integral_vector(n), shape))
        seen.setdefault(e, None)
    return [list(e) for e in seen]


def qkoszul_suite(p: int, n: int, shape: FrameShape, box: int) -> list[VerificationReport]:
    return [qkoszul_report(p, n, e) for e in _entry_lists(p, n, shape, box)]


def eta_suite(p: int, n: int, shape: FrameShape, box: int) -> list[VerificationReport]:
    out = []
    mu = CycloTruncElem.q_power(p, n, 1) - CycloTruncElem.constant(p, n, 1)
    for e in _entry_lists(p, n, shape, box):
        out.append(eta_q_identity_check(p, n, e))
        out.append(eta_mod_f_comparison(koszul(0, e), p))
        out.append(eta_mod_f_comparison(qkoszul_weight_complex(p, n, e), mu))
    return out


def compare_suite(p: int, n: int, shape: FrameShape, box: int) -> list[VerificationReport]:
    return [
        compare_models(p, n, l, k, shape)
        for k in weights_in_box(shape, p, n, box)
        for l in range(shape.d + 1)
    ]


def run_task(task: tuple) -> list[dict]:
    """Worker entry point; returns JSON-ready reports so results pickle cheaply."""
    suite, p, n, shape, box, seed = task
    fs = FrameShape(*shape) if shape else None
    if suite == "witt":
        reports = witt_suite(p, n, seed)
    elif suite == "basis":
        reports = basis_suite(p, n, fs, box)
    elif suite == "fv-axioms":
        reports = axioms_suite(p, n, fs, box, seed)
    elif suite == "kernel-lemmas":
        reports = kernel_suite(p, n, fs, box)
    elif suite == "cartier":
        reports = cartier_suite(p, n, fs, box, seed)
    elif suite == "qkoszul":
        reports = qkoszul_suite(p, n, fs, box)
    elif suite == "eta":
        reports = eta_suite(p, n, fs, box)
    elif suite == "compare":
        reports = compare_suite(p, n, fs, box)
    else:
        raise ValueError(f"unknown suite {suite}")
    return [r.to_json() for r in reports]
