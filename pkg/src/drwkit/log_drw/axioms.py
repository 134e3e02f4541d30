"""The structure identities of the F-V-procomplex, checked on basis elements."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from ..reports import VerificationReport
from ..semistable import FrameShape, SemistablePoly, monomial_basis
from ..witt import (
    ExpansionTerm,
    frobenius_F,
    reassemble,
    restriction_R,
    semistable_witt_ring,
    teichmuller,
    verschiebung_V,
    witt_add,
)
from .model import (
    DRWElement,
    basis_elements,
    dlog_monoid,
    drw_d,
    drw_F,
    drw_mul,
    drw_pow,
    drw_R,
    drw_V,
    lambda_map,
    one,
)
from .weights import weights_in_box


def box_basis(shape: FrameShape, p: int, n: int, bound: int, degrees=None) -> list[DRWElement]:
    degrees = range(shape.d + 1) if degrees is None else degrees
    out = []
    for k in weights_in_box(shape, p, n, bound):
        for l in degrees:
            out.extend(basis_elements(k, shape, n, l))
    return out


def _sign_power(x: DRWElement) -> int:
    return -1 if x.degree % 2 else 1


def _record(report: VerificationReport, name: str, failures: list, total: int) -> None:
    report.add(name, not failures, lhs=total, witness=failures[:3] or None)


def _pairs(xs: list, ys: list, limit: int, rng: random.Random) -> list:
    pairs = [(x, y) for x in xs for y in ys if x.degree + y.degree <= x.shape.d]
    if len(pairs) > limit:
        pairs = rng.sample(pairs, limit)
    return pairs


def _witt_samples(shape: FrameShape, p: int, n: int, bound: int, rng: random.Random, count: int):
    ring = semistable_witt_ring(shape.d, shape.r, p)
    monos = monomial_basis(shape, bound)
    out = []
    # every single-term V^i([c t^e]) first, then random sums
    for e in monos:
        for depth in range(n):
            out.append(reassemble([ExpansionTerm(depth, 1, tuple(Fraction(x, p**depth) for x in e))], ring, p, n))
    for _ in range(count):
        x = reassemble([], ring, p, n)
        for _ in range(rng.randint(1, 3)):
            e = rng.choice(monos)
            depth = rng.randrange(n)
            term = ExpansionTerm(depth, rng.randrange(1, p**n), tuple(Fraction(v, p**depth) for v in e))
            x = witt_add(x, reassemble([term], ring, p, n))
        out.append(x)
    return ring, out


def axiom_report(
    p: int, n: int, shape: FrameShape, bound: int, seed: int = 0, pair_limit: int = 400
) -> VerificationReport:
    """Axioms (a)-(g), plus d^2 = 0, Rd = dR and the graded Leibniz rule.

    Single-element identities run over every basis element in the box; the
    two-argument identities run over all pairs up to ``pair_limit``, sampled
    with ``seed`` beyond that.
    """
    rng = random.Random(seed)
    report = VerificationReport(
        "fv-axioms", {"p": p, "n": n, "shape": [shape.d, shape.r], "box": bound, "seed": seed}
    )
    base = box_basis(shape, p, n, bound)
    up = box_basis(shape, p, n + 1, bound)
    up2 = box_basis(shape, p, n + 2, bound)

    # (a) the base map commutes with F, V, R
    ring, witts = _witt_samples(shape, p, n + 1, bound, rng, 20)
    fails = []
    for x in witts:
        lx = lambda_map(x)
        for name, witt_op, drw_op in (("F", frobenius_F, drw_F), ("R", restriction_R, drw_R)):
            if lambda_map(witt_op(x)) != drw_op(lx):
                fails.append(f"{name}: {x}")
    _, lower = _witt_samples(shape, p, n, bound, rng, 20)
    for y in lower:
        if lambda_map(verschiebung_V(y)) != drw_V(lambda_map(y)):
            fails.append(f"V: {y}")
    _record(report, "(a) lambda commutes with F, V, R", fails, len(witts) + len(lower))

    # (b) R commutes with F and V
    fails = [str(x) for x in up2 if drw_R(drw_F(x)) != drw_F(drw_R(x))]
    fails += [str(y) for y in up if drw_R(drw_V(y)) != drw_V(drw_R(y))]
    _record(report, "(b) RF = FR and RV = VR", fails, len(up2) + len(up))

    # (c) FV = p and (d) FdV = d
    fails = [str(y) for y in base if drw_F(drw_V(y)) != y.scale(p)]
    _record(report, "(c) FV = p", fails, len(base))
    fails = [str(y) for y in base if y.degree < shape.d and drw_F(drw_d(drw_V(y))) != drw_d(y)]
    _record(report, "(d) FdV = d", fails, len(base))

    # (e) V(F(x) y) = x V(y)
    fails = []
    pairs = _pairs(up, base, pair_limit, rng)
    for x, y in pairs:
        if drw_V(drw_mul(drw_F(x), y)) != drw_mul(x, drw_V(y)):
            fails.append(f"{x} | {y}")
    _record(report, "(e) V(F(x)y) = xV(y)", fails, len(pairs))

    # (f) F d lambda([b]) = lambda([b])^{p-1} d lambda([b])
    fails = []
    polys = [SemistablePoly.monomial(shape, p, e, c) for e in monomial_basis(shape, bound) for c in range(1, p)]
    monos = monomial_basis(shape, bound)
    for _ in range(10):
        a, b = rng.sample(monos, 2)
        polys.append(SemistablePoly.monomial(shape, p, a) + SemistablePoly.monomial(shape, p, b))
    for b in polys:
        top = lambda_map(teichmuller(ring, p, n + 1, b))
        low = lambda_map(teichmuller(ring, p, n, b))
        power = one(p, shape, n)
        for _ in range(p - 1):
            power = drw_mul(power, low)
        if drw_F(drw_d(top)) != drw_mul(power, drw_d(low)):
            fails.append(str(b))
    _record(report, "(f) Fd[b] = [b]^(p-1) d[b]", fails, len(polys))

    # (g) F dlog_{n+1}(m) = dlog_n(m)
    fails = []
    head = range(bound + 1)
    tail = range(-bound, bound + 1)
    monoid = list(itertools.product(*([head] * (shape.r + 1) + [tail] * (shape.d - shape.r))))
    for m in monoid:
        if drw_F(dlog_monoid(p, shape, n + 1, m)) != dlog_monoid(p, shape, n, m):
            fails.append(m)
    _record(report, "(g) F dlog = dlog", fails, len(monoid))

    # complex and algebra structure
    fails = [str(x) for x in base if x.degree + 2 <= shape.d and not drw_pow(drw_d, x, 2).is_zero()]
    _record(report, "d^2 = 0", fails, len(base))
    fails = [str(x) for x in up if x.degree < shape.d and drw_R(drw_d(x)) != drw_d(drw_R(x))]
    _record(report, "Rd = dR", fails, len(up))
    fails = []
    pairs = _pairs(base, base, pair_limit, rng)
    for x, y in pairs:
        if x.degree + y.degree >= shape.d:
            continue
        lhs = drw_d(drw_mul(x, y))
        rhs = drw_mul(drw_d(x), y) + drw_mul(x, drw_d(y)).scale(_sign_power(x))
        if lhs != rhs:
            fails.append(f"{x} | {y}")
    _record(report, "Leibniz", fails, len(pairs))
    return report
