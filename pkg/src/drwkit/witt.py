"""Truncated p-typical Witt vectors over Z/p^m and over semistable F_p-algebras.

Ring operations use the universal sum, product, negation and Frobenius
polynomials, solved once over Z from the ghost identities and cached.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .errors import LengthMismatch, LengthTooShort
from .semistable import FrameShape, SemistablePoly, SemistableRing, split_crossing

# -- coefficient rings -----------------------------------------------------------


class IntegersMod:
    """Z/modulus as a coefficient ring (modulus 0 means Z itself)."""

    def __init__(self, modulus: int):
        self.modulus = modulus

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IntegersMod) and other.modulus == self.modulus

    def __hash__(self) -> int:
        return hash(("Z/", self.modulus))

    def __repr__(self) -> str:
        return f"IntegersMod({self.modulus})"

    def _r(self, a: int) -> int:
        return a % self.modulus if self.modulus else a

    def zero(self) -> int:
        return 0

    def one(self) -> int:
        return self._r(1)

    def from_int(self, c: int) -> int:
        return self._r(c)

    def coerce(self, x: int) -> int:
        return self._r(int(x))

    def add(self, a: int, b: int) -> int:
        return self._r(a + b)

    def mul(self, a: int, b: int) -> int:
        return self._r(a * b)

    def neg(self, a: int) -> int:
        return self._r(-a)

    def scale(self, a: int, c: int) -> int:
        return self._r(a * c)

    def power(self, a: int, k: int) -> int:
        return pow(a, k, self.modulus) if self.modulus else a**k

    def is_zero(self, a: int) -> bool:
        return a == 0

    def integral_lift(self) -> "IntegersMod":
        return IntegersMod(0)

    def lift(self, a: int) -> int:
        return a

    def reduce(self, a: int) -> int:
        return self._r(a)

    def exact_div(self, a: int, c: int) -> int:
        if a % c:
            raise ArithmeticError("inexact division")
        return a // c


# -- universal polynomials ---------------------------------------------------------

Poly = dict  # exponent tuple -> integer coefficient


def _pmul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def _padd(a: Poly, b: Poly, scale: int = 1) -> Poly:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + scale * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _ppow(a: Poly, k: int, nvars: int) -> Poly:
    out: Poly = {(0,) * nvars: 1}
    base = a
    while k:
        if k & 1:
            out = _pmul(out, base)
        k >>= 1
        if k:
            base = _pmul(base, base)
    return out


# A compiled term: (coefficient, ((slot, power), ...)); slot 0 for x_j is (0, j), for y_j (1, j)
Term = tuple[int, tuple[tuple[tuple[int, int], int], ...]]


class WittPolynomialCache:
    """Universal Witt polynomials over Z, computed on demand and memoized per prime.

    Kinds: ``add`` and ``mul`` in x_0.., y_0..; ``neg`` in x_0..; ``frob`` in
    x_0.. (index i uses x_0..x_{i+1}). Entries are only ever appended, so
    concurrent readers see a consistent prefix.
    """

    MAX_DEPTH = 8

    def __init__(self):
        self._store: dict[tuple[int, str], list[list[Term]]] = {}
        self._lock = threading.Lock()

    def get(self, p: int, kind: str, depth: int) -> list[list[Term]]:
        if depth > self.MAX_DEPTH:
            raise ValueError(f"depth {depth} exceeds the supported maximum {self.MAX_DEPTH}")
        key = (p, kind)
        polys = self._store.get(key)
        if polys is None or len(polys) < depth:
            with self._lock:
                polys = self._store.get(key)
                if polys is None or len(polys) < depth:
                    polys = _solve_universal(p, kind, depth)
                    self._store[key] = polys
        return polys[:depth]


def _solve_universal(p: int, kind: str, depth: int) -> list[list[Term]]:
    binary = kind in ("add", "mul")
    width = depth + 1 if kind == "frob" else depth
    nvars = 2 * width if binary else width

    def var(i: int) -> Poly:
        e = [0] * nvars
        e[i] = 1
        return {tuple(e): 1}

    xs = [var(i) for i in range(width)]
    ys = [var(width + i) for i in range(width)] if binary else []

    def ghost(v: list[Poly], i: int) -> Poly:
        out: Poly = {}
        for j in range(i + 1):
            out = _padd(out, _ppow(v[j], p ** (i - j), nvars), p**j)
        return out

    solved: list[Poly] = []
    for i in range(depth):
        if kind == "add":
            target = _padd(ghost(xs, i), ghost(ys, i))
        elif kind == "mul":
            target = _pmul(ghost(xs, i), ghost(ys, i))
        elif kind == "neg":
            target = {e: -c for e, c in ghost(xs, i).items()}
        elif kind == "frob":
            target = ghost(xs, i + 1)
        else:
            raise ValueError(f"unknown polynomial kind {kind!r}")
        for j in range(i):
            target = _padd(target, _ppow(solved[j], p ** (i - j), nvars), -(p**j))
        div = p**i
        if any(c % div for c in target.values()):
            raise ArithmeticError("ghost equations are not integrally solvable")
        solved.append({e: c // div for e, c in target.items()})

    compiled = []
    for poly in solved:
        terms = []
        for e, c in sorted(poly.items()):
            factors = tuple(
                ((idx // width, idx % width), k) for idx, k in enumerate(e) if k
            )
            terms.append((c, factors))
        compiled.append(terms)
    return compiled


UNIVERSAL = WittPolynomialCache()


def _evaluate(ring: Any, terms: list[Term], xs: Sequence, ys: Sequence = ()) -> Any:
    if isinstance(ring, IntegersMod):
        return _evaluate_int(ring.modulus, terms, xs, ys)
    if isinstance(ring, SemistableRing):
        return _evaluate_semistable(ring, terms, xs, ys)
    cache: dict = {}
    src = (xs, ys)
    total = ring.zero()
    for c, factors in terms:
        if any(ring.is_zero(src[w][j]) for (w, j), _ in factors):
            continue
        acc = None
        for slot, k in factors:
            key = (slot, k)
            val = cache.get(key)
            if val is None:
                val = ring.power(src[slot[0]][slot[1]], k)
                cache[key] = val
            acc = val if acc is None else ring.mul(acc, val)
        term = ring.from_int(c) if acc is None else ring.scale(acc, c)
        total = ring.add(total, term)
    return total


def _dict_mul(a: dict, b: dict, shape: FrameShape, modulus: int) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            k, e = split_crossing(tuple(x + y for x, y in zip(ea, eb)), shape)
            c = ca * cb * shape.pi**k if k else ca * cb
            if c:
                out[e] = out.get(e, 0) + c
    if modulus:
        return {e: c % modulus for e, c in out.items() if c % modulus}
    return {e: c for e, c in out.items() if c}


def _evaluate_semistable(ring: SemistableRing, terms: list[Term], xs: Sequence, ys: Sequence) -> SemistablePoly:
    """Same as the generic path, on plain dicts with a single normalization at the end."""
    shape, modulus = ring.shape, ring.modulus
    src = (
        [ring.coerce(x).as_dict() for x in xs],
        [ring.coerce(y).as_dict() for y in ys],
    )
    unit = {(0,) * shape.nvars: 1}
    powers: dict = {}
    total: dict = {}
    for c, factors in terms:
        if any(not src[w][j] for (w, j), _ in factors):
            continue
        acc = unit
        for slot, k in factors:
            val = powers.get((slot, k))
            if val is None:
                val, base, e = unit, src[slot[0]][slot[1]], k
                while e:
                    if e & 1:
                        val = _dict_mul(val, base, shape, modulus)
                    e >>= 1
                    if e:
                        base = _dict_mul(base, base, shape, modulus)
                powers[(slot, k)] = val
            acc = _dict_mul(acc, val, shape, modulus)
            if not acc:
                break
        for e, v in acc.items():
            total[e] = total.get(e, 0) + c * v
    return SemistablePoly.build(shape, modulus, total)


def _evaluate_int(modulus: int, terms: list[Term], xs: Sequence[int], ys: Sequence[int]) -> int:
    src = (xs, ys)
    total = 0
    for c, factors in terms:
        acc = c
        for (which, j), k in factors:
            v = src[which][j]
            if v == 0:
                acc = 0
                break
            acc *= v if k == 1 else pow(v, k, modulus) if modulus else v**k
        total += acc
    return total % modulus if modulus else total


# -- Witt vectors -------------------------------------------------------------------


@dataclass(frozen=True)
class WittVector:
    ring: Any
    p: int
    coords: tuple

    @property
    def n(self) -> int:
        return len(self.coords)

    def _check(self, other: "WittVector") -> None:
        if self.n != other.n:
            raise LengthMismatch(f"lengths {self.n} and {other.n}")
        if self.p != other.p or self.ring != other.ring:
            raise LengthMismatch("Witt vectors over different coefficient rings")

    def __add__(self, other: "WittVector") -> "WittVector":
        return witt_add(self, other)

    def __mul__(self, other: "WittVector") -> "WittVector":
        return witt_mul(self, other)

    def __neg__(self) -> "WittVector":
        return witt_neg(self)

    def __sub__(self, other: "WittVector") -> "WittVector":
        return witt_add(self, witt_neg(other))

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(a) for a in self.coords)

    def __str__(self) -> str:
        return "(" + ", ".join(str(a) for a in self.coords) + ")"


def witt_vector(ring: Any, p: int, coords: Sequence) -> WittVector:
    return WittVector(ring, p, tuple(ring.coerce(a) for a in coords))


def witt_zero(ring: Any, p: int, n: int) -> WittVector:
    return WittVector(ring, p, (ring.zero(),) * n)


def teichmuller(ring: Any, p: int, n: int, a) -> WittVector:
    return WittVector(ring, p, (ring.coerce(a),) + (ring.zero(),) * (n - 1))


def witt_add(x: WittVector, y: WittVector) -> WittVector:
    x._check(y)
    polys = UNIVERSAL.get(x.p, "add", x.n)
    return WittVector(x.ring, x.p, tuple(_evaluate(x.ring, t, x.coords, y.coords) for t in polys))


def witt_mul(x: WittVector, y: WittVector) -> WittVector:
    x._check(y)
    polys = UNIVERSAL.get(x.p, "mul", x.n)
    return WittVector(x.ring, x.p, tuple(_evaluate(x.ring, t, x.coords, y.coords) for t in polys))


def witt_neg(x: WittVector) -> WittVector:
    polys = UNIVERSAL.get(x.p, "neg", x.n)
    return WittVector(x.ring, x.p, tuple(_evaluate(x.ring, t, x.coords) for t in polys))


def witt_from_int(ring: Any, p: int, n: int, c: int) -> WittVector:
    one = teichmuller(ring, p, n, ring.one())
    return witt_scale(one, c)


def witt_scale(x: WittVector, c: int) -> WittVector:
    """The integer multiple c * x by double-and-add."""
    out = witt_zero(x.ring, x.p, x.n)
    base = x if c >= 0 else witt_neg(x)
    c = abs(c)
    while c:
        if c & 1:
            out = witt_add(out, base)
        c >>= 1
        if c:
            base = witt_add(base, base)
    return out


def frobenius_F(x: WittVector) -> WittVector:
    if x.n < 2:
        raise LengthTooShort("F needs length at least 2")
    polys = UNIVERSAL.get(x.p, "frob", x.n - 1)
    return WittVector(x.ring, x.p, tuple(_evaluate(x.ring, t, x.coords) for t in polys))


def verschiebung_V(x: WittVector) -> WittVector:
    return WittVector(x.ring, x.p, (x.ring.zero(),) + x.coords)


def restriction_R(x: WittVector) -> WittVector:
    if x.n < 2:
        raise LengthTooShort("R needs length at least 2")
    return WittVector(x.ring, x.p, x.coords[:-1])


def ghost(x: WittVector) -> list:
    """Ghost components of the integral lift of ``x``."""
    ring = x.ring.integral_lift()
    lifted = [x.ring.lift(a) for a in x.coords]
    out = []
    for i in range(x.n):
        acc = ring.zero()
        for j in range(i + 1):
            acc = ring.add(acc, ring.scale(ring.power(lifted[j], x.p ** (i - j)), x.p**j))
        out.append(acc)
    return out


# -- canonical expansion over semistable F_p-algebras ----------------------------------


def _ord_p(x: Fraction, p: int) -> int:
    num, den = x.numerator, x.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def weight_depth(k: Sequence[Fraction], p: int) -> int:
    """max(0, -min ord_p k_j) over the nonzero entries."""
    ords = [_ord_p(x, p) for x in k if x]
    return max(0, -min(ords)) if ords else 0


def teichmuller_residue(c: int, p: int, m: int) -> int:
    """The Teichmueller representative of c in Z/p^m."""
    mod = p**m
    return pow(c % p, p ** (m - 1), mod) if c % p else 0


@dataclass(frozen=True)
class ExpansionTerm:
    depth: int
    eta: int
    weight: tuple[Fraction, ...]

    def to_json(self) -> dict:
        return {"depth": self.depth, "eta": self.eta, "weight": [str(x) for x in self.weight]}


def _monomial_teichmuller(ring: SemistableRing, p: int, n: int, e: tuple[int, ...], c: int = 1) -> WittVector:
    return teichmuller(ring, p, n, SemistablePoly.monomial(ring.shape, ring.modulus, e, c))


def canonical_expansion(x: WittVector) -> list[ExpansionTerm]:
    """Write x in W_n(R) as sum over weights k of V^{mu(k)}(eta_k [t]^{p^{mu(k)} k}).

    Only F_p-coefficient semistable rings with pi = 0 are supported.
    """
    ring, p, n = x.ring, x.p, x.n
    if not isinstance(ring, SemistableRing) or ring.modulus != p:
        raise TypeError("canonical expansion needs Witt vectors over a semistable F_p-algebra")
    residual = x
    contrib: dict[tuple[Fraction, ...], int] = {}
    for i in range(n):
        a = residual.coords[i]
        if a.is_zero():
            continue
        sub = witt_zero(ring, p, n)
        for e, c in a.terms:
            piece = _monomial_teichmuller(ring, p, n - i, e, c)
            for _ in range(i):
                piece = verschiebung_V(piece)
            sub = witt_add(sub, piece)
            k = tuple(Fraction(v, p**i) for v in e)
            mu = weight_depth(k, p)
            level = n - mu
            contrib[k] = contrib.get(k, 0) + p ** (i - mu) * teichmuller_residue(c, p, level)
        residual = residual - sub
        if any(not residual.coords[j].is_zero() for j in range(i + 1)):
            raise ArithmeticError("expansion step failed to clear a coordinate")
    terms = []
    for k, eta in contrib.items():
        mu = weight_depth(k, p)
        eta %= p ** (n - mu)
        if eta:
            terms.append(ExpansionTerm(mu, eta, k))
    terms.sort(key=lambda t: (t.depth, t.weight))
    return terms


def reassemble(terms: Sequence[ExpansionTerm], ring: SemistableRing, p: int, n: int) -> WittVector:
    """Inverse of canonical_expansion: sum of V^mu(eta [t]^{p^mu k}) computed with Witt arithmetic."""
    total = witt_zero(ring, p, n)
    for t in terms:
        level = n - t.depth
        if level <= 0:
            continue
        scaled = tuple(x * p**t.depth for x in t.weight)
        if any(v.denominator != 1 for v in scaled):
            raise ValueError(f"weight {t.weight} is not integral after scaling by p^{t.depth}")
        e = tuple(int(v) for v in scaled)
        piece = witt_mul(witt_from_int(ring, p, level, t.eta), _monomial_teichmuller(ring, p, level, e))
        for _ in range(t.depth):
            piece = verschiebung_V(piece)
        total = witt_add(total, piece)
    return total


def semistable_witt_ring(d: int, r: int, p: int) -> SemistableRing:
    return SemistableRing(FrameShape(d, r), p)
