"""W_n Omega^l of the semistable special fiber in its canonical basis.

A basis element is a pair (k, P) of a weight and a partition of the weight
chain; its coefficient lives in Z/p^{n - mu(k)}. Operators are computed on
raw forms and the result is normalized back into the basis.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from ..errors import LevelMismatch, LevelTooSmall, MalformedExpression, ShapeMismatch
from ..exact_linalg import FiniteModule, Lattice
from ..semistable import FrameShape
from ..witt import WittVector, canonical_expansion
from .forms import (
    FD,
    Dlog,
    DVTeich,
    Expression,
    RawForm,
    VTeich,
    dlog_vector,
    ext_add,
    ext_wedge,
    expression_to_raw,
    kappa,
)
from .weights import INF, Partition, Weight, enumerate_partitions, interval_order, is_valid_laurent, ord_p


def _restrict(k: Weight, interval: Sequence[int]) -> tuple[Fraction, ...]:
    keep = set(interval)
    return tuple(v if i in keep else Fraction(0) for i, v in enumerate(k.values))


def _block_vector(k: Weight, block: Sequence[int], shape: FrameShape) -> dict:
    o = interval_order(k, block)
    if o == INF:
        vec: dict = {}
        for i in block:
            vec = ext_add(vec, dlog_vector(i, shape))
        return vec
    scale = Fraction(1, k.p ** int(o)) if o >= 0 else Fraction(k.p ** int(-o))
    return {I: c * scale for I, c in kappa(_restrict(k, block), shape).items()}


def basic_vector(k: Weight, P: Partition, shape: FrameShape) -> dict:
    """Exterior vector of the basic element with coefficient 1, in closed form."""
    vec: dict = {(): Fraction(1)}
    if P.head:
        o = interval_order(k, P.head)
        vec = {(): Fraction(k.p ** max(0, -int(o)))} if o != INF else vec
    for block in P.blocks:
        vec = ext_wedge(vec, _block_vector(k, block, shape))
    return vec


@dataclass(frozen=True)
class Component:
    """Basis data of the weight-k part of W Omega^l (level independent)."""

    partitions: tuple[Partition, ...]
    subsets: tuple[tuple[int, ...], ...]
    columns: tuple[tuple[Fraction, ...], ...]  # basic vectors, one per partition
    inverse: tuple[tuple[Fraction, ...], ...]  # rows indexed by partitions

    @property
    def rank(self) -> int:
        return len(self.partitions)


def _invert(mat: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(mat)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            raise ArithmeticError("basis vectors are linearly dependent")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


@lru_cache(maxsize=None)
def component(k: Weight, shape: FrameShape, degree: int) -> Component:
    if not is_valid_laurent(k, shape):
        raise MalformedExpression(f"{k} is not a valid weight for d={shape.d}, r={shape.r}")
    parts = tuple(enumerate_partitions(k, shape, "laurent", degree))
    subsets = tuple(itertools.combinations(range(1, shape.d + 1), degree))
    cols = []
    for P in parts:
        vec = basic_vector(k, P, shape)
        cols.append(tuple(vec.get(I, Fraction(0)) for I in subsets))
    if len(parts) != len(subsets):
        raise ArithmeticError(
            f"{len(parts)} partitions against rank {len(subsets)} in degree {degree} for {k}"
        )
    if not parts:
        return Component((), subsets, (), ())
    mat = [[cols[j][i] for j in range(len(parts))] for i in range(len(subsets))]
    return Component(parts, subsets, tuple(cols), tuple(tuple(r) for r in _invert(mat)))


def integral_lattice(k: Weight, shape: FrameShape, degree: int) -> Lattice:
    """Integer vectors w with kappa(k) ^ w p-integral (the weight-k lattice, p-locally)."""
    subsets = list(itertools.combinations(range(1, shape.d + 1), degree))
    targets = list(itertools.combinations(range(1, shape.d + 1), degree + 1))
    kap = kappa(k.values, shape)
    den = 1
    for c in kap.values():
        den = max(den, c.denominator)
    rows = [[0] * len(subsets) for _ in targets]
    tindex = {J: i for i, J in enumerate(targets)}
    for j, I in enumerate(subsets):
        for J, c in ext_wedge(kap, {I: Fraction(1)}).items():
            rows[tindex[J]][j] = int(c * den)
    full = Lattice.full(len(subsets))
    if not targets:
        return full
    return full.preimage(rows, Lattice.full(len(targets), den))


def basis_index(k: Weight, shape: FrameShape, degree: int) -> FiniteModule:
    """Index of the span of the basic vectors inside the integral lattice.

    The basic elements form a basis exactly when this index is prime to p.
    """
    comp = component(k, shape, degree)
    lat = integral_lattice(k, shape, degree)
    gens = []
    for col in comp.columns:
        if any(c.denominator != 1 for c in col):
            raise ArithmeticError("basic vector with a non-integral entry")
        gens.append([int(c) for c in col])
    span = Lattice.span(gens, len(comp.subsets))
    if not lat.contains_lattice(span):
        raise ArithmeticError(f"basic vectors of {k} leave the integral lattice")
    return lat.quotient(span)


# -- elements -----------------------------------------------------------------------


def _term_key(t: tuple) -> tuple:
    k, P, _ = t
    return (k.sort_key(), P.degree, P.intervals)


@dataclass(frozen=True)
class DRWElement:
    p: int
    shape: FrameShape
    n: int
    degree: int
    terms: tuple  # ((Weight, Partition, coefficient), ...) sorted, coefficients nonzero

    def _check(self, other: "DRWElement") -> None:
        if (self.p, self.shape) != (other.p, other.shape):
            raise ShapeMismatch("elements over different frames")
        if self.n != other.n:
            raise LevelMismatch(f"levels {self.n} and {other.n}")

    def to_raw(self) -> RawForm:
        data: dict = {}
        for k, P, c in self.terms:
            comp = component(k, self.shape, self.degree)
            col = comp.columns[comp.partitions.index(P)]
            vec = data.setdefault(k.values, {})
            for I, x in zip(comp.subsets, col):
                if x:
                    vec[I] = vec.get(I, 0) + c * x
        return RawForm.build(self.p, self.shape, data)

    def __add__(self, other: "DRWElement") -> "DRWElement":
        self._check(other)
        if self.degree != other.degree:
            raise LevelMismatch("adding forms of different degrees")
        return normalize(self.to_raw() + other.to_raw(), self.n, self.degree)

    def __neg__(self) -> "DRWElement":
        return self.scale(-1)

    def __sub__(self, other: "DRWElement") -> "DRWElement":
        return self + (-other)

    def scale(self, c: int) -> "DRWElement":
        terms = []
        for k, P, x in self.terms:
            mod = self.p ** (self.n - k.depth)
            v = (x * c) % mod
            if v:
                terms.append((k, P, v))
        return DRWElement(self.p, self.shape, self.n, self.degree, tuple(terms))

    def is_zero(self) -> bool:
        return not self.terms

    def weights(self) -> list[Weight]:
        return sorted({k for k, _, _ in self.terms}, key=Weight.sort_key)

    def coefficient(self, k: Weight, P: Partition) -> int:
        for k2, P2, c in self.terms:
            if k2 == k and P2 == P:
                return c
        return 0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "degree": self.degree,
            "terms": [
                {"weight": [str(v) for v in k.values], "partition": P.to_json(), "coeff": c}
                for k, P, c in self.terms
            ],
        }

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*e({k}; {P})" for k, P, c in self.terms)


def zero(p: int, shape: FrameShape, n: int, degree: int) -> DRWElement:
    return DRWElement(p, shape, n, degree, ())


def _reduce(c: Fraction, mod: int) -> int:
    return (c.numerator * pow(c.denominator, -1, mod)) % mod if mod > 1 else 0


def normalize(raw: RawForm, n: int, degree: int) -> DRWElement:
    """Unique basis expansion of a raw form at level n.

    Raises MalformedExpression when the form is not integral, has mixed degree,
    or carries an invalid weight.
    """
    if n < 1:
        raise LevelTooSmall("level must be at least 1")
    p, shape = raw.p, raw.shape
    terms = []
    for kvals, vec in raw.terms:
        if any(len(I) != degree for I, _ in vec):
            raise MalformedExpression(f"form of degree {sorted({len(I) for I, _ in vec})}, expected {degree}")
        k = Weight(p, kvals)
        if not is_valid_laurent(k, shape):
            raise MalformedExpression(f"weight {k} is not in normal form")
        comp = component(k, shape, degree)
        w = [dict(vec).get(I, Fraction(0)) for I in comp.subsets]
        coords = [sum(a * b for a, b in zip(row, w)) for row in comp.inverse]
        for c in coords:
            if c and ord_p(c, p) < 0:
                raise MalformedExpression(f"form at weight {k} is not p-integral")
        mu = k.depth
        if mu >= n:
            continue
        mod = p ** (n - mu)
        for P, c in zip(comp.partitions, coords):
            v = _reduce(c, mod)
            if v:
                terms.append((k, P, v))
    terms.sort(key=_term_key)
    return DRWElement(p, shape, n, degree, tuple(terms))


def normalize_expression(expr: Expression, p: int, shape: FrameShape, n: int, degree: int) -> DRWElement:
    return normalize(expression_to_raw(expr, p, shape), n, degree)


def basic(k: Weight, P: Partition, eta: int, n: int, shape: FrameShape) -> DRWElement:
    """The basic element with coefficient eta (reduced mod p^{n - mu(k)})."""
    comp = component(k, shape, P.degree)
    if P not in comp.partitions:
        raise MalformedExpression(f"{P} is not a partition of the chain of {k}")
    mu = k.depth
    terms = ()
    if mu < n:
        v = eta % k.p ** (n - mu)
        if v:
            terms = ((k, P, v),)
    return DRWElement(k.p, shape, n, P.degree, terms)


def basis_elements(k: Weight, shape: FrameShape, n: int, degree: int) -> list[DRWElement]:
    if k.depth >= n:
        return []
    return [basic(k, P, 1, n, shape) for P in component(k, shape, degree).partitions]


def basic_expression(k: Weight, P: Partition, eta: int) -> Expression:
    """The basic element written with V, dV, F^{-tau}d and dlog factors."""
    p = k.p
    factors = []
    lead_done = False

    def exponent(block: Sequence[int], shift: int) -> tuple[int, ...]:
        vals = _restrict(k, block)
        scaled = [v * Fraction(p) ** shift for v in vals]
        if any(v.denominator != 1 for v in scaled):
            raise ArithmeticError("non-integral exponent in a basic element")
        return tuple(int(v) for v in scaled)

    if P.head:
        mu0 = max(0, -int(interval_order(k, P.head))) if interval_order(k, P.head) != INF else 0
        factors.append(VTeich(mu0, eta, exponent(P.head, mu0)))
        lead_done = True
    coeff = 1
    for block in P.blocks:
        o = interval_order(k, block)
        if o == INF:
            factors.append(Dlog(tuple(block)))
        elif o < 0:
            mu = int(-o)
            factors.append(DVTeich(mu, 1 if lead_done else eta, exponent(block, mu)))
            lead_done = True
        else:
            factors.append(FD(int(o), exponent(block, -int(o))))
            if not lead_done:
                coeff = eta
                lead_done = True
    if not lead_done:
        coeff = eta
    return [(coeff, factors)]


# -- operators ----------------------------------------------------------------------


def drw_d(x: DRWElement) -> DRWElement:
    return normalize(x.to_raw().d(), x.n, x.degree + 1)


def drw_F(x: DRWElement) -> DRWElement:
    if x.n < 2:
        raise LevelTooSmall("F lands in level n - 1 >= 1")
    return normalize(x.to_raw().frobenius(), x.n - 1, x.degree)


def drw_V(x: DRWElement) -> DRWElement:
    return normalize(x.to_raw().verschiebung(), x.n + 1, x.degree)


def drw_R(x: DRWElement) -> DRWElement:
    if x.n < 2:
        raise LevelTooSmall("R lands in level n - 1 >= 1")
    return normalize(x.to_raw(), x.n - 1, x.degree)


def drw_mul(x: DRWElement, y: DRWElement) -> DRWElement:
    x._check(y)
    return normalize(x.to_raw().wedge(y.to_raw()), x.n, x.degree + y.degree)


def drw_pow(op, x: DRWElement, times: int) -> DRWElement:
    for _ in range(times):
        x = op(x)
    return x


def one(p: int, shape: FrameShape, n: int) -> DRWElement:
    return teichmuller_monomial(p, shape, n, (0,) * shape.nvars)


def teichmuller_monomial(p: int, shape: FrameShape, n: int, e: Sequence[int]) -> DRWElement:
    """lambda_n([t]^e) for an integral exponent vector."""
    return normalize_expression([(1, [VTeich(0, 1, tuple(e))])], p, shape, n, 0)


def dlog_monoid(p: int, shape: FrameShape, n: int, m: Sequence[int]) -> DRWElement:
    """The log derivative of the monoid element t^m (m_0..m_r >= 0)."""
    vec: dict = {}
    for i, c in enumerate(m):
        if c:
            vec = ext_add(vec, dlog_vector(i, shape), c)
    return normalize(RawForm.monomial(p, shape, (0,) * shape.nvars, vec), n, 1)


def lambda_map(x: WittVector) -> DRWElement:
    """W_n(R) -> W_n Omega^0 through the canonical expansion."""
    shape = x.ring.shape
    out = zero(x.p, shape, x.n, 0)
    terms = []
    for t in canonical_expansion(x):
        k = Weight(x.p, t.weight)
        (P,) = component(k, shape, 0).partitions
        terms.append((k, P, t.eta))
    terms.sort(key=_term_key)
    return DRWElement(x.p, shape, x.n, 0, tuple(terms)) if terms else out


def component_rank(shape: FrameShape, degree: int) -> int:
    return comb(shape.d, degree)


def iter_terms(elements: Iterable[DRWElement]) -> Iterable[tuple]:
    for e in elements:
        yield from e.terms
