"""Semistable coordinate rings S[t_0..t_r, t_{r+1}^{+-1}..t_d^{+-1}]/(t_0...t_r - pi).

Coordinates t_0..t_r are not inverted, t_{r+1}..t_d are Laurent variables.
A monomial is in normal form when min(e_0, ..., e_r) = 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ShapeMismatch

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class FrameShape:
    d: int
    r: int
    pi: int = 0

    def __post_init__(self):
        if not 0 <= self.r <= self.d:
            raise ValueError(f"need 0 <= r <= d, got d={self.d}, r={self.r}")

    @property
    def pi_is_zero(self) -> bool:
        return self.pi == 0

    @property
    def nvars(self) -> int:
        return self.d + 1


def split_crossing(e: Sequence[int], shape: FrameShape) -> tuple[int, Exponent]:
    """Return ``(c, e')`` with t^e = (t_0...t_r)^c t^{e'} and e' in normal form."""
    if len(e) != shape.nvars:
        raise ShapeMismatch(f"exponent of length {len(e)} for d={shape.d}")
    head = e[: shape.r + 1]
    if min(head) < 0:
        raise ValueError(f"negative exponent on a non-inverted coordinate: {tuple(e)}")
    c = min(head)
    if c == 0:
        return 0, tuple(e)
    return c, tuple(x - c if i <= shape.r else x for i, x in enumerate(e))


@dataclass(frozen=True)
class SemistablePoly:
    """Sparse polynomial with normal-form exponent keys, sorted lexicographically.

    ``modulus`` 0 means integer coefficients; otherwise coefficients are kept
    in ``[0, modulus)``.
    """

    shape: FrameShape
    modulus: int
    terms: tuple[tuple[Exponent, int], ...]

    @classmethod
    def build(cls, shape: FrameShape, modulus: int, raw: dict[Exponent, int] | Iterable[tuple[Exponent, int]]) -> "SemistablePoly":
        acc: dict[Exponent, int] = {}
        items = raw.items() if isinstance(raw, dict) else raw
        for e, c in items:
            k, e2 = split_crossing(e, shape)
            if k:
                c = c * shape.pi**k
            if c:
                acc[e2] = acc.get(e2, 0) + c
        if modulus:
            acc = {e: c % modulus for e, c in acc.items()}
        return cls(shape, modulus, tuple(sorted((e, c) for e, c in acc.items() if c)))

    @classmethod
    def monomial(cls, shape: FrameShape, modulus: int, e: Sequence[int], c: int = 1) -> "SemistablePoly":
        return cls.build(shape, modulus, {tuple(e): c})

    @classmethod
    def constant(cls, shape: FrameShape, modulus: int, c: int) -> "SemistablePoly":
        return cls.monomial(shape, modulus, (0,) * shape.nvars, c)

    def _check(self, other: "SemistablePoly") -> None:
        if self.shape != other.shape or self.modulus != other.modulus:
            raise ShapeMismatch(f"{self.shape}/{self.modulus} vs {other.shape}/{other.modulus}")

    def as_dict(self) -> dict[Exponent, int]:
        return dict(self.terms)

    def __add__(self, other: "SemistablePoly") -> "SemistablePoly":
        self._check(other)
        acc = self.as_dict()
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c
        return SemistablePoly.build(self.shape, self.modulus, acc)

    def __neg__(self) -> "SemistablePoly":
        return SemistablePoly.build(self.shape, self.modulus, {e: -c for e, c in self.terms})

    def __sub__(self, other: "SemistablePoly") -> "SemistablePoly":
        return self + (-other)

    def scale(self, c: int) -> "SemistablePoly":
        return SemistablePoly.build(self.shape, self.modulus, {e: c * x for e, x in self.terms})

    def __mul__(self, other: "SemistablePoly") -> "SemistablePoly":
        return poly_mul(self, other)

    def __pow__(self, k: int) -> "SemistablePoly":
        if k < 0:
            raise ValueError("negative power")
        out = SemistablePoly.constant(self.shape, self.modulus, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def reduce_mod(self, modulus: int) -> "SemistablePoly":
        return SemistablePoly.build(self.shape, modulus, self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            mono = "*".join(
                f"t{i}" if x == 1 else f"t{i}^{x}" for i, x in enumerate(e) if x
            )
            if not mono:
                parts.append(str(c))
            else:
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts)


def normalize_monomial(e: Sequence[int], shape: FrameShape, modulus: int = 0) -> SemistablePoly:
    """The monomial t^e rewritten in normal form (zero when pi = 0 and t_0...t_r divides it)."""
    return SemistablePoly.monomial(shape, modulus, e)


def poly_mul(a: SemistablePoly, b: SemistablePoly) -> SemistablePoly:
    a._check(b)
    acc: dict[Exponent, int] = {}
    for ea, ca in a.terms:
        for eb, cb in b.terms:
            e = tuple(x + y for x, y in zip(ea, eb))
            acc[e] = acc.get(e, 0) + ca * cb
    return SemistablePoly.build(a.shape, a.modulus, acc)


def monomial_basis(shape: FrameShape, bound: int, nonnegative: bool = False) -> list[Exponent]:
    """Normal-form exponents with |e_j| <= bound (all e_j >= 0 when ``nonnegative``)."""
    head = range(bound + 1)
    tail = range(0 if nonnegative else -bound, bound + 1)
    out = []
    for e in itertools.product(*([head] * (shape.r + 1) + [tail] * (shape.d - shape.r))):
        if min(e[: shape.r + 1]) == 0:
            out.append(tuple(e))
    return sorted(out)


class SemistableRing:
    """Coefficient-ring adapter used by the Witt vector code."""

    def __init__(self, shape: FrameShape, modulus: int):
        self.shape = shape
        self.modulus = modulus

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SemistableRing) and (self.shape, self.modulus) == (other.shape, other.modulus)

    def __hash__(self) -> int:
        return hash((self.shape, self.modulus))

    def __repr__(self) -> str:
        return f"SemistableRing(d={self.shape.d}, r={self.shape.r}, modulus={self.modulus})"

    def zero(self) -> SemistablePoly:
        return SemistablePoly(self.shape, self.modulus, ())

    def one(self) -> SemistablePoly:
        return SemistablePoly.constant(self.shape, self.modulus, 1)

    def from_int(self, c: int) -> SemistablePoly:
        return SemistablePoly.constant(self.shape, self.modulus, c)

    def coerce(self, x: SemistablePoly | int) -> SemistablePoly:
        if isinstance(x, int):
            return self.from_int(x)
        if x.shape != self.shape:
            raise ShapeMismatch("element from a different frame")
        return x if x.modulus == self.modulus else x.reduce_mod(self.modulus)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def scale(self, a, c: int):
        return a.scale(c)

    def power(self, a, k: int):
        return a**k

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def integral_lift(self) -> "SemistableRing":
        return SemistableRing(self.shape, 0)

    def lift(self, a: SemistablePoly) -> SemistablePoly:
        return a.reduce_mod(0)

    def reduce(self, a: SemistablePoly) -> SemistablePoly:
        return a.reduce_mod(self.modulus)

    def exact_div(self, a: SemistablePoly, c: int) -> SemistablePoly:
        if any(x % c for _, x in a.terms):
            raise ArithmeticError("inexact division")
        return SemistablePoly(a.shape, a.modulus, tuple((e, x // c) for e, x in a.terms))
