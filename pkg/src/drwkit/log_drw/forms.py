"""Raw forms: finite sums T^k * w with k in Z[1/p]^{d+1} and w an exterior vector.

Exterior vectors live on the free basis dlog T_1, ..., dlog T_d; the relation
dlog T_0 + ... + dlog T_r = 0 is used to eliminate dlog T_0. On raw forms

    F(T^k w) = T^{pk} w,   V(T^k w) = p T^{k/p} w,   d(T^k w) = T^k kappa(k) ^ w,

with kappa(k) = sum_i k_i dlog T_i. An element of W_n Omega is a raw form whose
coefficients and differential are p-integral, taken modulo the image of
V^n and dV^n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from ..errors import MalformedExpression
from ..semistable import FrameShape

Ext = dict  # sorted index tuple -> Fraction
WeightKey = tuple  # tuple of Fractions


def ext_wedge(a: Ext, b: Ext) -> Ext:
    out: Ext = {}
    for I, x in a.items():
        for J, y in b.items():
            if set(I) & set(J):
                continue
            merged = I + J
            # sign of the sorting permutation via inversion count
            inv = sum(1 for i in I for j in J if i > j)
            key = tuple(sorted(merged))
            val = out.get(key, 0) + (-x * y if inv % 2 else x * y)
            if val:
                out[key] = val
            else:
                out.pop(key, None)
    return out


def ext_add(a: Ext, b: Ext, scale: Fraction | int = 1) -> Ext:
    out = dict(a)
    for I, y in b.items():
        v = out.get(I, 0) + scale * y
        if v:
            out[I] = v
        else:
            out.pop(I, None)
    return out


def dlog_vector(i: int, shape: FrameShape) -> Ext:
    """dlog T_i in the basis dlog T_1..dlog T_d."""
    if i == 0:
        return {(j,): Fraction(-1) for j in range(1, shape.r + 1)}
    return {(i,): Fraction(1)}


def kappa(k: Sequence[Fraction], shape: FrameShape) -> Ext:
    out: Ext = {}
    for i, v in enumerate(k):
        if v:
            out = ext_add(out, dlog_vector(i, shape), v)
    return out


@dataclass(frozen=True)
class RawForm:
    p: int
    shape: FrameShape
    terms: tuple  # ((weight key, ((I, coeff), ...)), ...) sorted

    @classmethod
    def build(cls, p: int, shape: FrameShape, data: dict[WeightKey, Ext]) -> "RawForm":
        items = []
        for k, vec in data.items():
            vec = {I: Fraction(c) for I, c in vec.items() if c}
            if vec:
                items.append((tuple(Fraction(x) for x in k), tuple(sorted(vec.items()))))
        items.sort()
        return cls(p, shape, tuple(items))

    @classmethod
    def zero(cls, p: int, shape: FrameShape) -> "RawForm":
        return cls(p, shape, ())

    @classmethod
    def monomial(cls, p: int, shape: FrameShape, k: Sequence, vec: Ext | None = None, coeff=1) -> "RawForm":
        vec = {(): Fraction(1)} if vec is None else vec
        return cls.build(p, shape, {tuple(Fraction(x) for x in k): {I: c * coeff for I, c in vec.items()}})

    def as_dict(self) -> dict[WeightKey, Ext]:
        return {k: dict(v) for k, v in self.terms}

    def __add__(self, other: "RawForm") -> "RawForm":
        data = self.as_dict()
        for k, vec in other.terms:
            data[k] = ext_add(data.get(k, {}), dict(vec))
        return RawForm.build(self.p, self.shape, data)

    def scale(self, c: Fraction | int) -> "RawForm":
        return RawForm.build(self.p, self.shape, {k: {I: c * x for I, x in v} for k, v in self.terms})

    def __neg__(self) -> "RawForm":
        return self.scale(-1)

    def __sub__(self, other: "RawForm") -> "RawForm":
        return self + (-other)

    def wedge(self, other: "RawForm") -> "RawForm":
        r = self.shape.r
        data: dict[WeightKey, Ext] = {}
        for k1, v1 in self.terms:
            for k2, v2 in other.terms:
                k = tuple(a + b for a, b in zip(k1, k2))
                if min(k[: r + 1]) > 0:
                    continue  # divisible by t_0 ... t_r = 0
                data[k] = ext_add(data.get(k, {}), ext_wedge(dict(v1), dict(v2)))
        return RawForm.build(self.p, self.shape, data)

    def d(self) -> "RawForm":
        return RawForm.build(
            self.p, self.shape, {k: ext_wedge(kappa(k, self.shape), dict(v)) for k, v in self.terms}
        )

    def frobenius(self) -> "RawForm":
        return RawForm.build(self.p, self.shape, {tuple(x * self.p for x in k): dict(v) for k, v in self.terms})

    def verschiebung(self) -> "RawForm":
        return RawForm.build(
            self.p,
            self.shape,
            {tuple(x / self.p for x in k): {I: c * self.p for I, c in v} for k, v in self.terms},
        )

    def degrees(self) -> set[int]:
        return {len(I) for _, v in self.terms for I, _ in v}

    def is_zero(self) -> bool:
        return not self.terms


# -- expressions built from Witt-style factors ------------------------------------


@dataclass(frozen=True)
class Teich:
    """[t]^e for an integral exponent vector e."""

    exponent: tuple[int, ...]


@dataclass(frozen=True)
class VTeich:
    """V^depth(eta [t]^e)."""

    depth: int
    eta: int
    exponent: tuple[int, ...]


@dataclass(frozen=True)
class DVTeich:
    """d V^depth(eta [t]^e)."""

    depth: int
    eta: int
    exponent: tuple[int, ...]


@dataclass(frozen=True)
class FD:
    """F^power d[t]^e, power >= 0."""

    power: int
    exponent: tuple[int, ...]


@dataclass(frozen=True)
class Dlog:
    """dlog of the product of [t_i] over the given indices."""

    indices: tuple[int, ...]


Factor = Union[Teich, VTeich, DVTeich, FD, Dlog]
Expression = Sequence[tuple[int, Sequence[Factor]]]


def _check_exponent(e: Sequence[int], shape: FrameShape) -> None:
    if len(e) != shape.nvars:
        raise MalformedExpression(f"exponent {tuple(e)} has the wrong length for d={shape.d}")
    if min(e[: shape.r + 1]) < 0:
        raise MalformedExpression(f"negative exponent on a non-inverted coordinate: {tuple(e)}")


def _teich_raw(p: int, shape: FrameShape, e: Sequence[int], coeff: int = 1) -> RawForm:
    _check_exponent(e, shape)
    if min(e[: shape.r + 1]) > 0:
        return RawForm.zero(p, shape)
    return RawForm.monomial(p, shape, e, coeff=coeff)


def factor_to_raw(f: Factor, p: int, shape: FrameShape) -> RawForm:
    if isinstance(f, Teich):
        return _teich_raw(p, shape, f.exponent)
    if isinstance(f, (VTeich, DVTeich)):
        form = _teich_raw(p, shape, f.exponent, f.eta)
        for _ in range(f.depth):
            form = form.verschiebung()
        return form.d() if isinstance(f, DVTeich) else form
    if isinstance(f, FD):
        form = _teich_raw(p, shape, f.exponent).d()
        for _ in range(f.power):
            form = form.frobenius()
        return form
    if isinstance(f, Dlog):
        vec: Ext = {}
        for i in f.indices:
            if not 0 <= i <= shape.d:
                raise MalformedExpression(f"dlog index {i} out of range")
            vec = ext_add(vec, dlog_vector(i, shape))
        return RawForm.monomial(p, shape, (0,) * shape.nvars, vec)
    raise MalformedExpression(f"unknown factor {f!r}")


def expression_to_raw(expr: Expression, p: int, shape: FrameShape) -> RawForm:
    total = RawForm.zero(p, shape)
    for coeff, factors in expr:
        prod = RawForm.monomial(p, shape, (0,) * shape.nvars, coeff=coeff)
        for f in factors:
            prod = prod.wedge(factor_to_raw(f, p, shape))
        total = total + prod
    return total


def raw_sum(forms: Iterable[RawForm], p: int, shape: FrameShape) -> RawForm:
    total = RawForm.zero(p, shape)
    for f in forms:
        total = total + f
    return total
