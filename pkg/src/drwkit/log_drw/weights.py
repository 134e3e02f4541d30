"""Weights k: [0, d] -> Z[1/p] and their interval partitions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from ..semistable import FrameShape

INF = float("inf")


def ord_p(x: Fraction, p: int) -> float:
    """p-adic order; +inf for zero."""
    if x == 0:
        return INF
    num, den = x.numerator, x.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


@dataclass(frozen=True)
class Weight:
    """A weight; ``None`` entries stand for the pole value p^{-inf} (plus-variant only)."""

    p: int
    values: tuple

    @classmethod
    def of(cls, p: int, values: Sequence) -> "Weight":
        return cls(p, tuple(None if v is None else Fraction(v) for v in values))

    @classmethod
    def from_integral(cls, p: int, m: Sequence[int], n: int) -> "Weight":
        """The weight m / p^n."""
        return cls(p, tuple(Fraction(x, p**n) for x in m))

    @property
    def d(self) -> int:
        return len(self.values) - 1

    def entry(self, i: int) -> tuple[int, int] | None:
        """Entry i as (num, pexp) meaning num / p^pexp, or None for a pole."""
        v = self.values[i]
        if v is None:
            return None
        pexp = max(0, -int(ord_p(v, self.p))) if v else 0
        return int(v * self.p**pexp), pexp

    def ord(self, i: int) -> float:
        v = self.values[i]
        return -INF if v is None else ord_p(v, self.p)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.values) if v is None or v != 0)

    @property
    def poles(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.values) if v is None)

    @property
    def finite_part(self) -> tuple[Fraction, ...]:
        """k^+: the weight with poles replaced by 0."""
        return tuple(Fraction(0) if v is None else v for v in self.values)

    @property
    def depth(self) -> int:
        """mu(k) = max(0, -min ord_p) over the finite support."""
        ords = [self.ord(i) for i in range(len(self.values)) if self.values[i]]
        ords = [o for o in ords if o != -INF]
        return max(0, -int(min(ords))) if ords else 0

    def is_integral(self) -> bool:
        return all(v is not None and v.denominator == 1 for v in self.values)

    def scaled(self, factor: Fraction | int) -> "Weight":
        return Weight(self.p, tuple(None if v is None else v * factor for v in self.values))

    def integral_vector(self, n: int) -> tuple[int, ...]:
        """p^n k as integers; raises if not integral."""
        out = []
        for v in self.values:
            w = v * self.p**n
            if w.denominator != 1:
                raise ValueError(f"p^{n} * {v} is not integral")
            out.append(int(w))
        return tuple(out)

    def sort_key(self) -> tuple:
        return tuple((0, 0) if v is None else (1, v) for v in self.values)

    def __str__(self) -> str:
        return "(" + ", ".join("p^-inf" if v is None else str(v) for v in self.values) + ")"


def is_valid_laurent(k: Weight, shape: FrameShape) -> bool:
    if len(k.values) != shape.nvars or any(v is None for v in k.values):
        return False
    head = k.values[: shape.r + 1]
    return min(head) >= 0 and min(head) == 0


def is_valid_plus(k: Weight, shape: FrameShape) -> bool:
    if len(k.values) != shape.nvars:
        return False
    if any(v is None for v in k.values[shape.r + 1 :]):
        return False
    if any(v is not None and v < 0 for v in k.values):
        return False
    return any(v == 0 for v in k.values[: shape.r + 1])


def order_key(k: Weight, i: int) -> tuple[float, int]:
    return (k.ord(i), i)


def dropped_index(k: Weight, shape: FrameShape) -> int:
    """The zero-weight coordinate of [0, r] whose dlog is eliminated by the relation
    dlog t_0 + ... + dlog t_r = 0 (the largest such index)."""
    zeros = [i for i in range(shape.r + 1) if k.values[i] == 0]
    if not zeros:
        raise ValueError(f"weight {k} has no zero entry on [0, {shape.r}]")
    return zeros[-1]


def chain(k: Weight, shape: FrameShape, variant: str = "laurent") -> tuple[int, ...]:
    """Indices ordered by the weight order: ord_p ascending, ties by index."""
    if variant == "laurent":
        skip = dropped_index(k, shape)
        idx = [i for i in range(shape.nvars) if i != skip]
    elif variant == "plus":
        idx = [i for i in range(shape.nvars) if k.values[i] is not None and k.values[i] != 0]
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return tuple(sorted(idx, key=lambda i: order_key(k, i)))


@dataclass(frozen=True, order=True)
class Partition:
    """Ordered intervals (I_0, I_1, ..., I_l) of a weight chain plus the pole block."""

    intervals: tuple[tuple[int, ...], ...]
    poles: tuple[int, ...] = ()

    @property
    def head(self) -> tuple[int, ...]:
        return self.intervals[0]

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        return self.intervals[1:]

    @property
    def degree(self) -> int:
        return len(self.poles) + len(self.intervals) - 1

    def to_json(self) -> list:
        return [list(self.poles)] + [list(i) for i in self.intervals]

    def __str__(self) -> str:
        body = "|".join("".join(map(str, i)) or "-" for i in self.intervals)
        return f"[{''.join(map(str, self.poles))}]{body}" if self.poles else body


def _cuts(seq: tuple[int, ...], degree: int | None) -> Iterator[tuple[tuple[int, ...], ...]]:
    n = len(seq)
    for a in range(n + 1):
        rest = n - a
        degrees = range(rest + 1) if degree is None else [degree]
        for l in degrees:
            if l > rest or (l == 0 and rest > 0):
                continue
            # choose l-1 interior cut points among rest-1 gaps
            for inner in itertools.combinations(range(1, rest), l - 1) if l else [()]:
                bounds = (0,) + inner + (rest,)
                tail = seq[a:]
                blocks = tuple(tail[bounds[j] : bounds[j + 1]] for j in range(l))
                yield (seq[:a],) + blocks


def enumerate_partitions(k: Weight, shape: FrameShape, variant: str = "laurent", degree: int | None = None) -> list[Partition]:
    """All partitions of the weight chain, optionally restricted to one degree."""
    seq = chain(k, shape, variant)
    poles = tuple(i for i in range(shape.nvars) if k.values[i] is None) if variant == "plus" else ()
    want = None if degree is None else degree - len(poles)
    if want is not None and want < 0:
        return []
    out = [Partition(iv, poles) for iv in _cuts(seq, want)]
    return sorted(out, key=lambda P: (P.degree, tuple(len(i) for i in P.intervals), P.intervals))


def interval_order(k: Weight, interval: Sequence[int]) -> float:
    """ord_p of k on an interval: that of its first (smallest-order) element."""
    return min(k.ord(i) for i in interval) if interval else INF


@dataclass(frozen=True)
class WeightStats:
    support: tuple[int, ...]
    finite_part: tuple[Fraction, ...]
    order: tuple[int, ...]
    ords: tuple[float, ...]
    mu: int


@dataclass(frozen=True)
class PartitionStats:
    taus: tuple[float, ...]
    mus: tuple[int, ...]
    rho1: int
    rho2: int


def weight_stats(k: Weight, shape: FrameShape, variant: str = "laurent") -> WeightStats:
    order = tuple(sorted(range(shape.nvars), key=lambda i: order_key(k, i)))
    if variant == "plus":
        order = tuple(i for i in order if k.values[i] is None or k.values[i] != 0)
    return WeightStats(
        support=k.support,
        finite_part=k.finite_part,
        order=order,
        ords=tuple(k.ord(i) for i in range(shape.nvars)),
        mu=k.depth,
    )


def partition_stats(k: Weight, P: Partition) -> PartitionStats:
    """tau and mu per interval (index 0 is I_0), and rho_1, rho_2 among I_1..I_l."""
    ords = [interval_order(k, iv) for iv in P.intervals]
    taus = tuple(-o for o in ords)
    mus = tuple(max(0, int(t)) if abs(t) != INF else 0 for t in taus)
    rho1 = max((j for j in range(1, len(ords)) if ords[j] < 0), default=0)
    rho2 = max((j for j in range(1, len(ords)) if ords[j] != INF), default=0)
    return PartitionStats(taus, mus, rho1, rho2)


def weights_in_box(shape: FrameShape, p: int, n: int, bound: int) -> list[Weight]:
    """Laurent weights k = m / p^n with |m_j| <= bound and depth < n."""
    out = []
    head = range(bound + 1)
    tail = range(-bound, bound + 1)
    for m in itertools.product(*([head] * (shape.r + 1) + [tail] * (shape.d - shape.r))):
        if min(m[: shape.r + 1]) != 0:
            continue
        k = Weight.from_integral(p, m, n)
        if k.depth < n:
            out.append(k)
    return out
