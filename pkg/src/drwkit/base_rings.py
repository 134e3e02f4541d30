"""Coefficient rings: Z/p^m and the cyclotomic truncations Lambda_n = Z[q]/([p^n]_q).

Elements of Lambda_n are dense integer vectors in the basis 1, q, ..., q^{D-1}
with D = p^n - 1. Coefficients are never reduced modulo p, so q - 1 stays a
non-zero-divisor and integer lattice methods apply.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import LevelMismatch, LevelTooSmall


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class PrimePowerRing:
    p: int
    m: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.m < 1:
            raise ValueError("exponent must be at least 1")

    @property
    def modulus(self) -> int:
        return self.p**self.m

    def reduce(self, a: int) -> int:
        return a % self.modulus

    def elements(self) -> range:
        return range(self.modulus)


# -- polynomials in Z[q] as coefficient tuples -------------------------------------


def poly_trim(c: Sequence[int]) -> tuple[int, ...]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_mul(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_trim(out)


def poly_frobenius(a: Sequence[int], p: int) -> tuple[int, ...]:
    """Substitute q -> q^p in an integer polynomial."""
    if not a:
        return ()
    out = [0] * ((len(a) - 1) * p + 1)
    for i, x in enumerate(a):
        out[i * p] = x
    return poly_trim(out)


def cyclotomic_prime_power(p: int, j: int) -> tuple[int, ...]:
    """Phi_{p^j}(q) = 1 + q^{p^{j-1}} + ... + q^{(p-1) p^{j-1}} for j >= 1."""
    step = p ** (j - 1)
    out = [0] * ((p - 1) * step + 1)
    for i in range(p):
        out[i * step] = 1
    return tuple(out)


def q_integer_poly(a: int) -> tuple[int, ...]:
    """[a]_q in Z[q] for a >= 0."""
    if a < 0:
        raise ValueError("use q_integer for negative arguments")
    return (1,) * a


# -- Lambda_n --------------------------------------------------------------------


@dataclass(frozen=True)
class CycloTruncElem:
    """Element of Lambda_n = Z[q]/([p^n]_q) in the basis 1, q, ..., q^{p^n - 2}."""

    p: int
    n: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise LevelTooSmall("Lambda_n needs n >= 1")
        if len(self.coeffs) != self.p**self.n - 1:
            raise ValueError(f"expected {self.p ** self.n - 1} coefficients, got {len(self.coeffs)}")

    @property
    def rank(self) -> int:
        return self.p**self.n - 1

    @classmethod
    def from_exponents(cls, p: int, n: int, terms: dict[int, int]) -> "CycloTruncElem":
        """Reduce ``sum c * q^e`` (any integer exponents) into Lambda_n."""
        period = p**n
        folded = [0] * period
        for e, c in terms.items():
            folded[e % period] += c
        top = folded[period - 1]
        return cls(p, n, tuple(x - top for x in folded[: period - 1]))

    @classmethod
    def from_poly(cls, p: int, n: int, coeffs: Sequence[int]) -> "CycloTruncElem":
        return cls.from_exponents(p, n, {i: c for i, c in enumerate(coeffs) if c})

    @classmethod
    def constant(cls, p: int, n: int, c: int) -> "CycloTruncElem":
        return cls.from_exponents(p, n, {0: c})

    @classmethod
    def q_power(cls, p: int, n: int, e: int = 1) -> "CycloTruncElem":
        return cls.from_exponents(p, n, {e: 1})

    def _check(self, other: "CycloTruncElem") -> None:
        if (self.p, self.n) != (other.p, other.n):
            raise LevelMismatch(f"Lambda_{self.n} (p={self.p}) vs Lambda_{other.n} (p={other.p})")

    def __add__(self, other: "CycloTruncElem") -> "CycloTruncElem":
        self._check(other)
        return CycloTruncElem(self.p, self.n, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "CycloTruncElem":
        return CycloTruncElem(self.p, self.n, tuple(-a for a in self.coeffs))

    def __sub__(self, other: "CycloTruncElem") -> "CycloTruncElem":
        return self + (-other)

    def __mul__(self, other: "CycloTruncElem | int") -> "CycloTruncElem":
        if isinstance(other, int):
            return CycloTruncElem(self.p, self.n, tuple(a * other for a in self.coeffs))
        self._check(other)
        prod = poly_mul(self.coeffs, other.coeffs)
        return CycloTruncElem.from_exponents(self.p, self.n, {i: c for i, c in enumerate(prod) if c})

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def mult_matrix(self) -> list[list[int]]:
        """Integer matrix of multiplication by this element (acting on columns)."""
        cols = [
            (self * CycloTruncElem.q_power(self.p, self.n, j)).coeffs for j in range(self.rank)
        ]
        return [[cols[j][i] for j in range(self.rank)] for i in range(self.rank)]

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "1" if i == 0 else ("q" if i == 1 else f"q^{i}")
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms) if terms else "0"


def q_integer(a: int, n: int, p: int) -> CycloTruncElem:
    """[a]_q in Lambda_n; for a < 0 this is -q^a [-a]_q."""
    if a >= 0:
        return CycloTruncElem.from_exponents(p, n, {e: 1 for e in range(a)})
    return CycloTruncElem.from_exponents(p, n, {a + e: -1 for e in range(-a)})


def xi_tilde(n: int, level: int, p: int) -> CycloTruncElem:
    """[p^n]_q computed inside Lambda_level; requires level > n."""
    if level <= n:
        raise LevelTooSmall(f"[p^{n}]_q vanishes in Lambda_{level}; need level > {n}")
    return q_integer(p**n, level, p)


def specialize_q_to_1(x: CycloTruncElem) -> int:
    """The ring map Lambda_n -> Z/p^n sending q to 1."""
    return sum(x.coeffs) % x.p**x.n


def frobenius_phi(x: CycloTruncElem) -> CycloTruncElem:
    """The transition map Lambda_n -> Lambda_{n-1}.

    Since [p^{n-1}]_q divides [p^n]_q this is the reduction q -> q. It is the
    image of the Witt vector Frobenius W_n -> W_{n-1} under the tilde
    specialization; the literal substitution q -> q^p does not descend to these
    quotients (it sends [4]_q to 4 when p = 2).
    """
    if x.n < 2:
        raise LevelTooSmall("Frobenius needs level n >= 2")
    return CycloTruncElem.from_poly(x.p, x.n - 1, x.coeffs)
