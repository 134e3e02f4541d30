"""Bounded complexes of finite free modules: Koszul complexes, décalage, Bocksteins.

Every complex is stored through a Z-model: a complex of free Z-modules (or
free Z/p^m-modules when ``modulus`` is set). Complexes over the truncated
cyclotomic ring carry, in each degree, the integer matrix by which q acts,
so any ring element can be turned into an endomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb, gcd
from typing import Sequence

from .base_rings import CycloTruncElem, PrimePowerRing
from .errors import CompositionNonzero, DimensionMismatch, LiftMismatch, ZeroDivisor
from .exact_linalg import (
    FiniteModule,
    Lattice,
    Subquotient,
    bareiss_det,
    identity_rows,
    matmul,
    matvec,
    rational_inverse,
    subquotient_cohomology,
)
from .reports import VerificationReport

Matrix = tuple[tuple[int, ...], ...]


def _freeze(rows: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in r) for r in rows)


def _zero(rows: int, cols: int) -> list[list[int]]:
    return [[0] * cols for _ in range(rows)]


@dataclass(frozen=True)
class FreeComplex:
    """``C^0 -> C^1 -> ... -> C^top`` with ``diffs[i]`` of shape ranks[i+1] x ranks[i].

    ``modulus`` 0 means the terms are free Z-modules. ``q_action`` (optional)
    lists the matrix of multiplication by q on each term for complexes over
    the truncated cyclotomic ring; ``block`` is that ring's Z-rank.
    """

    ranks: tuple[int, ...]
    diffs: tuple[Matrix, ...]
    modulus: int = 0
    base: str = "Z"
    q_action: tuple[Matrix, ...] | None = None
    block: int = 1

    def __post_init__(self) -> None:
        if len(self.diffs) != max(0, len(self.ranks) - 1):
            raise DimensionMismatch("need one differential between consecutive terms")
        for i, d in enumerate(self.diffs):
            if len(d) != self.ranks[i + 1] or any(len(r) != self.ranks[i] for r in d):
                raise DimensionMismatch(f"differential {i} does not match ranks {self.ranks}")
        for i in range(len(self.diffs) - 1):
            comp = matmul(self.diffs[i + 1], self.diffs[i], self.ranks[i])
            if any(self._reduce(x) for r in comp for x in r):
                raise CompositionNonzero(f"d{i + 1} o d{i} != 0 in {self.base}")

    def _reduce(self, x: int) -> int:
        return x % self.modulus if self.modulus else x

    @property
    def length(self) -> int:
        return len(self.ranks)

    def terms(self) -> list[Subquotient]:
        return [Subquotient.free(n, self.modulus) for n in self.ranks]

    def cohomology(self) -> list[FiniteModule]:
        return subquotient_cohomology(self.terms(), self.diffs)

    def reduce(self, modulus: int) -> "FreeComplex":
        """Same integer matrices read over Z/modulus."""
        if self.modulus and self.modulus % modulus:
            raise DimensionMismatch(f"cannot reduce modulo {modulus} from modulo {self.modulus}")
        return FreeComplex(
            self.ranks,
            tuple(_freeze([[x % modulus for x in r] for r in d]) for d in self.diffs),
            modulus,
            f"{self.base}/{modulus}",
            self.q_action,
            self.block,
        )

    def action(self, f: int | CycloTruncElem, degree: int) -> list[list[int]]:
        """Integer matrix of multiplication by ``f`` on the degree-``degree`` term."""
        n = self.ranks[degree]
        if isinstance(f, int):
            return [[f if i == j else 0 for j in range(n)] for i in range(n)]
        if self.q_action is None:
            raise DimensionMismatch("complex has no cyclotomic structure")
        q = self.q_action[degree]
        out = _zero(n, n)
        power = identity_rows(n)
        for c in f.coeffs:
            if c:
                out = [[x + c * y for x, y in zip(ro, rp)] for ro, rp in zip(out, power)]
            power = matmul(q, power, n)
        return out

    def to_json(self) -> dict:
        return {
            "base": self.base,
            "modulus": self.modulus,
            "ranks": list(self.ranks),
            "diffs": [[list(r) for r in d] for d in self.diffs],
        }


# -- Koszul complexes ------------------------------------------------------------


def _ring_modulus(ring) -> int:
    if ring is None or ring == "Z" or ring == 0:
        return 0
    if isinstance(ring, PrimePowerRing):
        return ring.modulus
    if isinstance(ring, int) and ring >= 2:
        return ring
    raise DimensionMismatch(f"unsupported base ring {ring!r}")


def koszul_sign(subset: Sequence[int], j: int) -> int:
    """Sign of ``f_j`` in the differential from ``subset`` to ``subset + {j}``."""
    position = sum(1 for i in subset if i < j)  # m - 1 for the slot of j
    return -1 if position % 2 else 1


def _koszul_pattern(count: int) -> list[tuple[list[tuple[int, ...]], list[tuple[int, ...]]]]:
    return [
        (list(combinations(range(count), i)), list(combinations(range(count), i + 1)))
        for i in range(count)
    ]


def koszul(ring, f: Sequence) -> FreeComplex:
    """Koszul complex of the commuting elements ``f``.

    ``ring`` is Z (``0``, ``"Z"`` or None), a modulus ``p^m`` or a
    PrimePowerRing; when the elements are truncated cyclotomic elements the
    complex is built over that ring as a free Z-module of rank
    ``C(d, i) * (p^n - 1)`` in degree ``i``.
    """
    f = list(f)
    count = len(f)
    cyclotomic = bool(f) and all(isinstance(x, CycloTruncElem) for x in f)
    if cyclotomic:
        p, n = f[0].p, f[0].n
        if any((x.p, x.n) != (p, n) for x in f):
            raise DimensionMismatch("Koszul entries live in different rings")
        blk = f[0].rank
        blocks = [x.mult_matrix() for x in f]
        q_block = CycloTruncElem.q_power(p, n, 1).mult_matrix()
        base = f"Lambda_{n}(p={p})"
    else:
        blk = 1
        blocks = [[[int(x)]] for x in f]
        base = "Z"
    modulus = 0 if cyclotomic else _ring_modulus(ring)
    if modulus:
        base = f"Z/{modulus}"
    ranks = tuple(comb(count, i) * blk for i in range(count + 1))
    diffs = []
    for src, dst in _koszul_pattern(count):
        index = {J: t for t, J in enumerate(dst)}
        mat = _zero(len(dst) * blk, len(src) * blk)
        for s, I in enumerate(src):
            for j in range(count):
                if j in I:
                    continue
                J = tuple(sorted(I + (j,)))
                sign = koszul_sign(I, j)
                t = index[J]
                for a in range(blk):
                    for b in range(blk):
                        mat[t * blk + a][s * blk + b] += sign * blocks[j][a][b]
        if modulus:
            mat = [[x % modulus for x in r] for r in mat]
        diffs.append(_freeze(mat))
    q_action = None
    if cyclotomic:
        q_action = tuple(_freeze(_block_diag(q_block, r // blk)) for r in ranks)
    return FreeComplex(ranks, tuple(diffs), modulus, base, q_action, blk)


def _block_diag(block: list[list[int]], copies: int) -> list[list[int]]:
    b = len(block)
    out = _zero(b * copies, b * copies)
    for c in range(copies):
        for i in range(b):
            out[c * b + i][c * b : (c + 1) * b] = block[i]
    return out


# -- décalage ----------------------------------------------------------------------


def _power(f, i: int):
    if isinstance(f, int):
        return f**i
    out = CycloTruncElem.constant(f.p, f.n, 1)
    for _ in range(i):
        out = out * f
    return out


def _restrict(a: Sequence[Sequence[int]], src: Lattice, dst: Lattice) -> list[list[int]]:
    """Matrix of ``a`` from the Hermite basis of ``src`` to that of ``dst``."""
    cols = []
    for v in src.basis:
        c = dst.coords(matvec(a, v))
        if c is None:
            raise DimensionMismatch("map does not send the source lattice into the target")
        cols.append(c)
    return [[c[i] for c in cols] for i in range(dst.rank)]


def _check_regular(K: FreeComplex, f) -> None:
    for i, n in enumerate(K.ranks):
        if n and bareiss_det(K.action(f, i)) == 0:
            raise ZeroDivisor(f"{f} is a zero-divisor on degree {i}")


def decalage(K: FreeComplex, f: int | CycloTruncElem) -> FreeComplex:
    """``(eta_f K)^i = {x in f^i K^i : dx in f^{i+1} K^{i+1}}`` with the induced differential."""
    if K.modulus:
        if isinstance(f, int) and gcd(f, K.modulus) == 1:
            return K
        raise ZeroDivisor(f"{f} is not regular on a complex over Z/{K.modulus}")
    _check_regular(K, f)
    eta = eta_lattices(K, f)
    diffs = tuple(_freeze(_restrict(K.diffs[i], eta[i], eta[i + 1])) for i in range(len(K.diffs)))
    q_action = None
    if K.q_action is not None:
        q_action = tuple(_freeze(_restrict(q, lat, lat)) for q, lat in zip(K.q_action, eta))
    return FreeComplex(
        tuple(lat.rank for lat in eta), diffs, 0, f"eta({K.base})", q_action, K.block
    )


# -- Bocksteins --------------------------------------------------------------------


@dataclass(frozen=True)
class BocksteinData:
    """A complex over Z/p^m with its lift to Z/p^{2m}."""

    complex: FreeComplex
    lift: FreeComplex

    def __post_init__(self) -> None:
        m = self.complex.modulus
        if not m or self.lift.modulus != m * m:
            raise LiftMismatch(f"lift must live modulo {m}^2, got {self.lift.modulus}")
        if self.lift.ranks != self.complex.ranks:
            raise LiftMismatch("lift has different ranks")
        for i, (a, b) in enumerate(zip(self.complex.diffs, self.lift.diffs)):
            if any((x - y) % m for ra, rb in zip(a, b) for x, y in zip(ra, rb)):
                raise LiftMismatch(f"lift of differential {i} does not reduce to it")

    @classmethod
    def canonical(cls, integral: FreeComplex, modulus: int) -> "BocksteinData":
        return cls(integral.reduce(modulus), integral.reduce(modulus * modulus))


@dataclass(frozen=True)
class SubquotientComplex:
    """Complex whose terms are subquotients of Z^n (e.g. cohomology groups)."""

    terms: tuple[Subquotient, ...]
    maps: tuple[Matrix, ...]

    def modules(self) -> list[FiniteModule]:
        return [t.module() for t in self.terms]

    def cohomology(self) -> list[FiniteModule]:
        return subquotient_cohomology(self.terms, self.maps)

    def squares_to_zero(self) -> bool:
        for i in range(len(self.maps) - 1):
            for v in self.terms[i].top.basis:
                w = matvec(self.maps[i + 1], matvec(self.maps[i], v))
                if not self.terms[i + 2].bottom.contains(w):
                    return False
        return True


def _bockstein(
    ranks: Sequence[int], diffs: Sequence[Matrix], actions: Sequence[Sequence[Sequence[int]]]
) -> tuple[SubquotientComplex, list[Lattice], list[list[list]]]:
    """Bockstein complex of ``K / f`` for an injective endomorphism f given per degree.

    ``diffs`` only need to compose to zero modulo ``f^2``. Term i is H^i(K/f)
    written on the lattice of cycles Z^i = {x : dx in fK}; a cycle x maps to
    f^{-1} dx. Also returns the cycle lattices and the inverse actions.
    """
    fimg = [Lattice.full(n).image(a, n) for n, a in zip(ranks, actions)]
    cycles = []
    for i, n in enumerate(ranks):
        full = Lattice.full(n)
        cycles.append(full.preimage(diffs[i], fimg[i + 1]) if i < len(diffs) else full)
    terms = []
    for i, (n, z) in enumerate(zip(ranks, cycles)):
        b = fimg[i]
        if i > 0:
            b = b + Lattice.full(ranks[i - 1]).image(diffs[i - 1], n)
        terms.append(Subquotient(Lattice.full(z.rank), Lattice.span([z.coords(v) for v in b.basis], z.rank)))
    inverses = [rational_inverse(a) if n else [] for n, a in zip(ranks, actions)]
    maps = []
    for i in range(len(diffs)):
        cols = []
        for v in cycles[i].basis:
            y = _apply_rational(inverses[i + 1], matvec(diffs[i], v))
            c = cycles[i + 1].coords(y)
            if c is None:
                raise LiftMismatch("lift is not a complex modulo the square of the modulus")
            cols.append(c)
        maps.append(_freeze([[c[r] for c in cols] for r in range(cycles[i + 1].rank)]))
    return SubquotientComplex(tuple(terms), tuple(maps)), cycles, inverses


def _apply_rational(inv: Sequence[Sequence], v: Sequence[int]) -> list[int]:
    y = [sum(c * x for c, x in zip(row, v)) for row in inv]
    if any(x.denominator != 1 for x in y):
        raise LiftMismatch("Bockstein value is not integral")
    return [int(x) for x in y]


def bockstein_model(B: BocksteinData) -> tuple[SubquotientComplex, list[Lattice]]:
    """Bockstein complex together with the cycle lattices its terms are written on."""
    m = B.complex.modulus
    ranks = B.lift.ranks
    actions = [[[m if i == j else 0 for j in range(n)] for i in range(n)] for n in ranks]
    complex_, cycles, _ = _bockstein(ranks, B.lift.diffs, actions)
    return complex_, cycles


def bockstein_complex(B: BocksteinData) -> SubquotientComplex:
    """``(H^*(K), beta)`` with ``beta(x) = d(lift x) / p^m`` reduced mod p^m."""
    return bockstein_model(B)[0]


def mapping_cone(
    a: SubquotientComplex, b: SubquotientComplex, phi: Sequence[Matrix]
) -> SubquotientComplex:
    """Cone of a chain map ``phi: a -> b``; acyclic exactly when phi is a quasi-isomorphism."""
    length = max(len(a.terms), len(b.terms))

    def term(c: SubquotientComplex, i: int) -> Subquotient:
        if 0 <= i < len(c.terms):
            return c.terms[i]
        return Subquotient.free(0)

    def dsum(s: Subquotient, t: Subquotient) -> Subquotient:
        dim = s.dim + t.dim
        top = [list(v) + [0] * t.dim for v in s.top.basis] + [[0] * s.dim + list(v) for v in t.top.basis]
        bot = [list(v) + [0] * t.dim for v in s.bottom.basis] + [[0] * s.dim + list(v) for v in t.bottom.basis]
        return Subquotient(Lattice.span(top, dim), Lattice.span(bot, dim))

    def mat(c: SubquotientComplex, i: int, rows: int, cols: int) -> list[list[int]]:
        if 0 <= i < len(c.maps):
            return [list(r) for r in c.maps[i]]
        return _zero(rows, cols)

    terms = [dsum(term(a, i + 1), term(b, i)) for i in range(-1, length)]
    maps = []
    for i in range(-1, length - 1):
        a1, b0 = term(a, i + 1).dim, term(b, i).dim
        a2, b1 = term(a, i + 2).dim, term(b, i + 1).dim
        da = mat(a, i + 1, a2, a1)
        db = mat(b, i, b1, b0)
        ph = [list(r) for r in phi[i + 1]] if 0 <= i + 1 < len(phi) else _zero(b1, a1)
        out = _zero(a2 + b1, a1 + b0)
        for r in range(a2):
            for c in range(a1):
                out[r][c] = -da[r][c]
        for r in range(b1):
            for c in range(a1):
                out[a2 + r][c] = ph[r][c]
            for c in range(b0):
                out[a2 + r][a1 + c] = db[r][c]
        maps.append(_freeze(out))
    return SubquotientComplex(tuple(terms), tuple(maps))


def eta_mod_f_comparison(K: FreeComplex, f: int | CycloTruncElem) -> VerificationReport:
    """Compare ``eta_f K / f`` with the Bockstein complex of ``H^*(K / f)``.

    Besides matching cohomology degree by degree, the explicit map
    ``f^i y -> [y]`` is checked to be a chain map with acyclic cone.
    """
    report = VerificationReport("eta-mod-f", {"base": K.base, "ranks": list(K.ranks), "f": str(f)})
    eta = decalage(K, f)
    eta_mod = SubquotientComplex(
        tuple(
            Subquotient(Lattice.full(n), Lattice.full(n).image(eta.action(f, i), n))
            for i, n in enumerate(eta.ranks)
        ),
        eta.diffs,
    )
    actions = [K.action(f, i) for i in range(K.length)]
    bock, cycles, inverses = _bockstein(K.ranks, K.diffs, actions)
    report.compare("beta squares to zero", bock.squares_to_zero(), True)
    report.compare(
        "cohomology degree by degree",
        [str(m) for m in eta_mod.cohomology()],
        [str(m) for m in bock.cohomology()],
    )
    # the comparison map, in eta-basis -> cycle-basis coordinates
    lattices = eta_lattices(K, f)
    phi = []
    for i, lat in enumerate(lattices):
        inv_power = identity_rows(K.ranks[i]) if i == 0 else _rational_power(inverses[i], i)
        cols = []
        for v in lat.basis:
            y = _apply_rational(inv_power, v)
            cols.append(cycles[i].coords(y))
        if any(c is None for c in cols):
            report.add(f"comparison map defined in degree {i}", False)
            return report
        phi.append(_freeze([[c[r] for c in cols] for r in range(cycles[i].rank)]))
    chain = all(
        all(
            bock.terms[i + 1].bottom.contains(
                [x - y for x, y in zip(matvec(phi[i + 1], matvec(eta.diffs[i], v)), matvec(bock.maps[i], matvec(phi[i], v)))]
            )
            for v in identity_rows(eta.ranks[i])
        )
        for i in range(len(eta.diffs))
    )
    report.compare("comparison map is a chain map", chain, True)
    cone = mapping_cone(eta_mod, bock, phi)
    report.compare(
        "comparison map is a quasi-isomorphism",
        all(h.is_zero() for h in cone.cohomology()),
        True,
    )
    return report


def _rational_power(inv: list[list], i: int) -> list[list]:
    n = len(inv)
    out = [[int(r == c) for c in range(n)] for r in range(n)]
    for _ in range(i):
        out = [[sum(out[r][k] * inv[k][c] for k in range(n)) for c in range(n)] for r in range(n)]
    return out


def eta_lattices(K: FreeComplex, f) -> list[Lattice]:
    """The lattices (eta_f K)^i inside the terms of K."""
    scaled = [Lattice.full(n).image(K.action(_power(f, i), i), n) for i, n in enumerate(K.ranks)]
    return [
        lat.preimage(K.diffs[i], scaled[i + 1]) if i < len(K.diffs) else lat
        for i, lat in enumerate(scaled)
    ]
