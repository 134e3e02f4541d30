"""Exact linear algebra over the integers and over Z/p^m.

Everything here works with Python integers. Matrices act on column vectors,
so a differential ``C^i -> C^{i+1}`` is stored with ``rank C^{i+1}`` rows.

Lattices (subgroups of Z^n) are kept in row Hermite normal form, which makes
equality, sums and membership cheap. Finite modules are compared through
their elementary divisors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import CompositionNonzero, DimensionMismatch

Rows = list[list[int]]


class IntMatrix:
    """Immutable integer matrix."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise DimensionMismatch("ragged matrix rows")
        self.rows = data
        self.nrows = len(data)
        self.ncols = ncols

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(([int(i == j) for j in range(n)] for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls(([0] * ncols for _ in range(nrows)), ncols)

    @classmethod
    def diagonal(cls, entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return cls(([entries[i] if i == j else 0 for j in range(n)] for i in range(n)), n)

    def tolist(self) -> Rows:
        return [list(r) for r in self.rows]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"{self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        return IntMatrix(matmul(self.rows, other.rows, other.ncols), other.ncols)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, IntMatrix)
            and type(other) is type(self)
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.ncols, self.rows))

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self.rows]})"

    def transpose(self) -> "IntMatrix":
        return IntMatrix(transpose(self.rows, self.ncols), self.nrows)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def det(self) -> int:
        if self.nrows != self.ncols:
            raise DimensionMismatch("determinant of a non-square matrix")
        return bareiss_det(self.tolist())


class ModMatrix(IntMatrix):
    """Integer matrix with entries reduced modulo a prime power."""

    __slots__ = ("modulus",)

    def __init__(self, modulus: int, rows: Iterable[Iterable[int]], ncols: int | None = None):
        if modulus < 2:
            raise ValueError("modulus must be at least 2")
        super().__init__(((x % modulus for x in r) for r in rows), ncols)
        self.modulus = modulus

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ModMatrix) and other.modulus == self.modulus and super().__eq__(other)

    def __hash__(self) -> int:
        return hash((self.modulus, self.ncols, self.rows))

    def __matmul__(self, other: "IntMatrix") -> "ModMatrix":
        prod = super().__matmul__(other)
        return ModMatrix(self.modulus, prod.rows, prod.ncols)

    def __repr__(self) -> str:
        return f"ModMatrix({self.modulus}, {[list(r) for r in self.rows]})"


# -- small list helpers -------------------------------------------------------


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], bcols: int) -> Rows:
    bt = transpose(b, bcols)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a: Sequence[Sequence[int]], ncols: int) -> Rows:
    return [[row[j] for row in a] for j in range(ncols)]


def identity_rows(n: int) -> Rows:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def bareiss_det(a: Rows) -> int:
    n = len(a)
    if n == 0:
        return 1
    a = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def p_valuation(x: int, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def prime_factors(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    n = abs(n)
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# -- Smith normal form -------------------------------------------------------


class _Smith:
    """Row/column reduction tracking P, Q and their inverses with P·A·Q = D."""

    def __init__(self, a: Rows, ncols: int):
        self.a = [list(r) for r in a]
        self.m, self.n = len(a), ncols
        self.P = identity_rows(self.m)
        self.Pinv = identity_rows(self.m)
        self.Q = identity_rows(self.n)
        self.Qinv = identity_rows(self.n)

    def row_swap(self, i: int, j: int) -> None:
        if i == j:
            return
        for mat in (self.a, self.P):
            mat[i], mat[j] = mat[j], mat[i]
        for row in self.Pinv:
            row[i], row[j] = row[j], row[i]

    def col_swap(self, i: int, j: int) -> None:
        if i == j:
            return
        for mat in (self.a, self.Q):
            for row in mat:
                row[i], row[j] = row[j], row[i]
        self.Qinv[i], self.Qinv[j] = self.Qinv[j], self.Qinv[i]

    def row_add(self, i: int, j: int, c: int) -> None:
        # row_i += c * row_j
        for mat in (self.a, self.P):
            ri, rj = mat[i], mat[j]
            for k in range(len(ri)):
                ri[k] += c * rj[k]
        for row in self.Pinv:
            row[j] -= c * row[i]

    def col_add(self, i: int, j: int, c: int) -> None:
        # col_i += c * col_j
        for mat in (self.a, self.Q):
            for row in mat:
                row[i] += c * row[j]
        qi, qj = self.Qinv[i], self.Qinv[j]
        for k in range(len(qj)):
            qj[k] -= c * qi[k]

    def row_neg(self, i: int) -> None:
        self.a[i] = [-x for x in self.a[i]]
        self.P[i] = [-x for x in self.P[i]]
        for row in self.Pinv:
            row[i] = -row[i]

    def _smallest(self, cells: Iterable[tuple[int, int]]) -> tuple[int, int] | None:
        best = None
        for i, j in cells:
            v = self.a[i][j]
            if v and (best is None or (abs(v), i, j) < best):
                best = (abs(v), i, j)
        return None if best is None else (best[1], best[2])

    def run(self) -> int:
        a, m, n = self.a, self.m, self.n
        t = 0
        while t < min(m, n):
            piv = self._smallest((i, j) for i in range(t, m) for j in range(t, n))
            if piv is None:
                break
            self.row_swap(t, piv[0])
            self.col_swap(t, piv[1])
            while True:
                clean = True
                for i in range(t + 1, m):
                    if a[i][t]:
                        self.row_add(i, t, -(a[i][t] // a[t][t]))
                        clean = clean and a[i][t] == 0
                for j in range(t + 1, n):
                    if a[t][j]:
                        self.col_add(j, t, -(a[t][j] // a[t][t]))
                        clean = clean and a[t][j] == 0
                if not clean:
                    cells = [(t, t)] + [(i, t) for i in range(t + 1, m)] + [(t, j) for j in range(t + 1, n)]
                    i, j = self._smallest(cells)
                    self.row_swap(t, i)
                    self.col_swap(t, j)
                    continue
                bad = next(
                    (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % a[t][t]),
                    None,
                )
                if bad is None:
                    break
                self.row_add(t, bad, 1)
            if a[t][t] < 0:
                self.row_neg(t)
            t += 1
        return t


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ D @ V == m``, U and V unimodular.

    D is diagonal with non-negative entries and each diagonal entry divides the
    next. The pivot is always the entry of smallest absolute value, ties broken
    by row then column index.
    """
    s = _Smith(m.tolist(), m.ncols)
    s.run()
    return IntMatrix(s.Pinv, m.nrows), IntMatrix(s.a, m.ncols), IntMatrix(s.Qinv, m.ncols)


def smith_diagonal(a: Sequence[Sequence[int]], ncols: int) -> list[int]:
    """Nonzero diagonal of the Smith form of ``a``."""
    s = _Smith([list(r) for r in a], ncols)
    rank = s.run()
    return [s.a[i][i] for i in range(rank)]


def integer_kernel(a: Sequence[Sequence[int]], ncols: int) -> Rows:
    """Basis (as rows) of ``{x in Z^ncols : a x = 0}``."""
    s = _Smith([list(r) for r in a], ncols)
    rank = s.run()
    return [[s.Q[i][j] for i in range(ncols)] for j in range(rank, ncols)]


# -- Hermite normal form and lattices ---------------------------------------


def hermite_rows(gens: Iterable[Sequence[int]], ncols: int) -> Rows:
    """Row Hermite normal form of the lattice spanned by ``gens``.

    Pivots are positive with increasing column index; entries above a pivot lie
    in ``[0, pivot)``. Zero rows are dropped.
    """
    rows = [list(r) for r in gens if any(r)]
    basis: Rows = []
    pivots: list[int] = []
    for c in range(ncols):
        hit = [r for r in rows if r[c]]
        if not hit:
            continue
        rest = [r for r in rows if not r[c]]
        while len(hit) > 1:
            hit.sort(key=lambda r: abs(r[c]))
            piv = hit[0]
            keep = [piv]
            for r in hit[1:]:
                q = r[c] // piv[c]
                r2 = [x - q * y for x, y in zip(r, piv)]
                if r2[c]:
                    keep.append(r2)
                elif any(r2):
                    rest.append(r2)
            hit = keep
        piv = hit[0]
        if piv[c] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        pivots.append(c)
        rows = rest
    for j, c in enumerate(pivots):
        pj = basis[j]
        for i in range(j):
            q = basis[i][c] // pj[c]
            if q:
                basis[i] = [x - q * y for x, y in zip(basis[i], pj)]
    return basis


@dataclass(frozen=True)
class Lattice:
    """A subgroup of Z^dim stored by its row Hermite basis."""

    dim: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def span(cls, gens: Iterable[Sequence[int]], dim: int) -> "Lattice":
        return cls(dim, tuple(tuple(r) for r in hermite_rows(gens, dim)))

    @classmethod
    def full(cls, dim: int, scale: int = 1) -> "Lattice":
        if scale == 0:
            return cls(dim, ())
        return cls.span(([abs(scale) if i == j else 0 for j in range(dim)] for i in range(dim)), dim)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __add__(self, other: "Lattice") -> "Lattice":
        if other.dim != self.dim:
            raise DimensionMismatch("lattice dimensions differ")
        return Lattice.span(list(self.basis) + list(other.basis), self.dim)

    def coords(self, v: Sequence[int]) -> list[int] | None:
        """Coordinates of ``v`` in the Hermite basis, or None if v is not in the lattice."""
        v = list(v)
        out = []
        for row in self.basis:
            c = next(i for i, x in enumerate(row) if x)
            if v[c] % row[c]:
                return None
            q = v[c] // row[c]
            out.append(q)
            if q:
                v = [x - q * y for x, y in zip(v, row)]
        return out if not any(v) else None

    def contains(self, v: Sequence[int]) -> bool:
        return self.coords(v) is not None

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(r) for r in other.basis)

    def image(self, a: Sequence[Sequence[int]], out_dim: int) -> "Lattice":
        return Lattice.span((matvec(a, r) for r in self.basis), out_dim)

    def preimage(self, a: Sequence[Sequence[int]], target: "Lattice") -> "Lattice":
        """``{x in self : a x in target}``."""
        k, t = self.rank, target.rank
        if k == 0:
            return self
        images = [matvec(a, r) for r in self.basis]
        # solve sum_i y_i images_i - sum_j z_j target_j = 0
        system = [
            [images[i][row] for i in range(k)] + [-target.basis[j][row] for j in range(t)]
            for row in range(target.dim)
        ]
        ker = integer_kernel(system, k + t)
        gens = []
        for sol in ker:
            y = sol[:k]
            gens.append([sum(y[i] * self.basis[i][c] for i in range(k)) for c in range(self.dim)])
        return Lattice.span(gens, self.dim)

    def quotient(self, sub: "Lattice") -> "FiniteModule":
        """Isomorphism class of ``self / sub``; ``sub`` must be contained in ``self``."""
        rel = []
        for r in sub.basis:
            c = self.coords(r)
            if c is None:
                raise ValueError("sublattice is not contained in the ambient lattice")
            rel.append(c)
        diag = smith_diagonal(rel, self.rank) if rel else []
        return FiniteModule.from_invariants(diag, self.rank - len(diag))


# -- finite modules ------------------------------------------------------------


@dataclass(frozen=True)
class FiniteModule:
    """Isomorphism class of a finitely generated abelian group.

    ``factors`` are elementary divisors (prime powers) in descending order; the
    empty tuple together with ``free_rank == 0`` is the zero module.
    """

    factors: tuple[int, ...] = ()
    free_rank: int = 0

    @classmethod
    def from_invariants(cls, invariants: Iterable[int], free_rank: int = 0) -> "FiniteModule":
        elem = []
        for d in invariants:
            d = abs(d)
            if d == 0:
                free_rank += 1
                continue
            for q, e in prime_factors(d).items():
                elem.append(q**e)
        return cls(tuple(sorted(elem, reverse=True)), free_rank)

    @classmethod
    def cyclic_power(cls, order: int, copies: int) -> "FiniteModule":
        return cls.from_invariants([order] * copies if order > 1 else [])

    @property
    def cardinality(self) -> int:
        if self.free_rank:
            raise ValueError("infinite module")
        out = 1
        for f in self.factors:
            out *= f
        return out

    def is_zero(self) -> bool:
        return not self.factors and not self.free_rank

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        counts: dict[int, int] = {}
        for f in self.factors:
            counts[f] = counts.get(f, 0) + 1
        for f in sorted(counts, reverse=True):
            c = counts[f]
            parts.append(f"Z/{f}" if c == 1 else f"(Z/{f})^{c}")
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {"factors": list(self.factors), "free_rank": self.free_rank}


# -- Howell form ---------------------------------------------------------------


def _split_prime_power(n: int) -> tuple[int, int]:
    fac = prime_factors(n)
    if len(fac) != 1:
        raise ValueError(f"{n} is not a prime power")
    ((p, m),) = fac.items()
    return p, m


def howell_rows(rows: Iterable[Sequence[int]], ncols: int, modulus: int) -> Rows:
    """Howell form over Z/p^m as a list of rows (entries in ``[0, modulus)``)."""
    p, _ = _split_prime_power(modulus)
    work = [[x % modulus for x in r] for r in rows]
    work = [r for r in work if any(r)]
    out: Rows = []
    pivots: list[int] = []
    for c in range(ncols):
        hit = [r for r in work if r[c]]
        if not hit:
            continue
        k = min(range(len(work)), key=lambda i: (not work[i][c], p_valuation(work[i][c], p) if work[i][c] else 0))
        piv = work[k]
        v = p_valuation(piv[c], p)
        inv = pow(piv[c] // p**v, -1, modulus)
        piv = [(x * inv) % modulus for x in piv]
        rest = []
        for i, r in enumerate(work):
            if i == k:
                continue
            if r[c]:
                q = r[c] // p**v
                r = [(x - q * y) % modulus for x, y in zip(r, piv)]
            if any(r):
                rest.append(r)
        ann = [(x * (modulus // p**v)) % modulus for x in piv]
        if any(ann):
            rest.append(ann)
        out.append(piv)
        pivots.append(c)
        work = rest
    for j, c in enumerate(pivots):
        pj = out[j]
        for i in range(j):
            q = out[i][c] // pj[c]
            if q:
                out[i] = [(x - q * y) % modulus for x, y in zip(out[i], pj)]
    return out


def howell_form(m: ModMatrix) -> ModMatrix:
    """Canonical Howell form of the row span of ``m`` over Z/p^m."""
    return ModMatrix(m.modulus, howell_rows(m.rows, m.ncols, m.modulus), m.ncols)


def howell_reduce(form: Sequence[Sequence[int]], v: Sequence[int], modulus: int) -> list[int] | None:
    """Reduce ``v`` by a Howell form; returns the remainder, or None on success (v in span)."""
    v = [x % modulus for x in v]
    for row in form:
        c = next(i for i, x in enumerate(row) if x)
        if v[c] % row[c]:
            return v
        q = v[c] // row[c]
        if q:
            v = [(x - q * y) % modulus for x, y in zip(v, row)]
    return None if not any(v) else v


def submodule_membership(gens: ModMatrix, v: Sequence[int]) -> bool:
    if len(v) != gens.ncols:
        raise DimensionMismatch(f"vector of length {len(v)} against {gens.ncols} columns")
    form = howell_rows(gens.rows, gens.ncols, gens.modulus)
    return howell_reduce(form, v, gens.modulus) is None


def mod_kernel(a: Sequence[Sequence[int]], ncols: int, src_mod: int, dst_mod: int) -> Rows:
    """Generators of ``{x in (Z/src_mod)^ncols : a x = 0 mod dst_mod}`` in Howell form."""
    nrows = len(a)
    src = Lattice.full(ncols)
    target = Lattice.full(nrows, dst_mod)
    ker = src.preimage(a, target)
    return howell_rows(ker.basis, ncols, src_mod)


# -- cohomology ----------------------------------------------------------------


@dataclass(frozen=True)
class Subquotient:
    """The group ``top / bottom`` for lattices ``bottom <= top`` in Z^dim."""

    top: Lattice
    bottom: Lattice

    @property
    def dim(self) -> int:
        return self.top.dim

    @classmethod
    def free(cls, dim: int, modulus: int = 0) -> "Subquotient":
        return cls(Lattice.full(dim), Lattice.full(dim, modulus))

    def module(self) -> FiniteModule:
        return self.top.quotient(self.bottom)


def subquotient_cohomology(
    terms: Sequence[Subquotient], maps: Sequence[Sequence[Sequence[int]]]
) -> list[FiniteModule]:
    """Cohomology of a complex of subquotients ``terms[i]`` with ``maps[i]: i -> i+1``.

    Each map must send ``top`` into ``top`` and ``bottom`` into ``bottom`` of the
    next term; this is not re-checked here.
    """
    out = []
    for i, term in enumerate(terms):
        if i < len(maps):
            cycles = term.top.preimage(maps[i], terms[i + 1].bottom)
        else:
            cycles = term.top
        bounds = term.bottom
        if i > 0:
            bounds = bounds + terms[i - 1].top.image(maps[i - 1], term.dim)
        out.append(cycles.quotient(bounds))
    return out


def _as_rows(m: IntMatrix | Sequence[Sequence[int]]) -> Rows:
    return m.tolist() if isinstance(m, IntMatrix) else [list(r) for r in m]


def complex_cohomology(
    diffs: Sequence[IntMatrix], window: tuple[int, int] | None = None, modulus: int | None = None
) -> list[FiniteModule]:
    """Cohomology of ``C^0 -> C^1 -> ...`` given by the differential matrices.

    ModMatrix inputs (or an explicit ``modulus``) give a complex of free
    Z/p^m-modules; otherwise the complex is over Z and free parts are reported
    through ``free_rank``. ``window`` restricts the returned degrees to the
    half-open range ``[lo, hi)``.
    """
    if modulus is None:
        mods = {d.modulus for d in diffs if isinstance(d, ModMatrix)}
        if len(mods) > 1:
            raise DimensionMismatch("differentials over different moduli")
        modulus = mods.pop() if mods else 0
    if not diffs:
        raise DimensionMismatch("a complex needs at least one differential")
    ranks = [diffs[0].ncols] + [d.nrows for d in diffs]
    for i, d in enumerate(diffs):
        if d.ncols != ranks[i]:
            raise DimensionMismatch(f"differential {i} has {d.ncols} columns, expected {ranks[i]}")
    for i in range(len(diffs) - 1):
        comp = matmul(diffs[i + 1].rows, diffs[i].rows, diffs[i].ncols)
        if any((x % modulus) if modulus else x for r in comp for x in r):
            raise CompositionNonzero(f"d{i + 1} o d{i} != 0")
    terms = [Subquotient.free(n, modulus) for n in ranks]
    result = subquotient_cohomology(terms, [_as_rows(d) for d in diffs])
    if window is not None:
        lo, hi = window
        result = result[lo:hi]
    return result


def rational_inverse(a: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """Inverse of a square integer matrix over Q."""
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]
