"""Matrices of operators between single weight components, and Fil submodules."""

from __future__ import annotations

from typing import Callable

from ..exact_linalg import howell_rows
from ..semistable import FrameShape
from .model import DRWElement, basis_elements, component, drw_d, drw_V
from .weights import Weight


def modulus(k: Weight, n: int) -> int:
    """Coefficient modulus p^{n - mu(k)} of the weight-k component (1 when it vanishes)."""
    return k.p ** max(0, n - k.depth)


def coordinates(x: DRWElement, k: Weight, degree: int) -> list[int]:
    comp = component(k, x.shape, degree)
    return [x.coefficient(k, P) for P in comp.partitions]


def operator_matrix(
    op: Callable[[DRWElement], DRWElement],
    shape: FrameShape,
    src: tuple[Weight, int, int],
    dst: tuple[Weight, int, int],
) -> list[list[int]]:
    """Matrix (rows: target basis) of ``op`` from component src=(k, n, l) to dst=(k', n', l')."""
    k_src, n_src, l_src = src
    k_dst, _, l_dst = dst
    rows = component(k_dst, shape, l_dst).rank
    cols = [coordinates(op(e), k_dst, l_dst) for e in basis_elements(k_src, shape, n_src, l_src)]
    return [[c[i] for c in cols] for i in range(rows)]


def fil_submodule(n: int, m: int, degree: int, k: Weight, shape: FrameShape) -> list[list[int]]:
    """Generators of V^{n-m} W_m Omega^l + d V^{n-m} W_m Omega^{l-1} in the weight-k component
    of W_n Omega^l, as coordinate rows in Howell form."""
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    mod = modulus(k, n)
    if mod == 1:
        return []
    src = k.scaled(k.p ** (n - m))
    gens = []
    for e in basis_elements(src, shape, m, degree):
        for _ in range(n - m):
            e = drw_V(e)
        gens.append(coordinates(e, k, degree))
    if degree >= 1:
        for e in basis_elements(src, shape, m, degree - 1):
            for _ in range(n - m):
                e = drw_V(e)
            gens.append(coordinates(drw_d(e), k, degree))
    return howell_rows(gens, component(k, shape, degree).rank, mod)
