"""Brute-force oracles that share no code with the library paths they check."""

from __future__ import annotations

import itertools


def ghost_components(coords: list[int], p: int) -> list[int]:
    return [sum(p**j * coords[j] ** (p ** (i - j)) for j in range(i + 1)) for i in range(len(coords))]


def unghost(ghosts: list[int], p: int) -> list[int]:
    coords: list[int] = []
    for i, w in enumerate(ghosts):
        rest = w - sum(p**j * coords[j] ** (p ** (i - j)) for j in range(i))
        if rest % p**i:
            raise ArithmeticError("ghost vector is not in the image of the ghost map")
        coords.append(rest // p**i)
    return coords


def witt_oracle(op: str, a: list[int], b: list[int], p: int, modulus: int) -> list[int]:
    """Witt sum or product over Z/modulus computed on integer lifts through ghost components."""
    ga, gb = ghost_components(a, p), ghost_components(b, p)
    if op == "add":
        g = [x + y for x, y in zip(ga, gb)]
    elif op == "mul":
        g = [x * y for x, y in zip(ga, gb)]
    else:
        raise ValueError(op)
    return [c % modulus for c in unghost(g, p)]


def brute_cohomology_orders(diffs: list[list[list[int]]], ranks: list[int], modulus: int) -> list[int]:
    """Orders |H^i| of a complex of free Z/modulus-modules by enumerating every vector."""
    def vectors(n):
        return itertools.product(range(modulus), repeat=n)

    def apply(mat, v):
        return tuple(sum(x * y for x, y in zip(row, v)) % modulus for row in mat)

    out = []
    for i, n in enumerate(ranks):
        if i < len(diffs):
            zero = (0,) * ranks[i + 1]
            kernel = sum(1 for v in vectors(n) if apply(diffs[i], v) == zero)
        else:
            kernel = modulus**n
        image = len({apply(diffs[i - 1], v) for v in vectors(ranks[i - 1])}) if i > 0 else 1
        out.append(kernel // image)
    return out
