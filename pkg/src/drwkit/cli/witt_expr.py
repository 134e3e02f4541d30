"""A small expression language for Witt vectors over the semistable F_p-algebra.

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | 'x') factor)*
    factor := INT | '[' INT ']' | '[' 't' '_'? INT ']' | ('V' | 'F' | 'R') '(' expr ')'
            | '(' expr ')' | '-' factor

Integer literals are the images of integers; ``[a]`` is the Teichmüller lift
of a in F_p and ``[t_i]`` that of a coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ParseError
from ..semistable import FrameShape, SemistablePoly, SemistableRing
from ..witt import (
    WittVector,
    frobenius_F,
    restriction_R,
    teichmuller,
    verschiebung_V,
    witt_add,
    witt_from_int,
    witt_mul,
    witt_neg,
    witt_zero,
)


@dataclass(frozen=True)
class Node:
    kind: str  # int, teich, coord, op, add, sub, mul, neg
    value: object = None
    children: tuple = ()
    position: int = 0


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise ParseError(f"expected {ch!r}, found {found!r}", self.pos)
        self.pos += 1

    def integer(self) -> int:
        self._skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected an integer", start)
        return int(self.text[start : self.pos])

    def parse(self) -> Node:
        node = self.expr()
        if self.peek():
            raise ParseError(f"unexpected {self.peek()!r}", self.pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek() in ("+", "-"):
            op, at = self.peek(), self.pos
            self.pos += 1
            node = Node("add" if op == "+" else "sub", children=(node, self.term()), position=at)
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek() in ("*", "x", "×"):
            at = self.pos
            self.pos += 1
            node = Node("mul", children=(node, self.factor()), position=at)
        return node

    def factor(self) -> Node:
        ch, at = self.peek(), self.pos
        if ch.isdigit():
            return Node("int", self.integer(), position=at)
        if ch == "-":
            self.pos += 1
            return Node("neg", children=(self.factor(),), position=at)
        if ch == "(":
            self.pos += 1
            node = self.expr()
            self.expect(")")
            return node
        if ch in ("V", "F", "R"):
            self.pos += 1
            self.expect("(")
            node = self.expr()
            self.expect(")")
            return Node("op", ch, (node,), at)
        if ch == "[":
            self.pos += 1
            if self.peek() == "t":
                self.pos += 1
                if self.peek() == "_":
                    self.pos += 1
                node = Node("coord", self.integer(), position=at)
            else:
                node = Node("teich", self.integer(), position=at)
            self.expect("]")
            return node
        raise ParseError(f"unexpected {ch!r}" if ch else "unexpected end of input", at)


def parse(text: str) -> Node:
    return _Parser(text).parse()


def evaluate(node: Node, ring: SemistableRing, p: int, n: int) -> WittVector:
    """Value of ``node`` in W_n of the ring; V lowers and F raises the level of its argument."""
    if n < 1:
        raise ParseError("level dropped below 1", node.position)
    shape = ring.shape
    if node.kind == "int":
        return witt_from_int(ring, p, n, node.value)
    if node.kind == "teich":
        return teichmuller(ring, p, n, SemistablePoly.constant(shape, ring.modulus, node.value))
    if node.kind == "coord":
        i = node.value
        if not 0 <= i <= shape.d:
            raise ParseError(f"coordinate t{i} outside t0..t{shape.d}", node.position)
        e = [0] * shape.nvars
        e[i] = 1
        return teichmuller(ring, p, n, SemistablePoly.monomial(shape, ring.modulus, e))
    if node.kind == "neg":
        return witt_neg(evaluate(node.children[0], ring, p, n))
    if node.kind in ("add", "sub", "mul"):
        a = evaluate(node.children[0], ring, p, n)
        b = evaluate(node.children[1], ring, p, n)
        if node.kind == "add":
            return witt_add(a, b)
        if node.kind == "sub":
            return witt_add(a, witt_neg(b))
        return witt_mul(a, b)
    if node.kind == "op":
        (arg,) = node.children
        if node.value == "V":
            if n == 1:
                return witt_zero(ring, p, 1)
            return verschiebung_V(evaluate(arg, ring, p, n - 1))
        if node.value == "F":
            return frobenius_F(evaluate(arg, ring, p, n + 1))
        return restriction_R(evaluate(arg, ring, p, n + 1))
    raise ParseError(f"unknown node {node.kind}", node.position)


def evaluate_text(text: str, p: int, n: int, shape: FrameShape | None = None) -> WittVector:
    shape = shape or FrameShape(1, 1)
    return evaluate(parse(text), SemistableRing(shape, p), p, n)
