import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drwkit.semistable import FrameShape, SemistablePoly, monomial_basis, normalize_monomial, poly_mul


def mono(shape, e, c=1, mod=0):
    return SemistablePoly.monomial(shape, mod, e, c)


def test_normalize_monomial_examples():
    assert normalize_monomial((1, 1, 0), FrameShape(2, 1)).is_zero()
    assert normalize_monomial((2, 1), FrameShape(1, 1)).is_zero()
    s = FrameShape(2, 1)
    assert normalize_monomial((1, 0, 3), s) == mono(s, (1, 0, 3))
    assert not normalize_monomial((1, 0, 3), s).is_zero()


def test_poly_mul_examples():
    s = FrameShape(1, 1)
    assert poly_mul(mono(s, (1, 0)), mono(s, (0, 1))).is_zero()
    s2 = FrameShape(2, 1)
    assert poly_mul(mono(s2, (0, 0, 1)), mono(s2, (0, 0, -1))) == SemistablePoly.constant(s2, 0, 1)
    one = SemistablePoly.constant(s, 0, 1)
    lhs = poly_mul(one + mono(s, (1, 0)), one + mono(s, (0, 1)))
    assert lhs == one + mono(s, (1, 0)) + mono(s, (0, 1))


def test_monomial_basis_examples():
    assert monomial_basis(FrameShape(1, 1), 1) == [(0, 0), (0, 1), (1, 0)]
    assert monomial_basis(FrameShape(1, 0), 1) == [(0, -1), (0, 0), (0, 1)]
    assert monomial_basis(FrameShape(2, 1), 0) == [(0, 0, 0)]


def test_shape_validation():
    with pytest.raises(ValueError):
        FrameShape(1, 2)


polys = st.lists(
    st.tuples(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-2, 2)), st.integers(-3, 3)),
    max_size=4,
)


@settings(max_examples=80, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    s = FrameShape(2, 1)
    x, y, z = (SemistablePoly.build(s, 0, t) for t in (a, b, c))
    assert poly_mul(x, y) == poly_mul(y, x)
    assert poly_mul(poly_mul(x, y), z) == poly_mul(x, poly_mul(y, z))
    assert poly_mul(x, y + z) == poly_mul(x, y) + poly_mul(x, z)


@settings(max_examples=60, deadline=None)
@given(polys)
def test_normal_form_terms(a):
    s = FrameShape(2, 1)
    x = SemistablePoly.build(s, 0, a)
    for e, c in x.terms:
        assert c != 0
        assert min(e[:2]) == 0


def test_normalize_monomial_idempotent():
    s = FrameShape(3, 1)
    for e in [(0, 2, 1, -1), (3, 3, 0, 2), (1, 0, -2, 0)]:
        once = normalize_monomial(e, s)
        for mono_e, _ in once.terms:
            assert normalize_monomial(mono_e, s) == once


@settings(max_examples=300, deadline=None)
@given(polys, polys, polys)
def test_associativity_many(a, b, c):
    s = FrameShape(2, 1)
    x, y, z = (SemistablePoly.build(s, 0, t) for t in (a, b, c))
    assert poly_mul(x, poly_mul(y, z)) == poly_mul(poly_mul(x, y), z)


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("bound", [1, 2, 3])
def test_nonnegative_monomial_count(d, bound):
    for r in range(d + 1):
        got = len(monomial_basis(FrameShape(d, r), bound, nonnegative=True))
        assert got == (bound + 1) ** (d + 1) - bound ** (r + 1) * (bound + 1) ** (d - r)
