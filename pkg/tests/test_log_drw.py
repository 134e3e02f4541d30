import itertools
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drwkit.errors import MalformedExpression
from drwkit.exact_linalg import howell_rows
from drwkit.log_drw import (
    Dlog,
    VTeich,
    Weight,
    basic,
    basic_expression,
    basis_elements,
    basis_index,
    component,
    coordinates,
    dlog_monoid,
    drw_d,
    drw_F,
    drw_mul,
    drw_R,
    drw_V,
    enumerate_partitions,
    fil_submodule,
    lambda_map,
    normalize_expression,
    teichmuller_monomial,
    weight_stats,
    weights_in_box,
)
from drwkit.log_drw.axioms import axiom_report, box_basis
from drwkit.semistable import FrameShape, SemistablePoly
from drwkit.witt import semistable_witt_ring, teichmuller, verschiebung_V, witt_mul

S11 = FrameShape(1, 1)
S21 = FrameShape(2, 1)
S22 = FrameShape(2, 2)


def test_weight_stats_examples():
    assert Weight.of(2, [0, Fraction(1, 2)]).depth == 1
    assert Weight.of(3, [0, 3]).depth == 0
    st_ = weight_stats(Weight.of(2, [0, Fraction(1, 4), 2]), S21)
    assert st_.order[0] == 1
    assert st_.mu == 2


def test_partitions_of_empty_support():
    z = Weight.of(2, [0, 0])
    (P,) = enumerate_partitions(z, S11, "plus")
    assert P.degree == 0 and all(not iv for iv in P.intervals)


@pytest.mark.parametrize("shape", [S11, S21, S22, FrameShape(2, 0)])
@pytest.mark.parametrize("p", [2, 3])
def test_component_ranks_are_binomial(shape, p):
    for n in (1, 2):
        for k in weights_in_box(shape, p, n, 2):
            for l in range(shape.d + 1):
                assert len(enumerate_partitions(k, shape, degree=l)) == comb(shape.d, l)
                assert component(k, shape, l).rank == comb(shape.d, l)


@pytest.mark.parametrize("shape", [S11, S21])
def test_basis_index_prime_to_p(shape):
    for p in (2, 3):
        for k in weights_in_box(shape, p, 2, 2):
            for l in range(shape.d + 1):
                idx = basis_index(k, shape, l)
                assert idx.free_rank == 0
                assert idx.cardinality % p != 0


def test_fv_equals_p_on_basis():
    for x in box_basis(S21, 2, 2, 2):
        assert drw_F(drw_V(x)) == x.scale(2)


def test_square_of_dlog_vanishes():
    w = dlog_monoid(3, S21, 2, (0, 0, 1))
    assert drw_mul(w, w).is_zero()


def test_sum_of_crossing_dlogs_vanishes():
    assert normalize_expression([(1, [Dlog((0,))]), (1, [Dlog((1,))])], 2, S11, 2, 1).is_zero()
    assert dlog_monoid(2, S21, 2, (1, 1, 0)).is_zero()
    assert not dlog_monoid(2, S21, 2, (1, 0, 0)).is_zero()


def test_basic_elements_are_normal_forms():
    for shape in (S11, S21):
        for k in weights_in_box(shape, 2, 2, 2):
            for l in range(shape.d + 1):
                for P in component(k, shape, l).partitions:
                    e = basic(k, P, 1, 2, shape)
                    assert normalize_expression(basic_expression(k, P, 1), 2, shape, 2, l) == e


def test_basic_rejects_foreign_partition():
    k = Weight.of(2, [0, 1])
    P = component(Weight.of(2, [0, 0]), S11, 1).partitions[0]
    if P not in component(k, S11, 1).partitions:
        with pytest.raises(MalformedExpression):
            basic(k, P, 1, 2, S11)


def test_d_of_degree_zero_integral_basic():
    # d of [t_1] in W_2 is the degree-one basic element of the same weight
    k = Weight.of(3, [0, 1])
    x = teichmuller_monomial(3, S11, 2, (0, 1))
    (P,) = component(k, S11, 1).partitions
    assert drw_d(x) == basic(k, P, 1, 2, S11)


def test_v_product_rule_in_degree_zero():
    # V(x)V(y) = V(x F V y) = p V(x y)
    p, n = 2, 2
    x = teichmuller_monomial(p, S11, n - 1, (0, 1))
    y = teichmuller_monomial(p, S11, n - 1, (1, 0))
    assert drw_mul(drw_V(x), drw_V(y)) == drw_V(drw_mul(x, y).scale(p))
    x2 = teichmuller_monomial(p, S11, n - 1, (0, 1))
    assert drw_mul(drw_V(x2), drw_V(x2)) == drw_V(drw_mul(x2, x2)).scale(p)


def test_lambda_on_witt_level():
    ring = semistable_witt_ring(1, 1, 2)
    t1 = SemistablePoly.monomial(ring.shape, 2, (0, 1))
    a = teichmuller(ring, 2, 2, t1)
    assert lambda_map(witt_mul(a, a)) == drw_mul(lambda_map(a), lambda_map(a))
    assert lambda_map(verschiebung_V(teichmuller(ring, 2, 1, t1))) == drw_V(teichmuller_monomial(2, S11, 1, (0, 1)))


def _elements(k, shape, n, l):
    basis = basis_elements(k, shape, n, l)
    mod = k.p ** (n - k.depth)
    for cs in itertools.product(range(mod), repeat=len(basis)):
        x = None
        for c, b in zip(cs, basis):
            x = b.scale(c) if x is None else x + b.scale(c)
        yield list(cs), x


@pytest.mark.parametrize("p,n,shape", [(2, 2, S11), (2, 3, S11), (3, 2, S11), (2, 2, S21)])
def test_fil_is_kernel_of_restriction_by_enumeration(p, n, shape):
    for k in weights_in_box(shape, p, n, 2):
        for l in range(shape.d + 1):
            rank = component(k, shape, l).rank
            mod = p ** (n - k.depth)
            for m in range(1, n):
                kernel = []
                for cs, x in _elements(k, shape, n, l):
                    y = x
                    for _ in range(m):
                        y = drw_R(y)
                    if y.is_zero():
                        kernel.append(cs)
                assert howell_rows(kernel, rank, mod) == fil_submodule(n, m, l, k, shape)


def test_fil_edge_cases():
    k = Weight.of(2, [0, Fraction(1, 2)])
    # degree zero: only the V-image contributes
    assert fil_submodule(2, 1, 0, k, S11) == howell_rows(
        [coordinates(drw_V(e), k, 0) for e in basis_elements(k.scaled(2), S11, 1, 0)], 1, 2
    )
    # m = n: the whole weight component
    full = fil_submodule(2, 2, 1, Weight.of(2, [0, 1]), S11)
    assert full == howell_rows([[1]], 1, 4)
    with pytest.raises(ValueError):
        fil_submodule(2, 0, 0, k, S11)


elements = st.sampled_from(box_basis(S21, 2, 2, 2))


@settings(max_examples=200, deadline=None)
@given(elements, elements)
def test_leibniz_and_d_squared(x, y):
    if x.degree + 2 <= 2:
        assert drw_d(drw_d(x)).is_zero()
    if x.degree + y.degree < 2:
        sign = -1 if x.degree % 2 else 1
        assert drw_d(drw_mul(x, y)) == drw_mul(drw_d(x), y) + drw_mul(x, drw_d(y)).scale(sign)
    if x.degree + y.degree <= 2:
        swap = -1 if (x.degree * y.degree) % 2 else 1
        assert drw_mul(x, y) == drw_mul(y, x).scale(swap)


def test_axiom_report_small_box():
    report = axiom_report(2, 1, S11, 1)
    assert report.passed, [c.name for c in report.failures]
    assert {c.name for c in report.checks} >= {"(c) FV = p", "(g) F dlog = dlog"}


def test_vteich_expression():
    x = normalize_expression([(1, [VTeich(1, 1, (0, 1))])], 2, S11, 2, 0)
    assert x == drw_V(teichmuller_monomial(2, S11, 1, (0, 1)))


@pytest.mark.parametrize("p", [2, 3])
def test_weight_grading(p):
    for x in box_basis(S21, p, 2, 2):
        (k,) = x.weights()
        assert set(drw_d(x).weights()) <= {k}
        assert set(drw_R(x).weights()) <= {k}
        assert set(drw_V(x).weights()) <= {k.scaled(Fraction(1, p))}
        assert set(drw_F(x).weights()) <= {k.scaled(p)}


def test_normalize_is_idempotent():
    from drwkit.log_drw import normalize

    for x in box_basis(S21, 3, 2, 2):
        assert normalize(x.to_raw(), x.n, x.degree) == x
        y = x + x.scale(2)
        assert normalize(y.to_raw(), y.n, y.degree) == y
