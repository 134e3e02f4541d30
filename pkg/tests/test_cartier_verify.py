from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drwkit.cartier_verify import (
    ChartTerm,
    WeightComplexModel,
    cartier_inverse_1,
    cartier_multiplicativity,
    cartier_n,
    compare_models,
    entries,
    eta_q_identity_check,
    is_exact,
    kernel_lemma_suite,
    mu_from_entries,
    predicted_decomposition,
    qkoszul_report,
    qkoszul_weight_complex,
)
from drwkit.cli.oracles import brute_cohomology_orders
from drwkit.errors import NotExpressible
from drwkit.homological import koszul
from drwkit.log_drw import (
    Weight,
    basis_elements,
    dlog_monoid,
    drw_F,
    drw_V,
    teichmuller_monomial,
    weights_in_box,
)
from drwkit.semistable import FrameShape

S11 = FrameShape(1, 1)
S21 = FrameShape(2, 1)
S22 = FrameShape(2, 2)


def strs(ms):
    return [str(m) for m in ms]


# -- level one ------------------------------------------------------------------------

def test_cartier_inverse_of_dlog():
    for p in (2, 3):
        w = dlog_monoid(p, S11, 1, (0, 1))
        assert cartier_inverse_1(w) == w
        assert cartier_inverse_1([ChartTerm(1, (0, 0), (1,))], p, S11, 1) == w


def test_cartier_inverse_of_t_dlog_t():
    for p in (2, 3):
        got = cartier_inverse_1([ChartTerm(1, (0, 1), (1,))], p, S11, 1)
        want = cartier_inverse_1([ChartTerm(1, (0, 1), ())], p, S11, 0)
        assert want == teichmuller_monomial(p, S11, 1, (0, p))
        assert not got.is_zero()
        assert not is_exact(got)


def test_cartier_inverse_of_zero_and_bad_input():
    assert cartier_inverse_1([], 2, S11, 1).is_zero()
    with pytest.raises(NotExpressible):
        cartier_inverse_1([ChartTerm(1, (-1, 0), ())], 2, S11, 0)
    with pytest.raises(NotExpressible):
        cartier_inverse_1([ChartTerm(1, (0, 0), (5,))], 2, S11, 1)
    with pytest.raises(NotExpressible):
        cartier_inverse_1(teichmuller_monomial(2, S11, 2, (0, 1)))
    with pytest.raises(NotExpressible):
        cartier_inverse_1([ChartTerm(1, (0, 1), ())])


def test_exactness():
    assert is_exact(dlog_monoid(3, S11, 1, (0, 0)))
    x = teichmuller_monomial(3, S11, 1, (0, 1))
    from drwkit.log_drw import drw_d

    assert is_exact(drw_d(x))
    assert not is_exact(dlog_monoid(3, S11, 1, (0, 1)))


# -- C^{-n} ---------------------------------------------------------------------------

def test_cartier_n_examples():
    matrix, report = cartier_n(2, 1, 0, Weight.of(2, [1, 0]), S11)
    assert report.passed
    assert matrix == [[1]]
    _, report = cartier_n(2, 1, 1, Weight.of(2, [0, Fraction(1, 2)]), S11)
    assert report.passed
    for k in weights_in_box(S21, 2, 2, 2):
        for l in range(3):
            assert cartier_n(2, 2, l, k, S21)[1].passed


def test_cartier_target_has_source_size_by_enumeration():
    # |H^l(K_{Z/p^n}(entries))| = |W_n Omega^l_k| = p^{(n - mu) C(d, l)}
    for p, n, shape in ((2, 1, S11), (2, 2, S11), (3, 1, S21), (2, 1, S21)):
        for k in weights_in_box(shape, p, n, 2):
            m = k.integral_vector(n)
            K = koszul(p**n, entries(m, shape))
            orders = brute_cohomology_orders([list(map(list, d)) for d in K.diffs], list(K.ranks), p**n)
            for l in range(shape.d + 1):
                assert orders[l] == p ** ((n - k.depth) * comb(shape.d, l))
                assert len(basis_elements(k, shape, n, l)) == comb(shape.d, l)


def test_cartier_n_via_frobenius_of_lift_by_hand():
    # level one, degree zero: F applied to [t]^k at level 2 lands on [t]^{pk} at level 1
    x = teichmuller_monomial(3, S11, 2, (0, 1))
    assert drw_F(x) == teichmuller_monomial(3, S11, 1, (0, 3))


def test_multiplicativity_signs():
    report = cartier_multiplicativity(2, 1, S21, Weight.of(2, [0, 1, 0]), Weight.of(2, [0, 0, 1]), 1, 1)
    assert report.passed
    assert set(report.checks[0].witness["signs"]) == {"+"}


# -- predicted decomposition ---------------------------------------------------------

def test_predicted_decomposition_examples():
    assert strs(predicted_decomposition(2, 2, i, [2, 2]) for i in range(3)) == ["Z/2", "(Z/2)^2", "Z/2"]
    assert all(predicted_decomposition(3, 2, i, [1, 6]).is_zero() for i in range(3))
    assert strs(predicted_decomposition(3, 2, i, [0]) for i in range(2)) == ["Z/9", "Z/9"]
    assert predicted_decomposition(2, 2, 0, Weight.of(2, [0, Fraction(1, 2)])).is_zero() is False
    assert mu_from_entries(2, 3, [4, 0, 6]) == 2


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, 1), (2, 2), (3, 1), (3, 2)]), st.lists(st.integers(-4, 4), min_size=1, max_size=2))
def test_decomposition_against_enumeration(pn, ent):
    p, n = pn
    K = koszul(p**n, ent)
    orders = brute_cohomology_orders([list(map(list, d)) for d in K.diffs], list(K.ranks), p**n)
    got = K.cohomology()
    for i, h in enumerate(got):
        assert h == predicted_decomposition(p, n, i, ent)
        assert h.cardinality == orders[i]


# -- q-models ---------------------------------------------------------------------------

def test_qkoszul_examples():
    assert all(h.is_zero() for h in qkoszul_weight_complex(2, 1, [1, 2]).cohomology())
    for p, n in ((2, 2), (3, 1)):
        hs = qkoszul_weight_complex(p, n, [0]).cohomology()
        assert [h.free_rank for h in hs] == [p**n - 1] * 2
    hs = qkoszul_weight_complex(3, 1, [3]).cohomology()
    assert [h.free_rank for h in hs] == [2, 2]
    assert qkoszul_report(2, 2, [2, 2]).passed
    assert qkoszul_weight_complex(2, 2, [0, 0, 2], S21).ranks == qkoszul_weight_complex(2, 2, [2, 2]).ranks


def test_eta_q_examples():
    for p in (2, 3):
        assert eta_q_identity_check(p, 1, [1]).passed
        assert eta_q_identity_check(p, 1, [1, 2]).passed
    assert eta_q_identity_check(2, 1, [2]).passed


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(2, 1), (2, 2), (3, 1)]), st.lists(st.integers(-4, 4), min_size=1, max_size=2))
def test_eta_q_property(pn, ent):
    p, n = pn
    report = eta_q_identity_check(p, n, ent)
    assert report.passed, report.to_json()


# -- model comparison ----------------------------------------------------------------------

def test_compare_models_examples():
    for l in range(3):
        report = compare_models(2, 2, l, [0, 2, 2], S21)
        assert report.passed, report.to_json()
        assert report.params["bkf_twist"] == -l
    model = WeightComplexModel(2, 2, S21, Weight.from_integral(2, (0, 2, 2), 2))
    assert strs(model.koszul.cohomology()) == ["Z/2", "(Z/2)^2", "Z/2"]
    for l in range(3):
        assert compare_models(2, 2, l, [0, 1, 2], S21).passed
    for k in weights_in_box(S11, 3, 1, 3):
        for l in range(2):
            assert compare_models(3, 1, l, k, S11).passed


# -- kernel lemmas ------------------------------------------------------------------------

@pytest.mark.parametrize("p,n,d,r,bound", [(2, 2, 1, 1, 2), (2, 1, 1, 1, 2), (3, 1, 2, 1, 1), (3, 2, 2, 2, 1)])
def test_kernel_lemma_suite(p, n, d, r, bound):
    report = kernel_lemma_suite(p, n, d, r, bound)
    assert report.checks
    assert report.passed, [c.name for c in report.failures]


def test_literal_kernel_of_frobenius_power_statement_fails():
    # V^i W_n is not inside ker(F^i: W_{n+i} -> W_n) when i < n, since F^i V^i = p^i
    p, n, i = 2, 2, 1
    k = Weight.of(p, [0, 1])
    (x,) = [e for e in basis_elements(k, S11, n, 0)]
    y = x
    for _ in range(i):
        y = drw_V(y)
    fy = y
    for _ in range(i):
        fy = drw_F(fy)
    assert fy == x.scale(p**i)
    assert not fy.is_zero()


def test_level_one_cartier_matches_chart_formula():
    from drwkit.cartier_verify import raw_coordinates

    for p in (2, 3):
        for shape in (S11, S21):
            for k in weights_in_box(shape, p, 1, 3):
                for l in range(shape.d + 1):
                    matrix, report = cartier_n(p, 1, l, k, shape)
                    assert report.passed
                    for j, e in enumerate(basis_elements(k, shape, 1, l)):
                        coords = [x % p for x in raw_coordinates(cartier_inverse_1(e), k.scaled(p))]
                        assert coords == [row[j] % p for row in matrix]
