from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from countdiff.counting_ring import (
    ALEPH,
    INF,
    CountingPolynomial,
    CountingSequence,
    Decision,
    DifferentialCountingPolynomial,
    ExponentPolynomial,
    L_VAR,
    decide_sequences,
    decide_sets,
    estimate_witness,
    evaluate_at_order,
    eventual_less,
    leading_data,
    lower_estimate,
    upper_estimate,
)
from countdiff.errors import HasAleph, NotIntegerValued, ZeroPolynomial

BIG = 10 ** 9


def test_render_examples():
    assert (INF ** 3 - INF ** 2 + INF - ALEPH).render() == "oo^3 - oo^2 + oo - N0"
    assert (2 * INF * (INF - 2)).render() == "2*oo^2 - 4*oo"
    assert CountingPolynomial().render() == "0"


def test_leading_data():
    assert leading_data(2 * INF ** 2 - 4 * INF) == (2, 2)
    with pytest.raises(ZeroPolynomial):
        CountingPolynomial().degree()


def test_exponent_polynomial_render_and_check():
    e = ExponentPolynomial((4, Fraction(17, 2), Fraction(11, 2), 1))
    assert e.render() == "l^3 + 11/2*l^2 + 17/2*l + 4"
    assert [e(k) for k in range(4)] == [4, 19, 51, 106]
    with pytest.raises(NotIntegerValued):
        ExponentPolynomial((0, Fraction(1, 3)))


def test_dcp_render_and_evaluate():
    d = (DifferentialCountingPolynomial.monomial(1, L_VAR + 2)
         - DifferentialCountingPolynomial.monomial(1, L_VAR + 1)
         + DifferentialCountingPolynomial.monomial({(1, 0): 1, (0, 0): 1}, L_VAR)
         - DifferentialCountingPolynomial.monomial({(1, 0): 1}, L_VAR - 1))
    assert d.render() == "oo^(l + 2) - oo^(l + 1) + (l + 1)*oo^l - l*oo^(l - 1)"
    assert evaluate_at_order(d, 2).render() == "oo^4 - oo^3 + 3*oo^2 - 2*oo"


def test_hard_witness_and_decisions():
    t = INF ** 3 - INF ** 2
    s = INF ** 3 - INF ** 2 + INF - ALEPH
    assert estimate_witness(t, s, K=8) == (0, 1)
    assert decide_sets(t, s, K=2) is Decision.DISTINCT
    assert decide_sets(INF - ALEPH, INF - ALEPH) is Decision.UNKNOWN
    assert decide_sets(INF - 1, INF - 1) is Decision.EQUAL
    assert decide_sets(INF - 1, INF) is Decision.DISTINCT


def test_eventual_less_rejects_aleph():
    with pytest.raises(HasAleph):
        eventual_less(INF, ALEPH)


def test_sequence_render_and_call():
    seq = CountingSequence((INF,), CountingPolynomial.constant(2) * INF)
    assert seq.render() == "l = 0: oo\nl >= 1: 2*oo"
    assert seq(5) == 2 * INF


def test_decide_sequences_per_order():
    t = CountingSequence((INF ** 2 - INF,), INF ** 3 - INF ** 2)
    s = CountingSequence((INF ** 2 - INF + 1,), INF ** 3 - INF ** 2 + INF - ALEPH)
    assert decide_sequences(t, s, K=2) is Decision.DISTINCT
    assert decide_sequences(s, s) is Decision.UNKNOWN
    assert decide_sequences(t, t) is Decision.EQUAL


# --- properties -------------------------------------------------------------

small = st.integers(-4, 4)
plain = st.dictionaries(st.tuples(st.integers(0, 3), st.just(0)), small, max_size=4).map(
    CountingPolynomial)
with_aleph = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 2)), small,
                             max_size=4).map(CountingPolynomial)


@given(with_aleph, with_aleph, with_aleph)
def test_ring_laws(a, b, c):
    assert a + (b + c) == (a + b) + c
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == CountingPolynomial()


@given(plain, plain)
def test_eventual_order_total_and_matches_large_evaluation(a, b):
    lt, gt, eq = eventual_less(a, b), eventual_less(b, a), a == b
    assert lt + gt + eq == 1
    if lt:
        assert a.evaluate(BIG) < b.evaluate(BIG)


@given(with_aleph, st.integers(0, 6))
def test_estimates_are_monotone(c, k):
    up0, up1 = upper_estimate(c, k), upper_estimate(c, k + 1)
    lo0, lo1 = lower_estimate(c, k), lower_estimate(c, k + 1)
    # with nonnegative N0-coefficients the estimates move the right way
    if all(v >= 0 for (i, a), v in c.terms.items() if a):
        assert not eventual_less(up1, up0)
        assert not eventual_less(lo0, lo1)


@given(with_aleph, with_aleph)
def test_decide_never_equal_with_aleph(a, b):
    if a.has_aleph() or b.has_aleph():
        assert decide_sets(a, b, K=4) is not Decision.EQUAL


@given(plain)
def test_decide_is_reflexive_without_aleph(a):
    assert decide_sets(a, a) is Decision.EQUAL


exps = st.tuples(st.integers(0, 3), st.integers(0, 2)).map(lambda t: ExponentPolynomial(t))
dcps = st.dictionaries(exps, st.dictionaries(st.tuples(st.integers(0, 1), st.integers(0, 1)),
                                             small, max_size=2), max_size=3).map(
    DifferentialCountingPolynomial)


@given(dcps, dcps, st.integers(0, 6))
def test_specialisation_is_a_homomorphism(a, b, k):
    assert evaluate_at_order(a + b, k) == evaluate_at_order(a, k) + evaluate_at_order(b, k)
    assert evaluate_at_order(a * b, k) == evaluate_at_order(a, k) * evaluate_at_order(b, k)
