import pytest
from hypothesis import given, settings, strategies as st

from countdiff.counting_ring import (
    ALEPH,
    INF,
    CountingPolynomial,
    CountingSequence,
    DifferentialCountingPolynomial,
    L_VAR,
    leading_data,
)
from countdiff.diffcount import (
    SimpleDifferentialSystem,
    Stratum,
    check_passivity,
    counting_sequence_simple,
    crosscheck_truncation,
    leading_term,
    stratified_counting,
)
from countdiff.dimension import dimension_function
from countdiff.errors import FitFailure, NotSimple
from countdiff.textio import load_differential_system, load_manifest, parse_differential_system


def build(corpus, name):
    return load_differential_system(corpus / f"{name}.dsys").build()


@pytest.mark.parametrize("name,text", [
    ("heat", "oo^(2*l + 1)"),
    ("wave", "oo^(2*l + 1)"),
    ("u1sq", "l = 0: oo\nl >= 1: 2*oo"),
    ("navier_stokes", "oo^(l^3 + 11/2*l^2 + 17/2*l + 4)"),
    ("hard_T", "l = 0: oo^2 - oo\nl >= 1: oo^3 - oo^2"),
    ("better_T", "oo^(l + 2) - oo^(l + 1)"),
])
def test_closed_formula(corpus, name, text):
    s = build(corpus, name)
    assert counting_sequence_simple(s, s.point).render() == text


def test_raw_hard_system_needs_strata(corpus):
    s = build(corpus, "hard_S")
    with pytest.raises(NotSimple):
        counting_sequence_simple(s, s.point)


def test_passivity():
    ok = parse_differential_system(
        "funcs u\nbasevars x y\nranking orderly u\neq D(u,x) - u\neq D(u,y)").build()
    bad = parse_differential_system(
        "funcs u\nbasevars x y\nranking orderly u\neq D(u,x) - y*u\neq D(u,y)").build()
    assert check_passivity(ok)[0]
    assert not check_passivity(bad)[0]
    assert SimpleDifferentialSystem.certify(bad).passivity == "conditional on passivity"


def test_navier_stokes_passive(corpus):
    assert SimpleDifferentialSystem.certify(build(corpus, "navier_stokes")).passivity == "verified"


@pytest.mark.parametrize("name,order", [("heat", 5), ("wave", 5), ("u1sq", 5),
                                        ("hard_T", 4), ("better_T", 4)])
def test_crosscheck(corpus, name, order):
    s = build(corpus, name)
    assert crosscheck_truncation(s, s.point, order).ok


def test_leading_term_consistency(corpus):
    for name in ("heat", "u1sq", "navier_stokes"):
        s = SimpleDifferentialSystem.certify(build(corpus, name), passivity=False)
        seq = counting_sequence_simple(s, s.system.point)
        for k in range(5):
            coeff, exp = leading_term(s, k)
            assert exp == dimension_function(s.leader_set(), k)
            assert leading_data(seq(k)) == (exp, coeff)
        assert not seq.tail.has_aleph()


def test_hard_strata(corpus):
    seq = stratified_counting(load_manifest(corpus / "hard_S.mf").strata())
    assert seq(0) == INF ** 2 - INF + 1
    for k in range(1, 11):
        assert seq(k) == INF ** 3 - INF ** 2 + INF - ALEPH


def test_better_strata(corpus):
    seq = stratified_counting(load_manifest(corpus / "better_S.mf").strata())
    assert seq.tail.render() == "oo^(l + 2) - oo^(l + 1) + (l + 1)*oo^l - l*oo^(l - 1)"


def test_fixed_sequence_strata_and_closed_form():
    a = Stratum(sequence=CountingSequence((), DifferentialCountingPolynomial.monomial(1, L_VAR)))
    b = Stratum(generator=lambda k: [])
    closed = DifferentialCountingPolynomial.monomial(1, L_VAR)
    assert stratified_counting([a, b], closed_form=closed).tail == closed


class _Values(Stratum):
    """A stratum whose per-order counts come from a plain function."""

    def __init__(self, fn):
        super().__init__(generator=fn, name="values")

    def count(self, order):
        return self.generator(order)


def test_fit_failure_is_reported():
    # 2^l is not an exponent polynomial of degree 1
    growing = _Values(lambda k: CountingPolynomial.constant(2 ** k))
    with pytest.raises(FitFailure):
        stratified_counting([growing], max_start=3)


@settings(max_examples=25)
@given(st.integers(0, 3), st.integers(1, 3))
def test_fit_recovers_monomials(a, c):
    target = DifferentialCountingPolynomial.monomial(c, L_VAR * 2 + a)
    s = Stratum(sequence=CountingSequence((), target))
    assert stratified_counting([s]).tail == target
