import pytest
from hypothesis import given, strategies as st

from countdiff.diffalg import (
    DifferentialRing,
    OrderlyRanking,
    derive,
    derive_multi,
    janet_multiplicative,
    principal_derivatives,
    prolongation_plan,
    rho,
    ritt_reduce,
    truncation_system,
)
from countdiff.errors import NotSimple, PoleAtExpansionPoint, VanishingInitialOrSeparant
from countdiff.polyring import leader
from countdiff.textio import load_differential_system, parse_differential_system

HARD = "funcs u1 u2\nbasevars t\nranking orderly u1>u2\npoint 1\n"


def hard_ring():
    spec = parse_differential_system(HARD + "eq u2*D(u1,t) - u1 + 1/t\neq D(u2,t,2)")
    return spec.ring, spec.equations


def parse_in(ring, text):
    from countdiff.textio import parse_polynomial
    return parse_polynomial(text, ring)


def test_first_derivative_of_hard_equation():
    ring, (p, _) = hard_ring()
    expected = parse_in(ring, "u2*D(u1,t,2) + (D(u2,t) - 1)*D(u1,t) - 1/t^2")
    assert derive(p, 0, ring) == expected


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_reduced_higher_derivatives_follow_closed_pattern(k):
    from math import factorial
    ring, (p, q) = hard_ring()
    red = ritt_reduce(derive_multi(p, (k,), ring), [q], ring).remainder
    sign = "+" if k % 2 == 0 else "-"
    expected = parse_in(
        ring, f"u2*D(u1,t,{k + 1}) + ({k}*D(u2,t) - 1)*D(u1,t,{k}) {sign} {factorial(k)}/t^{k + 1}")
    assert red == expected


def test_rho_and_pole():
    ring, (p, _) = hard_ring()
    assert rho(p, (1,), ring).render(ring.ranking) == "G(u1,t)*G(u2) - G(u1) + 1"
    with pytest.raises(PoleAtExpansionPoint, match="pole"):
        rho(p, (0,), ring)


def test_janet_multiplicative_for_two_leaders():
    mult = janet_multiplicative([(2, 0, 0, 0), (1, 1, 0, 0)])
    assert mult[(2, 0, 0, 0)] == {0, 2, 3}
    assert mult[(1, 1, 0, 0)] == {0, 1, 2, 3}


def test_prolongation_plan_covers_each_principal_derivative_once(corpus):
    sys_ = load_differential_system(corpus / "navier_stokes.dsys").build()
    by_func = sys_.leaders_by_func()
    for theta in principal_derivatives(by_func, sys_.ring, 4):
        nu, alpha, in_cone = prolongation_plan(by_func, theta)
        assert in_cone
        assert tuple(a + b for a, b in zip(nu, alpha)) == theta.mu


def test_leader_is_derivative_of_another_rejected():
    spec = parse_differential_system(
        "funcs u\nbasevars x\nranking orderly u\npoint 0\neq D(u,x) - u\neq D(u,x,2)")
    with pytest.raises(NotSimple):
        truncation_system(spec.build(), (0,), 2)


def test_vanishing_initial_detected():
    spec = parse_differential_system(
        "funcs u\nbasevars t\nranking orderly u\npoint 0\neq t*D(u,t) - u")
    with pytest.raises(VanishingInitialOrSeparant):
        truncation_system(spec.build(), (0,), 1)


@pytest.mark.parametrize("name,order", [("heat", 3), ("wave", 3), ("navier_stokes", 2)])
def test_truncation_leaders_are_images_of_principal_derivatives(corpus, name, order):
    sys_ = load_differential_system(corpus / f"{name}.dsys").build()
    ring = sys_.ring
    T = truncation_system(sys_, sys_.point, order)
    leads = sorted((leader(p, T.ranking) for p in T.system.equations), key=str)
    expected = sorted((ring.gvar(v.func, v.mu) for v in
                       principal_derivatives(sys_.leaders_by_func(), ring, order)), key=str)
    assert leads == expected


# --- ranking axioms -----------------------------------------------------------

mus = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
funcs = st.sampled_from(["u", "v", "w"])


@pytest.mark.parametrize("tiebreak", OrderlyRanking.TIEBREAKS)
@given(a=st.tuples(funcs, mus), b=st.tuples(funcs, mus), i=st.integers(0, 2))
def test_ranking_axioms(tiebreak, a, b, i):
    ring = DifferentialRing(["u", "v", "w"], ["x", "y", "z"], OrderlyRanking(["u", "v", "w"], tiebreak))
    r = ring.ranking
    va, vb = ring.var(*a), ring.var(*b)
    if r.less(va, vb):
        assert r.less(va.shifted(i), vb.shifted(i))
    if va.order < vb.order:
        assert r.less(va, vb)
    assert r.less(va, va.shifted(i))
