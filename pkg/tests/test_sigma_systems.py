import warnings

import pytest

from countdiff.counting_ring import ALEPH, INF
from countdiff.errors import ConstantMember, NotWeaklyTriangular, UncertifiedSystem
from countdiff.polyring import Polynomial, Ranking
from countdiff.sigma_systems import (
    CertificateWarning,
    CofiniteMarker,
    Flag,
    SigmaSystem,
    count_simple,
    validate_simple,
)
from countdiff.textio import parse_polynomial, parse_sigma_system

R = Ranking.from_names(["x", "y"])


def P(text):
    return parse_polynomial(text, R)


def test_hyperbola_with_nonzero_x():
    T = validate_simple(SigmaSystem(R, [P("x*y - 1")], [P("x")]))
    assert T.fully_proved
    assert count_simple(T) == INF - 1


def test_split3_count():
    S = parse_sigma_system("vars y1 < y2 < y3\neq y1^2 - 1\nineq y3^2 - y3")
    assert count_simple(validate_simple(S)).render() == "2*oo^2 - 4*oo"


def test_unprovable_squarefreeness_is_flagged():
    with pytest.warns(CertificateWarning):
        T = validate_simple(SigmaSystem(R, [P("y^2 - x")]))
    assert T.certificate["squarefree"] is Flag.ASSUMED
    with pytest.raises(UncertifiedSystem):
        count_simple(T)
    assert count_simple(T, trust_assumed=True) == 2 * INF


def test_cofinite_marker_counts_aleph():
    x = R.by_name("x")
    S = SigmaSystem(R, [], [], [CofiniteMarker(x, "1/k")])
    assert count_simple(validate_simple(S)) == (INF - ALEPH) * INF


def test_disjoint_marker_with_inequation():
    x = R.by_name("x")
    S = SigmaSystem(R, [], [P("x")], [CofiniteMarker(x, "1/k", disjoint=True)])
    assert count_simple(validate_simple(S)) == (INF - ALEPH - 1) * INF
    S = SigmaSystem(R, [], [P("x")], [CofiniteMarker(x, "1/k")])
    with pytest.raises(NotWeaklyTriangular):
        validate_simple(S)


@pytest.mark.parametrize("eqs,ineqs", [
    (["y - 1", "y^2 - x"], []),
    (["y - 1"], ["y"]),
])
def test_weak_triangularity_violations(eqs, ineqs):
    with pytest.raises(NotWeaklyTriangular):
        validate_simple(SigmaSystem(R, [P(e) for e in eqs], [P(q) for q in ineqs]))


def test_constant_member_rejected():
    with pytest.raises(ConstantMember):
        validate_simple(SigmaSystem(R, [Polynomial.constant(3)]))


def test_pairwise_coprime_inequations_counted_by_sum_of_degrees():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        T = validate_simple(SigmaSystem(R, [], [P("y"), P("y - 1")]))
    assert count_simple(T) == INF * (INF - 2)
