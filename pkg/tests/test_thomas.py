import pytest
from hypothesis import given, settings, strategies as st

from countdiff.sigma_systems import count_simple
from countdiff.textio import parse_sigma_system
from countdiff.thomas import count_constructible, decompose, verify_over_prime_field

import random

from handwritten import SYSTEMS
from split_systems import brute_force_count, random_split_system


def S(text):
    return parse_sigma_system(text)


@pytest.mark.parametrize("text,count", [
    ("vars x < y\neq x*y - 1", "oo - 1"),
    ("vars x < y\neq y^2 - x", "2*oo - 1"),
    ("vars x < y\neq 1", "0"),
    ("vars x < y", "oo^2"),
    ("vars x < y\neq (y - x)^2*(y - 1)\nineq x*y", "2*oo - 3"),
])
def test_counts(text, count):
    assert count_constructible(S(text)).render() == count


def test_inconsistent_gives_no_components():
    assert decompose(S("vars x\neq x\nineq x")).components == ()


def test_components_fully_proved_and_deterministic():
    sys_ = S("vars x < y < z\neq z^2 - x*y\nineq z - 1")
    a, b = decompose(sys_), decompose(sys_)
    assert a.components == b.components
    assert all(c.fully_proved for c in a.components)


def test_cofinite_input_rejected():
    with pytest.raises(ValueError):
        decompose(S("vars x\ncofinite x"))


@pytest.mark.parametrize("text", SYSTEMS)
def test_partition_property_handwritten(text):
    D = decompose(S(text))
    for p in (5, 7, 11):
        assert verify_over_prime_field(D, p).partition_ok


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6), st.sampled_from((5, 7, 11, 13)))
def test_split_systems_match_brute_force(seed, p):
    sys_ = random_split_system(random.Random(seed), max_vars=3)
    D = decompose(sys_)
    assert D.counting_polynomial().evaluate(p) == brute_force_count(sys_, p)
    report = verify_over_prime_field(D, p)
    assert report.partition_ok
    assert sum(count_simple(c).evaluate(p) for c in D.components) == report.input_count
