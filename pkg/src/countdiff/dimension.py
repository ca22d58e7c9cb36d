"""Counting parametric derivatives from a leader set.

The principal derivatives of function j are the union of the cones mu + N^n
over its leaders mu.  Their number up to order l follows from
inclusion-exclusion over componentwise maxima of leader subsets, using
#{nu >= mu, |nu| <= l} = C(l - |mu| + n, n).
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, factorial

from .counting_ring import ExponentPolynomial
from .errors import DegreeExceedsN, TooManyLeaders

MAX_LEADERS_PER_FUNCTION = 12


def _minimal(indices):
    indices = sorted(set(tuple(m) for m in indices), key=lambda m: (sum(m), m))
    keep = []
    for mu in indices:
        if not any(all(a <= b for a, b in zip(nu, mu)) for nu in keep):
            keep.append(mu)
    return tuple(sorted(keep))


@dataclass(frozen=True)
class LeaderSet:
    """Per function (1..m) the minimal multi-indices of equation leaders."""

    m: int
    n: int
    leaders: tuple   # tuple of m tuples of multi-indices

    def __init__(self, m, n, leaders=None):
        leaders = leaders or {}
        if isinstance(leaders, dict):
            rows = [leaders.get(j, ()) for j in range(1, m + 1)]
        else:
            rows = list(leaders) + [()] * (m - len(leaders))
        if len(rows) != m:
            raise ValueError("more leader rows than functions")
        for row in rows:
            for mu in row:
                if len(mu) != n or any(k < 0 for k in mu):
                    raise ValueError(f"bad multi-index {mu} for n={n}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "leaders", tuple(_minimal(row) for row in rows))

    def with_leader(self, j, mu):
        rows = [list(r) for r in self.leaders]
        rows[j - 1].append(tuple(mu))
        return LeaderSet(self.m, self.n, rows)

    def to_structured(self):
        return [{"function": j + 1, "multi_index": list(mu)}
                for j, row in enumerate(self.leaders) for mu in row]

    def _weights(self):
        """{order of lcm: signed multiplicity} aggregated over all functions."""
        w = {}
        for row in self.leaders:
            if len(row) > MAX_LEADERS_PER_FUNCTION:
                raise TooManyLeaders(
                    f"{len(row)} leaders for one function (limit {MAX_LEADERS_PER_FUNCTION})")
            for size in range(1, len(row) + 1):
                sign = 1 if size % 2 else -1
                for subset in combinations(row, size):
                    s = sum(max(col) for col in zip(*subset))
                    w[s] = w.get(s, 0) + sign
        return w

    def stabilization_order(self):
        w = self._weights()
        return max(w) if w else 0


def dimension_function(L, order):
    if order < 0:
        raise ValueError("order must be nonnegative")
    n = L.n
    total = L.m * comb(order + n, n)
    for s, c in L._weights().items():
        if order >= s:
            total -= c * comb(order - s + n, n)
    return total


def _binomial_poly(shift, n):
    """C(l - shift + n, n) as an ExponentPolynomial in l."""
    p = ExponentPolynomial((1,), check=False)
    for i in range(1, n + 1):
        p = p * ExponentPolynomial((i - shift, 1), check=False)
    return p * Fraction(1, factorial(n))


def dimension_polynomial(L):
    """(omega, L0): omega(l) equals dimension_function(L, l) for all l >= L0."""
    n = L.n
    poly = _binomial_poly(0, n) * L.m
    w = L._weights()
    for s, c in w.items():
        if c:
            poly = poly - _binomial_poly(s, n) * c
    poly = ExponentPolynomial(poly.coefficients)
    return poly, (max(w) if w else 0)


@dataclass(frozen=True)
class DifferentialInvariants:
    differential_type: int
    typical_dimension: int
    differential_dimension: int
    binomial_coefficients: tuple


def binomial_expansion(omega, n):
    """a_0..a_n with omega(l) = sum a_i C(l + i, i)."""
    if omega.degree > n:
        raise DegreeExceedsN(f"degree {omega.degree} exceeds n={n}")
    rest = ExponentPolynomial(omega.coefficients, check=False)
    a = [Fraction(0)] * (n + 1)
    for i in range(n, -1, -1):
        if rest.degree < i:
            continue
        coeff = rest.coefficients[i] * factorial(i)
        a[i] = coeff
        rest = rest - _binomial_poly(0, i) * coeff
    if rest.coefficients:
        raise ArithmeticError("binomial expansion left a remainder")
    return tuple(a)


def differential_invariants(omega, n):
    a = binomial_expansion(omega, n)
    t = max(omega.degree, 0)
    as_int = tuple(int(x) if x.denominator == 1 else x for x in a)
    return DifferentialInvariants(t, as_int[t], as_int[n], as_int)
