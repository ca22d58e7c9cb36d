"""Random split triangular systems and a brute-force point counter over F_p.

A split system has, over each variable, fibre polynomials that are products
of distinct linear factors y - a with constant roots a in 0..4.  The
structure is then hidden by scaling members and adding multiples of lower
equations, which does not change the solution set.
"""

import random
from fractions import Fraction
from itertools import product

import numpy as np

from countdiff.polyring import Polynomial, Ranking
from countdiff.sigma_systems import SigmaSystem

PRIMES = (5, 7, 11, 13, 17)
SCALARS = (1, 2, 3, -1)


def _linear_product(y, roots):
    out = Polynomial.constant(1)
    for a in roots:
        out = out * (y - a)
    return out


def random_split_system(rng, max_vars=4, max_factors=3):
    n = rng.randint(1, max_vars)
    ranking = Ranking.from_names([f"y{i}" for i in range(1, n + 1)])
    ys = [Polynomial.variable(v) for v in ranking]
    eqs, ineqs = [], []
    for i, y in enumerate(ys):
        kind = rng.choice(("eq", "eq", "ineq", "free", "both"))
        k = rng.randint(1, max_factors)
        roots = rng.sample(range(5), k)
        if kind in ("eq", "both"):
            eqs.append(_linear_product(y, roots))
        if kind in ("ineq", "both"):
            rest = [a for a in range(5) if a not in roots] if kind == "both" else list(range(5))
            if rest:
                k2 = rng.randint(1, min(len(rest), max_factors))
                ineqs.append(_linear_product(y, rng.sample(rest, k2)))
    eqs = [p * rng.choice(SCALARS) for p in eqs]
    ineqs = [q * rng.choice(SCALARS) for q in ineqs]
    # disguise: add multiples of lower-ranked equations
    lower = sorted(eqs, key=lambda p: max(ranking.rank(v) for v in p.variables()))
    disguised = []
    for p in eqs:
        top = max(ranking.rank(v) for v in p.variables())
        for q in lower:
            if max(ranking.rank(v) for v in q.variables()) < top and rng.random() < 0.5:
                p = p + q * ys[top] * rng.choice(SCALARS)
        disguised.append(p)
    dq = []
    for q in ineqs:
        top = max(ranking.rank(v) for v in q.variables())
        for r in lower:
            if max(ranking.rank(v) for v in r.variables()) < top and rng.random() < 0.5:
                q = q + r * rng.choice(SCALARS)
        dq.append(q)
    return SigmaSystem(ranking, disguised, dq)


def split_corpus(count=100, seed=20240501):
    rng = random.Random(seed)
    return [(random_split_system(rng), rng.choice(PRIMES)) for _ in range(count)]


def _values(poly, cols, p, n):
    total = np.zeros(n, dtype=np.int64)
    for mono, c in poly.items():
        c = Fraction(c)
        term = np.full(n, c.numerator * pow(c.denominator, -1, p) % p, dtype=np.int64)
        for v, e in mono:
            term = term * pow_mod(cols[v], e, p) % p
        total = (total + term) % p
    return total


def pow_mod(col, e, p):
    out = np.ones_like(col)
    for _ in range(e):
        out = out * col % p
    return out


def brute_force_count(S, p):
    """Number of points of F_p^n satisfying all equations and inequations."""
    n = len(S.ranking)
    grid = np.array(list(product(range(p), repeat=n)), dtype=np.int64).T if n else None
    cols = {v: grid[i] for i, v in enumerate(S.ranking)} if n else {}
    size = p ** n
    mask = np.ones(size, dtype=bool)
    for q in S.equations:
        mask &= _values(q, cols, p, size) == 0 if n else _const_zero(q, p)
    for q in S.inequations:
        mask &= _values(q, cols, p, size) != 0 if n else not _const_zero(q, p)
    return int(mask.sum())


def _const_zero(q, p):
    return all(Fraction(c).numerator % p == 0 for _, c in q.items())
