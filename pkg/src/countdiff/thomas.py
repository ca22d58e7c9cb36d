"""Decomposition of finite systems into simple systems with disjoint solution sets.

The recursion works bottom-up over the ranking.  The part of a system below
level ``k`` is decomposed first; over each resulting simple chain the members
with leader ``y_k`` are then made simple.  Whenever a polynomial in the lower
variables (an initial, a principal subresultant coefficient) has to be known
nonzero, the chain is split by decomposing it together with ``q = 0`` and with
``q != 0``; either part may turn out empty, in which case no split happens.

Components are simple by construction and carry fully proved certificates.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CoefficientNotReducible
from .polyring import (
    Polynomial,
    RationalFunction,
    leader,
    primitive_part,
    principal_subresultant_coefficient,
    pseudo_remainder,
    rational_primitive,
    reduce_modulo,
    subresultant,
)
from .sigma_systems import (
    FLAG_NAMES,
    Flag,
    SigmaSystem,
    SimpleSystem,
    count_simple,
    nonzero_on_solutions,
)
from .counting_ring import CountingPolynomial

__all__ = [
    "Decomposition",
    "decompose",
    "count_constructible",
    "FieldReport",
    "verify_over_prime_field",
]


@dataclass(frozen=True)
class Decomposition:
    input: SigmaSystem
    components: tuple
    log: tuple = ()

    def counting_polynomial(self):
        return sum((count_simple(c) for c in self.components), CountingPolynomial())


def _kind_key(entry):
    if entry is None:
        return (0,)
    kind, p = entry
    return (1 if kind == "ineq" else 2, p.sort_key())


class _Decomposer:
    def __init__(self, ranking):
        self.ranking = ranking
        self.vars = ranking.variables
        self._memo_dec = {}
        self._memo_fib = {}
        self.log = []

    # chains are tuples of per-level entries: None, ("eq", p) or ("ineq", p)

    @staticmethod
    def _eqs(chain):
        return [e[1] for e in chain if e is not None and e[0] == "eq"]

    @staticmethod
    def _ineqs(chain):
        return [e[1] for e in chain if e is not None and e[0] == "ineq"]

    def _level(self, p):
        if p.is_constant():
            return -1
        return self.ranking.rank(leader(p, self.ranking))

    def decompose(self, E, N, k):
        key = (frozenset(E), frozenset(N), k)
        hit = self._memo_dec.get(key)
        if hit is not None:
            return hit
        result = self._decompose(E, N, k)
        self._memo_dec[key] = result
        return result

    def _decompose(self, E, N, k):
        E2, N2 = [], []
        for p in E:
            if p.is_constant():
                if p:
                    return []
                continue
            E2.append(p)
        for p in N:
            if p.is_constant():
                if not p:
                    return []
                continue
            N2.append(p)
        if k == 0:
            return [()]
        top = k - 1
        lowE = [p for p in E2 if self._level(p) < top]
        lowN = [p for p in N2 if self._level(p) < top]
        topE = [p for p in E2 if self._level(p) == top]
        topN = [p for p in N2 if self._level(p) == top]
        out = []
        for chain in self.decompose(lowE, lowN, top):
            out.extend(self.fiber(chain, topE, topN))
        return out

    def fiber(self, chain, E, N):
        key = (chain, frozenset(E), frozenset(N))
        hit = self._memo_fib.get(key)
        if hit is not None:
            return hit
        result = self._fiber(chain, E, N)
        self._memo_fib[key] = result
        return result

    def _split_all(self, chains, E, N):
        out = []
        for c in chains:
            out.extend(self.fiber(c, E, N))
        return out

    def decide(self, chain, q):
        """'nonzero', 'zero', or (chains with q != 0, chains with q = 0)."""
        k = len(chain)
        eqs, ineqs = self._eqs(chain), self._ineqs(chain)
        r = reduce_modulo(q, eqs, self.ranking)
        if r.is_zero():
            return "zero"
        if r.is_constant():
            return "nonzero"
        r = rational_primitive(r)
        facts = ineqs + [e.coeff(leader(e, self.ranking), e.degree(leader(e, self.ranking)))
                         for e in eqs]
        if nonzero_on_solutions(r, eqs, facts, self.ranking):
            return "nonzero"
        zero_part = self.decompose(eqs + [r], ineqs, k)
        if not zero_part:
            return "nonzero"
        nonzero_part = self.decompose(eqs, ineqs + [r], k)
        if not nonzero_part:
            return "zero"
        self.log.append(f"split on {r.render(self.ranking)} below {self.vars[k]}")
        return nonzero_part, zero_part

    def gcd_degree(self, chain, a, b, y):
        """Degree of gcd(a, b) over every point of ``chain``, or a split."""
        db = b.degree(y)
        for j in range(db):
            psc = principal_subresultant_coefficient(a, b, y, j)
            d = self.decide(chain, psc)
            if d == "nonzero":
                return j
            if d == "zero":
                continue
            return d
        return db

    @staticmethod
    def _gcd_poly(a, b, y, j):
        return b if j == b.degree(y) else subresultant(a, b, y, j)

    def _fiber(self, chain, E, N):
        v = len(chain)
        y = self.vars[v]
        eqs = self._eqs(chain)

        E2, N2, lowE, lowN = [], [], [], []
        for p in E:
            r = rational_primitive(reduce_modulo(p, eqs, self.ranking))
            if r.is_zero():
                continue
            if r.degree(y) == 0:
                if r.is_constant():
                    return []
                lowE.append(r)
            else:
                E2.append(r)
        for p in N:
            r = rational_primitive(reduce_modulo(p, eqs, self.ranking))
            if r.is_zero():
                return []
            if r.degree(y) == 0:
                if not r.is_constant():
                    lowN.append(r)
            else:
                N2.append(r)
        if lowE or lowN:
            chains = self.decompose(eqs + lowE, self._ineqs(chain) + lowN, v)
            return self._split_all(chains, E2, N2)
        E = sorted(set(E2), key=lambda p: (p.degree(y), p.sort_key()))
        N = sorted(set(N2), key=lambda p: (p.degree(y), p.sort_key()))
        if not E and not N:
            return [chain + (None,)]

        for which, members in (("eq", E), ("ineq", N)):
            for i, p in enumerate(members):
                d = p.degree(y)
                ini = p.coeff(y, d)
                verdict = self.decide(chain, ini)
                if verdict == "nonzero":
                    continue
                if verdict == "zero":
                    reduced = p - ini * Polynomial.variable(y, d)
                    rest = members[:i] + [reduced] + members[i + 1:]
                    return self.fiber(chain, *((rest, N) if which == "eq" else (E, rest)))
                return self._split_all(verdict[0] + verdict[1], E, N)

        # every initial is nonzero over the chain, so contents are too
        E = [primitive_part(p, y) for p in E]
        N = [primitive_part(p, y) for p in N]

        if len(E) >= 2:
            E = sorted(E, key=lambda p: (p.degree(y), p.sort_key()))
            r = pseudo_remainder(E[1], E[0], y).remainder
            return self.fiber(chain, [E[0], r] + E[2:], N)

        if E:
            e = E[0]
            if e.degree(y) >= 2:
                j = self.gcd_degree(chain, e, e.diff(y), y)
                if isinstance(j, tuple):
                    return self._split_all(j[0] + j[1], E, N)
                if j > 0:
                    g = self._gcd_poly(e, e.diff(y), y, j)
                    return self.fiber(chain, [pseudo_remainder(e, g, y).quotient], N)
            if not N:
                return [chain + (("eq", e),)]
            q = N[0]
            if q.degree(y) >= e.degree(y):
                r = pseudo_remainder(q, e, y).remainder
                return self.fiber(chain, E, [r] + N[1:])
            j = self.gcd_degree(chain, e, q, y)
            if isinstance(j, tuple):
                return self._split_all(j[0] + j[1], E, N)
            if j == 0:
                return self.fiber(chain, E, N[1:])
            g = self._gcd_poly(e, q, y, j)
            return self.fiber(chain, [pseudo_remainder(e, g, y).quotient], N[1:])

        if len(N) > 1:
            prod = Polynomial.constant(1)
            for q in N:
                prod = prod * q
            return self.fiber(chain, [], [prod])
        q = N[0]
        if q.degree(y) >= 2:
            j = self.gcd_degree(chain, q, q.diff(y), y)
            if isinstance(j, tuple):
                return self._split_all(j[0] + j[1], E, N)
            if j > 0:
                g = self._gcd_poly(q, q.diff(y), y, j)
                return self.fiber(chain, [], [pseudo_remainder(q, g, y).quotient])
        return [chain + (("ineq", q),)]


def _to_simple(chain, ranking):
    eqs = [e[1] for e in chain if e is not None and e[0] == "eq"]
    ineqs = [e[1] for e in chain if e is not None and e[0] == "ineq"]
    S = SigmaSystem(ranking, eqs, ineqs)
    return SimpleSystem(S, {name: Flag.PROVED for name in FLAG_NAMES}, (), "decomposition")


def decompose(S, ranking=None):
    """Thomas decomposition of a finite system; empty iff it has no solutions."""
    if not S.is_finite():
        raise ValueError("decompose needs a finite system (no cofinite markers)")
    ranking = ranking or S.ranking
    if ranking != S.ranking:
        S = SigmaSystem(ranking, S.equations, S.inequations)
    dec = _Decomposer(ranking)
    chains = dec.decompose(list(S.equations), list(S.inequations), len(ranking))
    unique = sorted(set(chains), key=lambda c: tuple(_kind_key(e) for e in c))
    comps = tuple(_to_simple(c, ranking) for c in unique)
    return Decomposition(S, comps, tuple(dec.log))


def count_constructible(S, ranking=None):
    return decompose(S, ranking).counting_polynomial()


# ---------------------------------------------------------------------------
# exhaustive check over a prime field


@dataclass(frozen=True)
class FieldReport:
    prime: int
    input_count: int
    component_counts: tuple
    uncovered: int
    overlapping: int
    extraneous: int

    @property
    def partition_ok(self):
        return self.uncovered == 0 and self.overlapping == 0 and self.extraneous == 0

    @property
    def covered_count(self):
        return self.input_count - self.uncovered


def _coeff_mod(c, p):
    if isinstance(c, RationalFunction):
        raise CoefficientNotReducible("rational function coefficient")
    c = Fraction(c)
    if c.denominator % p == 0:
        raise CoefficientNotReducible(f"denominator of {c} vanishes mod {p}")
    return c.numerator * pow(c.denominator, -1, p) % p


def evaluate_mod_p(poly, grid, index, p):
    """Values of ``poly`` at all grid points (columns), reduced mod p."""
    out = np.zeros(grid.shape[1], dtype=np.int64)
    for mono, c in poly.items():
        term = np.full(grid.shape[1], _coeff_mod(c, p), dtype=np.int64)
        for v, e in mono:
            col = grid[index[v]]
            powv = np.ones_like(col)
            for _ in range(e):
                powv = powv * col % p
            term = term * powv % p
        out = (out + term) % p
    return out


def solution_mask(S_eqs, S_ineqs, grid, index, p):
    mask = np.ones(grid.shape[1], dtype=bool)
    for q in S_eqs:
        mask &= evaluate_mod_p(q, grid, index, p) == 0
    for q in S_ineqs:
        mask &= evaluate_mod_p(q, grid, index, p) != 0
    return mask


def verify_over_prime_field(D, p, max_points=2_000_000):
    ranking = D.input.ranking
    n = len(ranking)
    if p ** n > max_points:
        raise ValueError(f"{p}^{n} points exceed the configured bound")
    grid = np.indices((p,) * n, dtype=np.int64).reshape(n, -1) if n else np.zeros((0, 1), np.int64)
    index = {v: i for i, v in enumerate(ranking)}
    inp = solution_mask(D.input.equations, D.input.inequations, grid, index, p)
    hits = np.zeros(grid.shape[1], dtype=np.int64)
    counts = []
    extraneous = 0
    for comp in D.components:
        m = solution_mask(comp.system.equations, comp.system.inequations, grid, index, p)
        counts.append(int(m.sum()))
        extraneous += int((m & ~inp).sum())
        hits += m
    return FieldReport(
        prime=p,
        input_count=int(inp.sum()),
        component_counts=tuple(counts),
        uncovered=int((inp & (hits == 0)).sum()),
        overlapping=int((hits > 1).sum()),
        extraneous=extraneous,
    )
