"""Differential polynomials, orderly rankings, reduction and truncated systems.

Differential polynomials are ``Polynomial`` values whose variables are
``DifferentialVariable`` (u^(j)_mu) and whose coefficients live in Q(x1..xn).
Their images under ``rho`` are polynomials in ``CoefficientVariable`` symbols
g^(j)_mu with rational coefficients; g^(j)_mu stands for the value of
d^mu u^(j) at the expansion point.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb

from .errors import (
    NotSimple,
    PoleAtExpansionPoint,
    VanishingInitialOrSeparant,
)
from .polyring import (
    Polynomial,
    Ranking,
    RationalFunction,
    coeff_diff,
    leader,
    pseudo_remainder,
    reduce_modulo,
)
from .sigma_systems import CofiniteMarker, SigmaSystem, validate_simple

__all__ = [
    "DifferentialVariable",
    "CoefficientVariable",
    "OrderlyRanking",
    "DifferentialRing",
    "CoefficientConstraints",
    "DifferentialSystem",
    "derive",
    "derive_multi",
    "ritt_reduce",
    "rho",
    "postpone",
    "janet_multiplicative",
    "principal_derivatives",
    "prolongation_plan",
    "truncation_system",
    "multi_indices",
]


def _fmt_mu(mu, bases):
    parts = []
    for name, k in zip(bases, mu):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name},{k}")
    return parts


@dataclass(frozen=True)
class DifferentialVariable:
    func: str
    j: int
    mu: tuple
    bases: tuple = field(compare=False, repr=False, default=())

    @property
    def order(self):
        return sum(self.mu)

    @property
    def key(self):
        return (1, self.j, self.mu)

    def shifted(self, i, k=1):
        mu = list(self.mu)
        mu[i] += k
        return DifferentialVariable(self.func, self.j, tuple(mu), self.bases)

    def __str__(self):
        if not any(self.mu):
            return self.func
        return "D(" + ",".join([self.func] + _fmt_mu(self.mu, self.bases)) + ")"


@dataclass(frozen=True)
class CoefficientVariable:
    func: str
    j: int
    mu: tuple
    bases: tuple = field(compare=False, repr=False, default=())

    @property
    def order(self):
        return sum(self.mu)

    @property
    def key(self):
        return (2, self.j, self.mu)

    def shifted(self, i, k=1):
        mu = list(self.mu)
        mu[i] += k
        return CoefficientVariable(self.func, self.j, tuple(mu), self.bases)

    def __str__(self):
        return "G(" + ",".join([self.func] + _fmt_mu(self.mu, self.bases)) + ")"


class OrderlyRanking:
    """Orderly ranking: total order first, then a tie-break.

    ``priority`` lists function names from greatest to smallest.  With
    ``tiebreak="function-first"`` equal orders compare by function priority,
    then by the multi-index (lexicographic, first base variable most
    significant); ``"derivative-first"`` swaps those two criteria.
    """

    TIEBREAKS = ("function-first", "derivative-first")

    def __init__(self, priority, tiebreak="function-first"):
        if tiebreak not in self.TIEBREAKS:
            raise ValueError(f"unknown tie-break {tiebreak!r}")
        self.priority = tuple(priority)
        if len(set(self.priority)) != len(self.priority):
            raise ValueError("function listed twice in the ranking")
        self.tiebreak = tiebreak
        self._prio = {f: len(self.priority) - i for i, f in enumerate(self.priority)}

    def rank(self, v):
        try:
            p = self._prio[v.func]
        except (KeyError, AttributeError):
            raise ValueError(f"{v} is not ranked by {self}") from None
        if self.tiebreak == "function-first":
            return (v.order, p, v.mu)
        return (v.order, v.mu, p)

    def less(self, a, b):
        return self.rank(a) < self.rank(b)

    def __eq__(self, other):
        return (isinstance(other, OrderlyRanking) and self.priority == other.priority
                and self.tiebreak == other.tiebreak)

    def __hash__(self):
        return hash((self.priority, self.tiebreak))

    def __repr__(self):
        return f"OrderlyRanking({'>'.join(self.priority)}, {self.tiebreak})"


def multi_indices(n, order):
    """All multi-indices in n variables with |mu| == order, lexicographically descending."""
    out = []
    for combo in combinations_with_replacement(range(n), order):
        mu = [0] * n
        for i in combo:
            mu[i] += 1
        out.append(tuple(mu))
    return sorted(set(out), reverse=True)


class DifferentialRing:
    """Functions u^(1..m), base variables x1..xn and an orderly ranking."""

    def __init__(self, funcs, bases, ranking=None):
        self.funcs = tuple(funcs)
        self.bases = tuple(bases)
        if not self.funcs:
            raise ValueError("at least one function is required")
        if not self.bases:
            raise ValueError("at least one base variable is required")
        clash = set(self.funcs) & set(self.bases)
        if clash:
            raise ValueError(f"names used both as function and base variable: {sorted(clash)}")
        self.ranking = ranking or OrderlyRanking(self.funcs)
        if set(self.ranking.priority) != set(self.funcs):
            raise ValueError("ranking must list exactly the declared functions")
        self._j = {f: i + 1 for i, f in enumerate(self.funcs)}

    @property
    def m(self):
        return len(self.funcs)

    @property
    def n(self):
        return len(self.bases)

    def func_index(self, name):
        return self._j[name]

    def var(self, func, mu=None):
        mu = tuple(mu) if mu is not None else (0,) * self.n
        if len(mu) != self.n:
            raise ValueError("multi-index length must equal the number of base variables")
        return DifferentialVariable(func, self._j[func], mu, self.bases)

    def gvar(self, func, mu=None):
        mu = tuple(mu) if mu is not None else (0,) * self.n
        return CoefficientVariable(func, self._j[func], mu, self.bases)

    def u(self, func, mu=None):
        return Polynomial.variable(self.var(func, mu))

    def g(self, func, mu=None):
        return Polynomial.variable(self.gvar(func, mu))

    def base(self, name):
        """The base variable ``name`` as a (coefficient) polynomial."""
        return Polynomial.constant(RationalFunction.variable(name, self.bases))

    def coefficient_variables(self, order):
        """All g^(j)_mu with |mu| <= order, lowest first under the ranking."""
        vs = [self.gvar(f, mu) for k in range(order + 1) for mu in multi_indices(self.n, k)
              for f in self.funcs]
        return sorted(vs, key=self.ranking.rank)

    def coefficient_ranking(self, order):
        return Ranking(self.coefficient_variables(order))

    def __eq__(self, other):
        return (isinstance(other, DifferentialRing) and self.funcs == other.funcs
                and self.bases == other.bases and self.ranking == other.ranking)

    def __hash__(self):
        return hash((self.funcs, self.bases, self.ranking))


# ---------------------------------------------------------------------------


def derive(p, i, ring):
    """Total derivative of ``p`` with respect to the i-th base variable."""
    name = ring.bases[i]
    acc = {}

    def add(mono, c):
        s = acc.get(mono)
        s = c if s is None else s + c
        if s == 0:
            acc.pop(mono, None)
        else:
            acc[mono] = s

    for mono, c in p.items():
        dc = coeff_diff(c, name)
        if dc != 0:
            add(mono, dc)
        for idx, (v, e) in enumerate(mono):
            if not isinstance(v, (DifferentialVariable, CoefficientVariable)):
                continue
            w = v.shifted(i)
            d = dict(mono)
            if e == 1:
                del d[v]
            else:
                d[v] = e - 1
            d[w] = d.get(w, 0) + 1
            new = tuple(sorted(d.items(), key=lambda ve: ve[0].key))
            add(new, c * e)
    return Polynomial(acc)


def derive_multi(p, alpha, ring):
    for i, k in enumerate(alpha):
        for _ in range(k):
            p = derive(p, i, ring)
    return p


def _is_derivative_of(w, v):
    """alpha with w = d^alpha v, or None."""
    if not isinstance(w, DifferentialVariable) or w.j != v.j:
        return None
    alpha = tuple(a - b for a, b in zip(w.mu, v.mu))
    if any(a < 0 for a in alpha):
        return None
    return alpha


@dataclass(frozen=True)
class Reduction:
    remainder: Polynomial
    steps: tuple   # (leader reduced, multiplier polynomial, exponent)


def ritt_reduce(p, T, ring):
    """Reduce ``p`` by a triangular set ``T`` and all derivatives of its members.

    Returns a ``Reduction`` whose remainder satisfies
    (product of multipliers) * p = remainder modulo the differential ideal of T.
    """
    ranking = ring.ranking
    lead = [(t, leader(t, ranking)) for t in T if not t.is_constant()]
    r = p
    steps = []
    prolong_cache = {}
    while r:
        candidates = sorted(r.variables(), key=ranking.rank, reverse=True)
        done = True
        for w in candidates:
            for idx, (t, v) in enumerate(lead):
                alpha = _is_derivative_of(w, v)
                if alpha is None:
                    continue
                if not any(alpha):
                    if r.degree(w) < t.degree(v):
                        continue
                    red = t
                else:
                    key = (idx, alpha)
                    red = prolong_cache.get(key)
                    if red is None:
                        red = derive_multi(t, alpha, ring)
                        prolong_cache[key] = red
                pd = pseudo_remainder(r, red, w)
                steps.append((w, red.coeff(w, red.degree(w)), pd.exponent))
                r = pd.remainder
                done = False
                break
            if not done:
                break
        if done:
            break
    return Reduction(r, tuple(steps))


def _to_point(zeta, ring):
    zeta = tuple(Fraction(z) for z in zeta)
    if len(zeta) != ring.n:
        raise ValueError(f"expansion point needs {ring.n} coordinates")
    return dict(zip(ring.bases, zeta))


def rho(p, zeta, ring):
    """Image in the coefficient ring: u^(j)_mu -> g^(j)_mu, coefficients at zeta."""
    point = _to_point(zeta, ring)
    items = []
    for mono, c in p.items():
        if isinstance(c, RationalFunction):
            try:
                c = c.evaluate(point)
            except ZeroDivisionError:
                raise PoleAtExpansionPoint(
                    f"coefficient {c} has a pole at ({', '.join(map(str, point.values()))})") from None
        newmono = tuple(
            (CoefficientVariable(v.func, v.j, v.mu, v.bases) if isinstance(v, DifferentialVariable)
             else v, e)
            for v, e in mono)
        items.append((newmono, c))
    return Polynomial.from_terms(items)


def postpone(p, zeta, ring):
    """(first derivatives of p, rho(p))."""
    image = rho(p, zeta, ring)
    return tuple(derive(p, i, ring) for i in range(ring.n)), image


# ---------------------------------------------------------------------------
# prolongations and truncations


def janet_multiplicative(indices):
    """Janet multiplicative variables (as index sets) for a finite set of multi-indices.

    Classes are formed from the last variable backwards: x_i is multiplicative
    for mu when mu_i is maximal among the elements sharing mu_{i+1..n}.
    """
    indices = list(dict.fromkeys(tuple(m) for m in indices))
    if not indices:
        return {}
    n = len(indices[0])
    mult = {mu: set() for mu in indices}
    for i in range(n):
        classes = {}
        for mu in indices:
            classes.setdefault(mu[i + 1:], []).append(mu)
        for members in classes.values():
            top = max(mu[i] for mu in members)
            for mu in members:
                if mu[i] == top:
                    mult[mu].add(i)
    return {mu: frozenset(s) for mu, s in mult.items()}


def _leq(a, b):
    return all(x <= y for x, y in zip(a, b))


def principal_derivatives(leaders_by_func, ring, order):
    """Sorted list of principal DifferentialVariables of order <= ``order``."""
    out = []
    for f in ring.funcs:
        lead = leaders_by_func.get(f, ())
        for k in range(order + 1):
            for mu in multi_indices(ring.n, k):
                if any(_leq(nu, mu) for nu in lead):
                    out.append(ring.var(f, mu))
    return sorted(out, key=ring.ranking.rank)


def prolongation_plan(leaders_by_func, theta):
    """(nu, alpha) with theta = nu + alpha chosen through Janet cones.

    Falls back to the divisor of largest order (then lexicographically largest)
    when theta lies outside every Janet cone.
    """
    lead = leaders_by_func.get(theta.func, ())
    mult = janet_multiplicative(lead)
    mu = theta.mu
    for nu in sorted(lead, key=lambda x: (sum(x), x), reverse=True):
        if _leq(nu, mu):
            alpha = tuple(a - b for a, b in zip(mu, nu))
            if all(a == 0 or i in mult[nu] for i, a in enumerate(alpha)):
                return nu, alpha, True
    divisors = [nu for nu in lead if _leq(nu, mu)]
    if not divisors:
        raise ValueError(f"{theta} is not principal")
    nu = max(divisors, key=lambda x: (sum(x), x))
    return nu, tuple(a - b for a, b in zip(mu, nu)), False


@dataclass(frozen=True)
class CoefficientConstraints:
    """Algebraic side conditions on power series coefficients at one order."""

    equations: tuple = ()
    inequations: tuple = ()
    cofinite: tuple = ()


@dataclass(frozen=True)
class DifferentialSystem:
    """Differential equations plus optional order-dependent coefficient constraints.

    ``constraints`` maps an order l to a ``CoefficientConstraints``; it may be
    None.  Constraint polynomials are already coefficient polynomials (rho
    applied at the system's expansion point).
    """

    ring: DifferentialRing
    equations: tuple
    point: tuple = None
    constraints: object = None
    name: str = ""

    def leaders(self):
        return [leader(p, self.ring.ranking) for p in self.equations]

    def leaders_by_func(self):
        out = {}
        for v in self.leaders():
            out.setdefault(v.func, []).append(v.mu)
        return {f: tuple(sorted(set(m))) for f, m in out.items()}

    def constraints_at(self, order):
        if self.constraints is None:
            return CoefficientConstraints()
        if isinstance(self.constraints, CoefficientConstraints):
            return self.constraints
        return self.constraints(order)


def check_triangular(system):
    """Leaders pairwise distinct, none a derivative of another, nonconstant."""
    ring = system.ring
    leads = []
    for p in system.equations:
        if p.is_constant():
            raise NotSimple(f"constant equation {p}")
        if not all(isinstance(v, DifferentialVariable) for v in p.variables()):
            raise NotSimple(f"{p} is not a differential polynomial")
        leads.append(leader(p, ring.ranking))
    for a in range(len(leads)):
        for b in range(len(leads)):
            if a != b and _is_derivative_of(leads[a], leads[b]) is not None:
                raise NotSimple(f"leader {leads[a]} is a derivative of leader {leads[b]}")
    return leads


def _autoreduce(polys, ranking):
    polys = [p for p in polys if p]
    for _ in range(4 * len(polys) + 4):
        changed = False
        for i, p in enumerate(polys):
            others = [q for j, q in enumerate(polys) if j != i and not q.is_constant()]
            # never reduce by an equation sharing p's leader: that would swap roles
            if not p.is_constant():
                lv = leader(p, ranking)
                others = [q for q in others if leader(q, ranking) != lv]
            r = reduce_modulo(p, others, ranking) if others else p
            if r != p:
                polys[i] = r
                changed = True
        polys = [p for p in polys if p]
        if not changed:
            break
    return polys


class _Inconsistent(Exception):
    pass


def truncation_system(system, zeta, order, *, assume_vanishing_ok=False):
    """Algebraic simple system for the truncated power series solutions of order <= l.

    Contains rho of one prolongation per principal derivative of order <= l
    (chosen through Janet cones) together with the coefficient constraints;
    returns None when the coefficient constraints are inconsistent.
    """
    ring = system.ring
    ranking = ring.ranking
    check_triangular(system)
    leads = system.leaders()
    by_func = system.leaders_by_func()
    eq_for = {(v.func, v.mu): p for v, p in zip(leads, system.equations)}

    images = []
    cache = {}
    for theta in principal_derivatives(by_func, ring, order):
        nu, alpha, _ = prolongation_plan(by_func, theta)
        base = eq_for[(theta.func, nu)]
        key = (theta.func, nu, alpha)
        if key not in cache:
            cache[key] = derive_multi(base, alpha, ring)
        img = rho(cache[key], zeta, ring)
        target = ring.gvar(theta.func, theta.mu)
        if img.is_zero() or img.degree(target) == 0 or (
                not assume_vanishing_ok and leader(img, ranking) != target):
            raise VanishingInitialOrSeparant(
                f"image of the prolongation for {theta} does not lead with {target}")
        images.append(img)

    cons = system.constraints_at(order)
    try:
        return _assemble(ring, order, images, cons)
    except _Inconsistent:
        return None


def _assemble(ring, order, images, cons):
    ranking = ring.ranking
    coef_eqs = _autoreduce(list(cons.equations), ranking)
    for p in coef_eqs:
        if p.is_constant():
            raise _Inconsistent
    eqs = []
    for img in images:
        r = reduce_modulo(img, coef_eqs, ranking) if coef_eqs else img
        if r.is_constant():
            if r:
                raise _Inconsistent
            continue
        eqs.append(r)
    eqs.extend(coef_eqs)

    def within(p):
        return all(v.order <= order for v in p.variables())

    eqs = [p for p in eqs if within(p)]
    ineqs = []
    for q in cons.inequations:
        r = reduce_modulo(q, eqs, ranking) if eqs else q
        if r.is_zero():
            raise _Inconsistent
        if r.is_constant() or not within(r):
            continue
        ineqs.append(r)
    markers = []
    for m in cons.cofinite:
        if m.variable.order > order:
            continue
        wit = tuple(w for w in m.witnesses if within(w))
        markers.append(CofiniteMarker(m.variable, m.description, wit, m.disjoint))
    coef_ranking = ring.coefficient_ranking(order)
    S = SigmaSystem(coef_ranking, eqs, ineqs, markers)
    return validate_simple(S, warn=False)


def count_parametric(by_func, ring, order):
    """Number of non-principal derivatives of order <= l (direct enumeration)."""
    total = ring.m * comb(order + ring.n, ring.n)
    return total - len(principal_derivatives(by_func, ring, order))
