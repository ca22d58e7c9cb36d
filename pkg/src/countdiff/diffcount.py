"""Counting sequences of differential systems.

Two routes are offered.  For a simple differential system without inequations
the closed formula (product of leader degrees) * oo^Omega(l) applies directly.
For systems that had to be split by hand, each piece ("stratum") produces
simple algebraic systems per order l, their counts are summed, and a closed
form in l is fitted and checked on further orders.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .counting_ring import (
    INF,
    CountingPolynomial,
    CountingSequence,
    DifferentialCountingPolynomial,
    ExponentPolynomial,
    evaluate_at_order,
)
from .diffalg import (
    CoefficientConstraints,
    DifferentialSystem,
    check_triangular,
    derive,
    derive_multi,
    janet_multiplicative,
    rho,
    truncation_system,
)
from .dimension import LeaderSet, dimension_function, dimension_polynomial
from .errors import (FitFailure, NegativeExponent, NotIntegerValued, NotSimple,
                     VanishingInitialOrSeparant)
from .polyring import initial, pseudo_remainder, separant, squarefree_part
from .sigma_systems import count_simple

__all__ = [
    "SimpleDifferentialSystem",
    "counting_sequence_simple",
    "differential_counting_polynomial_simple",
    "leading_term",
    "CrosscheckReport",
    "crosscheck_truncation",
    "Stratum",
    "stratified_counting",
    "check_passivity",
    "thread_count",
]

PASSIVE = "verified"
CONDITIONAL = "conditional on passivity"
UNCHECKED = "unchecked"


def thread_count(default=1):
    raw = os.environ.get("COUNTDIFF_THREADS")
    if not raw:
        return default
    try:
        return max(1, int(raw))
    except ValueError:
        return default


def _janet_reduce(p, system, mult, cache):
    """Reduce by prolongations along multiplicative variables only."""
    ring = system.ring
    ranking = ring.ranking
    leads = system.leaders()
    r = p
    while r:
        for w in sorted(r.variables(), key=ranking.rank, reverse=True):
            hit = None
            for idx, v in enumerate(leads):
                if v.func != w.func:
                    continue
                alpha = tuple(a - b for a, b in zip(w.mu, v.mu))
                if min(alpha) < 0 or any(a and i not in mult[idx] for i, a in enumerate(alpha)):
                    continue
                if not any(alpha) and r.degree(w) < system.equations[idx].degree(v):
                    continue
                hit = (idx, alpha)
                break
            if hit is None:
                continue
            red = cache.get(hit)
            if red is None:
                red = cache[hit] = derive_multi(system.equations[hit[0]], hit[1], ring)
            r = pseudo_remainder(r, red, w).remainder
            break
        else:
            return r
    return r


def check_passivity(system):
    """Janet's criterion on first prolongations along non-multiplicative variables.

    Returns (passed, list of offending (equation index, base-variable index)).
    """
    ring = system.ring
    leads = system.leaders()
    by_func = system.leaders_by_func()
    mult = [janet_multiplicative(by_func[v.func])[v.mu] for v in leads]
    cache = {}
    failures = []
    for idx, p in enumerate(system.equations):
        for i in range(ring.n):
            if i in mult[idx]:
                continue
            if _janet_reduce(derive(p, i, ring), system, mult, cache):
                failures.append((idx, i))
    return not failures, failures


@dataclass(frozen=True)
class SimpleDifferentialSystem:
    """A triangular differential system with per-equation leader data.

    Coefficient inequations are admitted when each involves a single
    parametric coefficient variable; they multiply the free factor of that
    variable by (oo - degree).
    """

    system: DifferentialSystem
    leaders: tuple
    orders: tuple
    degrees: tuple
    passivity: str = UNCHECKED

    @classmethod
    def certify(cls, system, *, passivity=True):
        leads = check_triangular(system)
        degrees = []
        for p, v in zip(system.equations, leads):
            d = p.degree(v)
            if d < 1:
                raise NotSimple(f"{p} has degree 0 in its leader")
            degrees.append(d)
        status = UNCHECKED
        if passivity:
            ok, _ = check_passivity(system)
            status = PASSIVE if ok else CONDITIONAL
        return cls(system, tuple(leads), tuple(v.order for v in leads), tuple(degrees), status)

    @property
    def ring(self):
        return self.system.ring

    def leader_set(self):
        ring = self.ring
        rows = {}
        for v in self.leaders:
            rows.setdefault(v.j, []).append(v.mu)
        return LeaderSet(ring.m, ring.n, rows)

    def degree_product(self, order=None):
        out = 1
        for o, d in zip(self.orders, self.degrees):
            if order is None or o <= order:
                out *= d
        return out


def _check_point(S, zeta):
    ring = S.ring
    for p in S.system.equations:
        rho(p, zeta, ring)
        for what, q in (("initial", initial(p, ring.ranking)),
                        ("separant", separant(p, ring.ranking))):
            if rho(q, zeta, ring).is_zero():
                raise VanishingInitialOrSeparant(
                    f"the {what} of {p.render(ring.ranking)} vanishes identically at the point")


def _check_low_truncations(S, zeta):
    """Initials and separants must be provably nonzero on the truncated solutions.

    Checked on the truncations up to one order past the highest equation
    order, which contain the images of every equation and of its first
    prolongations.
    """
    top = max(S.orders, default=0) + 1
    for k in range(top + 1):
        T = truncation_system(S.system, zeta, k)
        if T is None:
            raise NotSimple(f"the truncation of order {k} has no solutions")
        if not T.fully_proved:
            raise NotSimple(
                f"initials or separants are not provably nonzero at order {k}; "
                "add inequations or count strata instead")


def _inequation_factors(S):
    """Degrees of admissible coefficient inequations on parametric variables."""
    cons = S.system.constraints
    if cons is None:
        return []
    if not isinstance(cons, CoefficientConstraints):
        raise NotSimple("order-dependent coefficient constraints need stratified counting")
    if cons.equations or cons.cofinite:
        raise NotSimple("coefficient equations or cofinite families need stratified counting")
    lead_set = S.leader_set()
    degs = []
    seen = set()
    for q in cons.inequations:
        vs = q.variables()
        if len(vs) != 1:
            raise NotSimple(f"inequation {q} involves several coefficients")
        (g,) = vs
        if g in seen:
            raise NotSimple(f"two inequations on {g}")
        seen.add(g)
        row = lead_set.leaders[g.j - 1]
        if any(all(a <= b for a, b in zip(nu, g.mu)) for nu in row):
            raise NotSimple(f"inequation on the principal coefficient {g}")
        degs.append((g.order, squarefree_part(q, g).degree(g)))
    return degs


def _value_at(S, ineq, order):
    omega = dimension_function(S.leader_set(), order)
    base = INF ** 0
    k = 0
    for o, d in ineq:
        if o <= order:
            base = base * (INF - d)
            k += 1
    return CountingPolynomial.constant(S.degree_product(order)) * base * INF ** (omega - k)


def counting_sequence_simple(S, zeta):
    if not isinstance(S, SimpleDifferentialSystem):
        S = SimpleDifferentialSystem.certify(S, passivity=False)
    _check_point(S, zeta)
    ineq = _inequation_factors(S)
    _check_low_truncations(S, zeta)
    omega, L0 = dimension_polynomial(S.leader_set())
    start = max([L0] + list(S.orders) + [o for o, _ in ineq])
    tail = _augmented_tail(S.degree_product(), omega, [d for _, d in ineq])
    prefix = tuple(_value_at(S, ineq, k) for k in range(start))
    return CountingSequence(prefix, tail).normalized()


def _augmented_tail(coeff, omega, degrees):
    """coeff * prod(oo - d) * oo^(omega - len(degrees)) as a DCP."""
    poly = CountingPolynomial.constant(coeff)
    for d in degrees:
        poly = poly * (INF - d)
    k = len(degrees)
    terms = {}
    for (i, a), c in poly.terms.items():
        terms[omega + (i - k)] = {(0, a): c}
    return DifferentialCountingPolynomial(terms)


def differential_counting_polynomial_simple(S, zeta):
    return counting_sequence_simple(S, zeta).tail


def leading_term(S, order):
    """(product of degrees of equations of order <= l, Omega(l))."""
    if not isinstance(S, SimpleDifferentialSystem):
        S = SimpleDifferentialSystem.certify(S, passivity=False)
    return S.degree_product(order), dimension_function(S.leader_set(), order)


@dataclass(frozen=True)
class CrosscheckReport:
    rows: tuple   # (order, expected, truncated count)

    @property
    def ok(self):
        return all(e == g for _, e, g in self.rows)

    @property
    def first_mismatch(self):
        for row in self.rows:
            if row[1] != row[2]:
                return row
        return None


def _count_or_zero(T):
    return CountingPolynomial() if T is None else count_simple(T)


def crosscheck_truncation(S, zeta, max_order):
    if not isinstance(S, SimpleDifferentialSystem):
        S = SimpleDifferentialSystem.certify(S, passivity=False)
    seq = counting_sequence_simple(S, zeta)
    rows = []
    for k in range(max_order + 1):
        got = _count_or_zero(truncation_system(S.system, zeta, k))
        rows.append((k, seq(k), got))
    return CrosscheckReport(tuple(rows))


# ---------------------------------------------------------------------------
# strata


@dataclass(frozen=True)
class Stratum:
    """One piece of a disjoint union of truncated solution sets.

    Either ``generator`` maps an order l to a list of simple algebraic systems
    (None entries count as empty), or ``sequence`` gives the counts directly.
    """

    generator: object = None
    sequence: CountingSequence = None
    name: str = ""

    def __post_init__(self):
        if (self.generator is None) == (self.sequence is None):
            raise ValueError("a stratum needs exactly one of generator or sequence")

    @classmethod
    def from_system(cls, system, zeta, name=""):
        return cls(generator=lambda k: [truncation_system(system, zeta, k)],
                   name=name or system.name)

    @classmethod
    def family(cls, make_system, index_range, zeta, name=""):
        """Systems ``make_system(i, l)`` for i in ``index_range(l)``."""
        def gen(k):
            return [truncation_system(make_system(i, k), zeta, k) for i in index_range(k)]
        return cls(generator=gen, name=name)

    def count(self, order):
        if self.sequence is not None:
            return self.sequence(order)
        total = CountingPolynomial()
        for T in self.generator(order):
            total = total + _count_or_zero(T)
        return total


def _interpolate(xs, ys):
    """Coefficients (low to high) of the interpolating polynomial, exact."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xs[j] * basis[k + 1]
            denom *= xs[i] - xs[j]
        for k in range(n):
            coeffs[k] += Fraction(ys[i]) * basis[k] / denom
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _shape(value):
    """Terms of a counting polynomial grouped by oo-exponent, highest first."""
    groups = {}
    for (i, a), c in value.terms.items():
        groups.setdefault(i, {})[a] = c
    return [(i, groups[i]) for i in sorted(groups, reverse=True)]


def _fit(values, start, degree):
    """Try to express values[start:] as a DCP by matching terms by rank."""
    orders = list(range(start, start + degree + 2))
    shapes = [_shape(values[k]) for k in orders]
    if len({len(s) for s in shapes}) != 1:
        return None
    terms = {}
    for idx in range(len(shapes[0])):
        exps = [s[idx][0] for s in shapes]
        ecoef = _interpolate(orders, exps)
        if len(ecoef) - 1 > degree:
            return None
        alephs = sorted({a for s in shapes for a in s[idx][1]})
        coeff = {}
        for a in alephs:
            cs = [s[idx][1].get(a, 0) for s in shapes]
            cc = _interpolate(orders, cs)
            if len(cc) - 1 > degree:
                return None
            for k, c in enumerate(cc):
                if c:
                    coeff[(k, a)] = c
        try:
            e = ExponentPolynomial(ecoef)
        except NotIntegerValued:
            return None
        if e in terms:
            return None
        terms[e] = coeff
    return DifferentialCountingPolynomial(terms)


def _matches(dcp, values, orders):
    for k in orders:
        try:
            if evaluate_at_order(dcp, k) != values[k]:
                return False
        except (NegativeExponent, NotIntegerValued):
            return False
    return True


@dataclass
class _Values:
    strata: list
    threads: int
    cache: dict = field(default_factory=dict)

    def ensure(self, upto):
        todo = [k for k in range(upto + 1) if k not in self.cache]
        if not todo:
            return
        def one(k):
            total = CountingPolynomial()
            for s in self.strata:
                total = total + s.count(k)
            return k, total
        if self.threads > 1 and len(todo) > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                results = list(pool.map(one, todo))
        else:
            results = [one(k) for k in todo]
        for k, v in results:
            self.cache[k] = v

    def __getitem__(self, k):
        self.ensure(k)
        return self.cache[k]


def stratified_counting(strata, *, degree=1, max_start=6, verify_orders=2,
                        closed_form=None, threads=None):
    """Sum strata per order and find a tail valid from some order on.

    The tail is either ``closed_form`` (checked) or fitted from orders
    L0..L0+degree+1 and then verified on ``verify_orders`` further orders.
    Raises FitFailure when no start order up to ``max_start`` works.
    """
    vals = _Values(list(strata), threads or thread_count())
    span = degree + 2 + verify_orders
    for start in range(max_start + 1):
        vals.ensure(start + span - 1)
        orders = list(range(start, start + span))
        if closed_form is not None:
            tail = closed_form
        else:
            tail = _fit(vals.cache, start, degree)
            if tail is None:
                continue
        if _matches(tail, vals.cache, orders):
            prefix = tuple(vals.cache[k] for k in range(start))
            return CountingSequence(prefix, tail).normalized()
    raise FitFailure(
        f"no closed form of degree <= {degree} stabilises by order {max_start}")
