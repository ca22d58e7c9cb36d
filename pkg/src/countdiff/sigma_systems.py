"""Systems of equations and inequations, their simplicity certificates and counts.

A member ``p`` of a system is read as ``p = 0`` (equation) or ``p != 0``
(inequation).  Countably infinite inequation families on a single variable are
represented by a ``CofiniteMarker``; its ``witnesses`` are finitely many members
of the family that the certificate procedure may use as known nonzero facts.
"""

import warnings
from dataclasses import dataclass
from enum import Enum

from .counting_ring import ALEPH, INF, CountingPolynomial
from .errors import (
    ConstantMember,
    InexactDivision,
    NotWeaklyTriangular,
    UncertifiedSystem,
)
from .polyring import (
    Ranking,
    exact_divide,
    initial,
    leader,
    pseudo_remainder,
    resultant,
)

__all__ = [
    "CofiniteMarker",
    "SigmaSystem",
    "Flag",
    "SimpleSystem",
    "CertificateWarning",
    "partition_by_leader",
    "validate_simple",
    "count_simple",
    "nonzero_on_solutions",
]

FLAG_NAMES = ("weakly_triangular", "initials_nonvanishing", "squarefree",
              "ineqs_pairwise_coprime")


class CertificateWarning(UserWarning):
    pass


@dataclass(frozen=True)
class CofiniteMarker:
    variable: object
    description: str = ""
    witnesses: tuple = ()
    disjoint: bool = False


def _member_key(ranking):
    def key(p):
        if p.is_constant():
            return (-1, p.sort_key())
        return (ranking.rank(leader(p, ranking)), p.sort_key())
    return key


class SigmaSystem:
    """Finitely many equations and inequations plus cofinite markers over a ranking."""

    def __init__(self, ranking, equations=(), inequations=(), cofinite=()):
        if not isinstance(ranking, Ranking):
            ranking = Ranking(ranking)
        self.ranking = ranking
        key = _member_key(ranking)
        for p in list(equations) + list(inequations):
            for v in p.variables():
                if v not in ranking:
                    raise ValueError(f"variable {v} is not in the ranking")
        self.equations = tuple(sorted(set(equations), key=key))
        self.inequations = tuple(sorted(set(inequations), key=key))
        for m in cofinite:
            if m.variable not in ranking:
                raise ValueError(f"cofinite marker on unknown variable {m.variable}")
        self.cofinite = tuple(sorted(cofinite, key=lambda m: ranking.rank(m.variable)))

    @property
    def variables(self):
        return self.ranking.variables

    def is_finite(self):
        return not self.cofinite

    def members(self):
        return [("eq", p) for p in self.equations] + [("ineq", p) for p in self.inequations]

    def with_members(self, equations=(), inequations=()):
        return SigmaSystem(self.ranking, self.equations + tuple(equations),
                           self.inequations + tuple(inequations), self.cofinite)

    def __eq__(self, other):
        return (isinstance(other, SigmaSystem) and self.ranking == other.ranking
                and self.equations == other.equations
                and self.inequations == other.inequations
                and self.cofinite == other.cofinite)

    def __hash__(self):
        return hash((self.ranking, self.equations, self.inequations, self.cofinite))

    def __repr__(self):
        parts = [f"{p.render(self.ranking)} = 0" for p in self.equations]
        parts += [f"{p.render(self.ranking)} != 0" for p in self.inequations]
        parts += [f"cofinite {m.variable}" for m in self.cofinite]
        return "SigmaSystem{" + ", ".join(parts) + "}"


def partition_by_leader(S):
    """Map leader -> (equations, inequations), in increasing rank order."""
    buckets = {}
    for kind, p in S.members():
        if p.is_constant():
            raise ConstantMember(f"constant member {p} in {kind}")
        v = leader(p, S.ranking)
        eqs, ineqs = buckets.setdefault(v, ([], []))
        (eqs if kind == "eq" else ineqs).append(p)
    order = sorted(buckets, key=S.ranking.rank)
    return {v: (tuple(buckets[v][0]), tuple(buckets[v][1])) for v in order}


class Flag(Enum):
    PROVED = "Proved"
    ASSUMED = "AssumedByCaller"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SimpleSystem:
    system: SigmaSystem
    certificate: dict
    warnings: tuple = ()
    origin: str = "validated"

    @property
    def fully_proved(self):
        return all(f is Flag.PROVED for f in self.certificate.values())

    @property
    def ranking(self):
        return self.system.ranking

    def level(self, v):
        """('eq', p) / ('ineq', [p, ...]) / ('cofinite', marker, [p, ...]) / ('free',)."""
        eqs = [p for p in self.system.equations if leader(p, self.ranking) == v]
        ineqs = [p for p in self.system.inequations if leader(p, self.ranking) == v]
        markers = [m for m in self.system.cofinite if m.variable == v]
        if eqs:
            return ("eq", eqs[0])
        if markers:
            return ("cofinite", markers[0], ineqs)
        if ineqs:
            return ("ineq", ineqs)
        return ("free",)

    def __eq__(self, other):
        return isinstance(other, SimpleSystem) and self.system == other.system

    def __hash__(self):
        return hash(self.system)


# ---------------------------------------------------------------------------
# the sufficient nonvanishing prover


def _strip_facts(r, facts):
    changed = True
    while changed and not r.is_constant():
        changed = False
        for f in facts:
            if f.is_constant():
                continue
            try:
                r = exact_divide(r, f)
            except InexactDivision:
                continue
            changed = True
            if r.is_constant():
                break
    return r


def nonzero_on_solutions(q, lower_equations, facts, ranking):
    """Sound test that ``q`` cannot vanish on the solutions of a lower system.

    ``lower_equations`` are equations with proved nonvanishing initials;
    ``facts`` are polynomials known to be nonzero on those solutions.  Returns
    True only when a proof was found.
    """
    eqs = sorted(lower_equations, key=lambda e: ranking.rank(leader(e, ranking)), reverse=True)

    def settled(r):
        if r.is_zero():
            return False
        if r.is_constant():
            return True
        return _strip_facts(r, facts).is_constant()

    # pseudo-reduction: multipliers are initials, which are nonzero here
    r = q
    for e in eqs:
        v = leader(e, ranking)
        if r and r.degree(v) >= e.degree(v):
            r = pseudo_remainder(r, e, v).remainder
    if r.is_zero():
        return False
    if settled(r):
        return True
    # elimination: a common zero of r and e forces Res_v(r, e) = 0
    for e in eqs:
        v = leader(e, ranking)
        if r.degree(v) == 0:
            continue
        r = resultant(r, e, v)
        if r.is_zero():
            return False
        if settled(r):
            return True
    return False


def _discriminant_like(p, v):
    d = p.degree(v)
    if d <= 1:
        return None
    return resultant(p, p.diff(v), v)


def validate_simple(S, *, warn=True):
    """Certify the simplicity conditions of ``S`` as far as the prover reaches."""
    buckets = partition_by_leader(S)
    ranking = S.ranking
    marker_vars = {}
    for m in S.cofinite:
        if m.variable in marker_vars:
            raise NotWeaklyTriangular(f"two cofinite markers on {m.variable}")
        marker_vars[m.variable] = m
    for v, (eqs, ineqs) in buckets.items():
        if len(eqs) > 1:
            raise NotWeaklyTriangular(f"{len(eqs)} equations with leader {v}")
        if eqs and ineqs:
            raise NotWeaklyTriangular(f"equation and inequation share the leader {v}")
        if eqs and v in marker_vars:
            raise NotWeaklyTriangular(f"equation and cofinite family share the leader {v}")
        if ineqs and v in marker_vars and not marker_vars[v].disjoint:
            raise NotWeaklyTriangular(
                f"finite inequations and a cofinite family on {v} are not marked disjoint")

    flags = {name: Flag.PROVED for name in FLAG_NAMES}
    notes = []
    lower_eqs = []   # equations with proved initials, below the current level
    facts = []

    def prove(q, what, flag):
        if nonzero_on_solutions(q, lower_eqs, facts, ranking):
            return True
        flags[flag] = Flag.ASSUMED
        notes.append(f"could not prove {what}")
        return False

    for v in ranking:
        eqs, ineqs = buckets.get(v, ((), ()))
        new_eqs, new_facts = [], []
        marker = marker_vars.get(v)
        if marker is not None:
            new_facts.extend(w for w in marker.witnesses if not w.is_constant())
        for p in eqs + ineqs:
            ini = initial(p, ranking)
            rp = p.render(ranking)
            ok = prove(ini, f"initial of {rp} is nonzero", "initials_nonvanishing")
            if ok and not ini.is_constant():
                new_facts.append(ini)
            disc = _discriminant_like(p, v)
            if disc is not None:
                prove(disc, f"{rp} is square-free", "squarefree")
            if p in eqs and ok:
                new_eqs.append(p)
        for i in range(len(ineqs)):
            for j in range(i + 1, len(ineqs)):
                res = resultant(ineqs[i], ineqs[j], v)
                prove(res, f"{ineqs[i].render(ranking)} and {ineqs[j].render(ranking)} "
                           "are coprime", "ineqs_pairwise_coprime")
        for q in ineqs:
            new_facts.append(q)
        lower_eqs.extend(new_eqs)
        facts.extend(new_facts)

    if warn:
        for n in notes:
            warnings.warn(n, CertificateWarning, stacklevel=2)
    return SimpleSystem(S, flags, tuple(notes))


def count_simple(T, *, trust_assumed=False):
    """Product over the variables of the fiber sizes of a simple system."""
    if not trust_assumed and not T.fully_proved:
        bad = [k for k, f in T.certificate.items() if f is not Flag.PROVED]
        raise UncertifiedSystem("unproved certificate flags: " + ", ".join(bad))
    result = CountingPolynomial.constant(1)
    for v in T.ranking:
        lvl = T.level(v)
        if lvl[0] == "eq":
            tau = CountingPolynomial.constant(lvl[1].degree(v))
        elif lvl[0] == "ineq":
            tau = INF - sum(p.degree(v) for p in lvl[1])
        elif lvl[0] == "cofinite":
            tau = INF - ALEPH - sum(p.degree(v) for p in lvl[2])
        else:
            tau = INF
        result = result * tau
    return result
