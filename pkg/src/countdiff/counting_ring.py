"""Counting polynomials in Z[oo, N0] and their order-dependent generalisation.

``CountingPolynomial`` stores ``{(oo_exp, N0_exp): int}``.  A
``DifferentialCountingPolynomial`` stores, per exponent polynomial E(l), a
coefficient in Q[l, N0]; evaluating at a fixed order gives a
``CountingPolynomial``.  ``CountingSequence`` pairs a finite prefix with such a
tail valid from a stabilisation order on.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import zip_longest

from .errors import HasAleph, NegativeExponent, NotIntegerValued, ZeroPolynomial

__all__ = [
    "CountingPolynomial",
    "ExponentPolynomial",
    "DifferentialCountingPolynomial",
    "CountingSequence",
    "Decision",
    "INF",
    "ALEPH",
    "evaluate_at_order",
    "eventual_less",
    "upper_estimate",
    "lower_estimate",
    "estimate_witness",
    "decide_sets",
    "decide_sequences",
    "sum_sequences",
    "leading_data",
]


def _fmt_q(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _power(sym, e):
    return sym if e == 1 else f"{sym}^{e}"


def _join(parts):
    """parts: list of (negative, body)."""
    if not parts:
        return "0"
    out = []
    for i, (neg, body) in enumerate(parts):
        if i == 0:
            out.append("-" + body if neg else body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def _monomial_parts(coeff, factors):
    """(negative, body) for coeff * product(factors) with factors already rendered."""
    neg = coeff < 0
    a = -coeff if neg else coeff
    if not factors:
        return neg, _fmt_q(a)
    body = "*".join(factors)
    return neg, body if a == 1 else f"{_fmt_q(a)}*{body}"


# ---------------------------------------------------------------------------


class CountingPolynomial:
    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for (i, a), c in (terms or {}).items():
            if i < 0 or a < 0:
                raise NegativeExponent("counting polynomial exponents must be nonnegative")
            if c != 0:
                if Fraction(c).denominator != 1:
                    raise NotIntegerValued(f"non-integer coefficient {c}")
                clean[(int(i), int(a))] = int(c)
        self._terms = clean

    @classmethod
    def constant(cls, c):
        return cls({(0, 0): c})

    @property
    def terms(self):
        return dict(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def _lift(self, other):
        if isinstance(other, CountingPolynomial):
            return other
        if isinstance(other, int):
            return CountingPolynomial.constant(other)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return CountingPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return CountingPolynomial({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        out = {}
        for (i1, a1), c1 in self._terms.items():
            for (i2, a2), c2 in other._terms.items():
                k = (i1 + i2, a1 + a2)
                out[k] = out.get(k, 0) + c1 * c2
        return CountingPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        result = CountingPolynomial.constant(1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def has_aleph(self):
        return any(a for (_, a) in self._terms)

    def degree(self):
        if not self._terms:
            raise ZeroPolynomial("the zero counting polynomial has no degree")
        return max(i for i, _ in self._terms)

    def leading_coefficient(self):
        """Coefficient of the top oo-power, as ``{N0_exp: int}``."""
        d = self.degree()
        return {a: c for (i, a), c in self._terms.items() if i == d}

    def substitute_aleph(self, value):
        """Replace N0 by a counting polynomial (or an int)."""
        value = self._lift(value)
        out = CountingPolynomial()
        for (i, a), c in self._terms.items():
            out = out + CountingPolynomial({(i, 0): c}) * value ** a
        return out

    def evaluate(self, inf, aleph=None):
        total = 0
        for (i, a), c in self._terms.items():
            if a and aleph is None:
                raise HasAleph("a value for N0 is required")
            total += c * inf ** i * (aleph ** a if a else 1)
        return total

    def ordered_terms(self):
        return sorted(self._terms.items(), reverse=True)

    def render(self):
        parts = []
        for (i, a), c in self.ordered_terms():
            factors = []
            if i:
                factors.append(_power("oo", i))
            if a:
                factors.append(_power("N0", a))
            parts.append(_monomial_parts(c, factors))
        return _join(parts)

    __str__ = render

    def __repr__(self):
        return f"CountingPolynomial({self.render()})"

    def to_structured(self):
        return [{"oo": i, "N0": a, "coeff": str(c)} for (i, a), c in self.ordered_terms()]


INF = CountingPolynomial({(1, 0): 1})
ALEPH = CountingPolynomial({(0, 1): 1})


def leading_data(c):
    """(oo-degree, leading coefficient in Z[N0]); a plain int when N0-free."""
    lc = c.leading_coefficient()
    if set(lc) == {0}:
        return c.degree(), lc[0]
    return c.degree(), lc


# ---------------------------------------------------------------------------


class ExponentPolynomial:
    """Integer-valued polynomial in the order l, stored as c0 + c1*l + ... ."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients=(), *, check=True):
        cs = [Fraction(c) for c in coefficients]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coefficients = tuple(cs)
        if check:
            for x in range(len(cs)):
                v = self(x)
                if v.denominator != 1:
                    raise NotIntegerValued(f"{self.render()} is not integer at l={x}")

    @classmethod
    def constant(cls, c):
        return cls((c,))

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def is_constant(self):
        return len(self.coefficients) <= 1

    def constant_value(self):
        return self.coefficients[0] if self.coefficients else Fraction(0)

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        if not isinstance(other, ExponentPolynomial):
            other = ExponentPolynomial((other,), check=False)
        return ExponentPolynomial(
            [a + b for a, b in zip_longest(self.coefficients, other.coefficients, fillvalue=0)],
            check=False,
        )

    __radd__ = __add__

    def __neg__(self):
        return ExponentPolynomial([-c for c in self.coefficients], check=False)

    def __sub__(self, other):
        if not isinstance(other, ExponentPolynomial):
            other = ExponentPolynomial((other,), check=False)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, ExponentPolynomial):
            other = ExponentPolynomial((other,), check=False)
        if not self.coefficients or not other.coefficients:
            return ExponentPolynomial()
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return ExponentPolynomial(out, check=False)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, ExponentPolynomial):
            return self.coefficients == other.coefficients
        if isinstance(other, (int, Fraction)):
            return self.coefficients == ExponentPolynomial.constant(other).coefficients
        return NotImplemented

    def __hash__(self):
        return hash(self.coefficients)

    def eventual_key(self):
        """Sort key: larger key means eventually larger values."""
        d = max(self.degree, 0)
        padded = list(self.coefficients) + [Fraction(0)] * (d + 1 - len(self.coefficients))
        return (self.degree if self.coefficients else -1, tuple(reversed(padded)))

    def eventually_less(self, other):
        diff = other - self
        return bool(diff.coefficients) and diff.coefficients[-1] > 0

    def render(self):
        parts = []
        for k in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[k]
            if c:
                parts.append(_monomial_parts(c, [_power("l", k)] if k else []))
        return _join(parts)

    __str__ = render

    def __repr__(self):
        return f"ExponentPolynomial({self.render()})"

    def to_structured(self):
        return [_fmt_q(c) for c in self.coefficients]


L_VAR = ExponentPolynomial((0, 1))


def _coeff_render(coeff):
    """Parts for a Q[l, N0] coefficient ``{(l_exp, N0_exp): Fraction}``."""
    parts = []
    for (k, a), c in sorted(coeff.items(), key=lambda t: (t[0][1], t[0][0]), reverse=True):
        factors = []
        if k:
            factors.append(_power("l", k))
        if a:
            factors.append(_power("N0", a))
        parts.append(_monomial_parts(c, factors))
    return parts


class DifferentialCountingPolynomial:
    """Sum of c_i(l, N0) * oo^(E_i(l)) with pairwise distinct exponents."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for e, coeff in (terms or {}).items():
            if not isinstance(e, ExponentPolynomial):
                e = ExponentPolynomial.constant(e)
            cc = {}
            for (k, a), c in coeff.items():
                c = Fraction(c)
                if c:
                    cc[(int(k), int(a))] = cc.get((int(k), int(a)), 0) + c
            cc = {m: c for m, c in cc.items() if c}
            if cc:
                prev = clean.get(e)
                if prev:
                    for m, c in cc.items():
                        prev[m] = prev.get(m, 0) + c
                    prev = {m: c for m, c in prev.items() if c}
                    if prev:
                        clean[e] = prev
                    else:
                        del clean[e]
                else:
                    clean[e] = cc
        self._terms = clean

    @classmethod
    def from_counting_polynomial(cls, p):
        out = {}
        for (i, a), c in p.terms.items():
            out.setdefault(ExponentPolynomial.constant(i), {})[(0, a)] = c
        return cls(out)

    @classmethod
    def monomial(cls, coeff, exponent):
        """coeff: int/Fraction or ``{(l_exp, N0_exp): c}``; exponent: ExponentPolynomial."""
        if not isinstance(coeff, dict):
            coeff = {(0, 0): coeff}
        return cls({exponent: coeff})

    @property
    def terms(self):
        return {e: dict(c) for e, c in self._terms.items()}

    def __bool__(self):
        return bool(self._terms)

    def _lift(self, other):
        if isinstance(other, DifferentialCountingPolynomial):
            return other
        if isinstance(other, CountingPolynomial):
            return DifferentialCountingPolynomial.from_counting_polynomial(other)
        if isinstance(other, (int, Fraction)):
            return DifferentialCountingPolynomial.monomial(other, ExponentPolynomial())
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        out = {e: dict(c) for e, c in self._terms.items()}
        for e, c in other._terms.items():
            tgt = out.setdefault(e, {})
            for m, v in c.items():
                tgt[m] = tgt.get(m, 0) + v
        return DifferentialCountingPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return DifferentialCountingPolynomial(
            {e: {m: -v for m, v in c.items()} for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                tgt = out.setdefault(e1 + e2, {})
                for (k1, a1), v1 in c1.items():
                    for (k2, a2), v2 in c2.items():
                        m = (k1 + k2, a1 + a2)
                        tgt[m] = tgt.get(m, 0) + v1 * v2
        return DifferentialCountingPolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset((e, frozenset(c.items())) for e, c in self._terms.items()))

    def has_aleph(self):
        return any(a for c in self._terms.values() for (_, a) in c)

    def ordered_terms(self):
        return sorted(self._terms.items(), key=lambda t: t[0].eventual_key(), reverse=True)

    def render(self):
        parts = []
        for e, coeff in self.ordered_terms():
            if e.is_constant():
                ev = int(e.constant_value())
                oo = [_power("oo", ev)] if ev else []
            elif e.coefficients == (0, 1):
                oo = ["oo^l"]
            else:
                oo = [f"oo^({e.render()})"]
            cparts = _coeff_render(coeff)
            if not oo:
                parts.extend(cparts)
                continue
            if len(cparts) == 1:
                neg, body = cparts[0]
                parts.append((neg, oo[0] if body == "1" else f"{body}*{oo[0]}"))
            else:
                neg = cparts[0][0]
                if neg:
                    cparts = [(not n, b) for n, b in cparts]
                parts.append((neg, f"({_join(cparts)})*{oo[0]}"))
        return _join(parts)

    __str__ = render

    def __repr__(self):
        return f"DifferentialCountingPolynomial({self.render()})"

    def to_structured(self):
        return [
            {
                "exponent": e.to_structured(),
                "coeff": [{"l": k, "N0": a, "value": _fmt_q(v)}
                          for (k, a), v in sorted(c.items(), reverse=True)],
            }
            for e, c in self.ordered_terms()
        ]


def evaluate_at_order(d, order):
    """Specialise l to ``order``; N0 stays symbolic."""
    if isinstance(d, CountingPolynomial):
        return d
    out = {}
    for e, coeff in d.terms.items():
        byaleph = {}
        for (k, a), c in coeff.items():
            byaleph[a] = byaleph.get(a, 0) + c * Fraction(order) ** k
        byaleph = {a: c for a, c in byaleph.items() if c}
        if not byaleph:
            continue
        ev = e(order)
        if ev < 0:
            raise NegativeExponent(f"exponent {e} is negative at l={order}")
        if ev.denominator != 1:
            raise NotIntegerValued(f"exponent {e} is not integral at l={order}")
        for a, c in byaleph.items():
            if c.denominator != 1:
                raise NotIntegerValued(f"coefficient not integral at l={order}")
            key = (int(ev), a)
            out[key] = out.get(key, 0) + int(c)
    return CountingPolynomial(out)


# ---------------------------------------------------------------------------


def eventual_less(q1, q2):
    if q1.has_aleph() or q2.has_aleph():
        raise HasAleph("eventual order is only defined without N0")
    diff = q2 - q1
    if not diff:
        return False
    return diff.leading_coefficient()[0] > 0


def upper_estimate(p, k):
    """N0 -> k: the excluded countable set shrunk to k points."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return p.substitute_aleph(k)


def lower_estimate(p, k):
    """N0 -> oo - k: the excluded countable set enlarged to all but k points."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return p.substitute_aleph(INF - k)


class Decision(Enum):
    EQUAL = "Equal"
    DISTINCT = "Distinct"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


def estimate_witness(c1, c2, K=32):
    """Smallest (k1, k2) (by k1+k2, then k1) with upper(c1,k1) < lower(c2,k2)."""
    for s in range(2 * K + 1):
        for k1 in range(max(0, s - K), min(s, K) + 1):
            k2 = s - k1
            if eventual_less(upper_estimate(c1, k1), lower_estimate(c2, k2)):
                return k1, k2
    return None


def decide_sets(c1, c2, K=32):
    """Decide Sol1 = Sol2 for Sol1 contained in Sol2, from counting polynomials."""
    if not (c1.has_aleph() or c2.has_aleph()):
        return Decision.EQUAL if c1 == c2 else Decision.DISTINCT
    if estimate_witness(c1, c2, K) is not None:
        return Decision.DISTINCT
    return Decision.UNKNOWN


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CountingSequence:
    """l -> counting polynomial; ``prefix[l]`` for l < L0, ``tail`` from L0 on."""

    prefix: tuple
    tail: DifferentialCountingPolynomial

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        if isinstance(self.tail, CountingPolynomial):
            object.__setattr__(
                self, "tail", DifferentialCountingPolynomial.from_counting_polynomial(self.tail))

    @property
    def stabilization_order(self):
        return len(self.prefix)

    def __call__(self, order):
        if order < 0:
            raise ValueError("order must be nonnegative")
        if order < len(self.prefix):
            return self.prefix[order]
        return evaluate_at_order(self.tail, order)

    def extended(self, L0):
        """Same sequence with the prefix materialised up to ``L0``."""
        if L0 <= len(self.prefix):
            return self
        return CountingSequence(
            self.prefix + tuple(self(k) for k in range(len(self.prefix), L0)), self.tail)

    def normalized(self):
        """Drop trailing prefix entries already given by the tail."""
        pre = list(self.prefix)
        while pre:
            k = len(pre) - 1
            try:
                if evaluate_at_order(self.tail, k) != pre[-1]:
                    break
            except (NegativeExponent, NotIntegerValued):
                break
            pre.pop()
        return CountingSequence(tuple(pre), self.tail)

    def has_aleph(self):
        return self.tail.has_aleph() or any(p.has_aleph() for p in self.prefix)

    def render(self):
        if not self.prefix:
            return self.tail.render()
        lines = [f"l = {k}: {p.render()}" for k, p in enumerate(self.prefix)]
        lines.append(f"l >= {len(self.prefix)}: {self.tail.render()}")
        return "\n".join(lines)

    __str__ = render

    def to_structured(self):
        return {
            "stabilization_order": len(self.prefix),
            "prefix": [p.to_structured() for p in self.prefix],
            "prefix_text": [p.render() for p in self.prefix],
            "tail": self.tail.to_structured(),
            "tail_text": self.tail.render(),
        }


def sum_sequences(*seqs):
    if not seqs:
        return CountingSequence((), DifferentialCountingPolynomial())
    L0 = max(s.stabilization_order for s in seqs)
    prefix = tuple(
        sum((s(k) for s in seqs), CountingPolynomial()) for k in range(L0))
    tail = DifferentialCountingPolynomial()
    for s in seqs:
        tail = tail + s.tail
    return CountingSequence(prefix, tail)


def decide_sequences(s1, s2, K=32, extra_orders=3):
    """Per-order decision for nested sets of truncated solutions.

    Any order with a Distinct verdict settles the question.  Equal requires
    N0-free sequences that agree on the prefix and symbolically on the tail.
    """
    L0 = max(s1.stabilization_order, s2.stabilization_order)
    for k in range(L0 + extra_orders):
        if decide_sets(s1(k), s2(k), K) is Decision.DISTINCT:
            return Decision.DISTINCT
    if s1.has_aleph() or s2.has_aleph():
        return Decision.UNKNOWN
    if s1.tail == s2.tail:
        return Decision.EQUAL
    return Decision.DISTINCT
