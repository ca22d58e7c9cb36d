"""Sparse multivariate polynomials with exact coefficients.

Coefficients are ``Fraction`` (the constants) or ``RationalFunction`` (elements of
Q(x1, ..., xn) for differential polynomials).  A non-constant rational function
never collapses silently: every arithmetic result that turns out constant is
returned as a ``Fraction`` so that equality and hashing stay canonical.

Variables are any hashable objects exposing a ``key`` tuple; the key fixes the
internal monomial layout only.  Rankings (``Ranking`` here, ``OrderlyRanking`` in
``diffalg``) expose ``rank(v)`` and decide leaders.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from sympy import QQ
from sympy.polys.fields import field as _sympy_field
from sympy.polys.rings import ring as _sympy_ring

from .errors import (
    ConstantInV,
    ConstantPolynomial,
    InexactDivision,
    NotReducible,
    ZeroInput,
)

__all__ = [
    "Variable",
    "Ranking",
    "RationalFunction",
    "Polynomial",
    "PseudoDivision",
    "leader",
    "initial",
    "separant",
    "pseudo_remainder",
    "subresultant",
    "subresultant_chain",
    "principal_subresultant_coefficients",
    "resultant",
    "squarefree_part",
    "exact_divide",
    "divides",
    "poly_gcd",
    "primitive_part",
    "reduce_modulo",
]


@dataclass(frozen=True)
class Variable:
    """Algebraic indeterminate; ``index`` is its position in the ranking."""

    name: str
    index: int

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable name must be nonempty")
        if self.index < 0:
            raise ValueError("variable index must be nonnegative")

    @property
    def key(self):
        return (0, self.index, self.name)

    def __str__(self):
        return self.name


class Ranking:
    """Total order y1 < y2 < ... < yn on a finite set of variables (lowest first)."""

    def __init__(self, variables):
        self.variables = tuple(variables)
        self._pos = {v: i for i, v in enumerate(self.variables)}
        if len(self._pos) != len(self.variables):
            raise ValueError("ranking lists a variable twice")
        self._names = {str(v): v for v in self.variables}

    @classmethod
    def from_names(cls, names):
        return cls(Variable(n, i) for i, n in enumerate(names))

    def rank(self, v):
        try:
            return self._pos[v]
        except KeyError:
            raise ValueError(f"variable {v} is not in the ranking") from None

    def by_name(self, name):
        return self._names[name]

    def __contains__(self, v):
        return v in self._pos

    def __iter__(self):
        return iter(self.variables)

    def __len__(self):
        return len(self.variables)

    def __eq__(self, other):
        return isinstance(other, Ranking) and self.variables == other.variables

    def __hash__(self):
        return hash(self.variables)

    def __repr__(self):
        return "Ranking(" + " < ".join(map(str, self.variables)) + ")"


def _default_rank(v):
    return v.key


def _rank_fn(ranking):
    return _default_rank if ranking is None else ranking.rank


# ---------------------------------------------------------------------------
# rational function coefficients


@lru_cache(maxsize=None)
def _frac_field(names):
    K, *_ = _sympy_field(",".join(names), QQ)
    return K


def _mpq_to_fraction(q):
    return Fraction(int(q.numerator), int(q.denominator))


def _fmt_rational(q):
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class RationalFunction:
    """Reduced quotient of polynomials in the base variables, over Q.

    Backed by sympy's sparse fraction field, which keeps numerator and
    denominator coprime.  Constant values are never stored here; see
    ``RationalFunction.wrap``.
    """

    __slots__ = ("_f", "names")

    def __init__(self, value, names):
        self._f = value
        self.names = tuple(names)

    @staticmethod
    def wrap(value, names):
        num, den = value.numer, value.denom
        if num.is_ground and den.is_ground:
            return _mpq_to_fraction(QQ.convert(num.LC) / QQ.convert(den.LC)) if num else Fraction(0)
        return RationalFunction(value, names)

    @classmethod
    def variable(cls, name, names):
        K = _frac_field(tuple(names))
        return cls(K.gens[list(names).index(name)], names)

    @property
    def numerator(self):
        return self._f.numer

    @property
    def denominator(self):
        return self._f.denom

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            if other.names != self.names:
                raise ValueError("rational functions over different base variables")
            return other._f
        if isinstance(other, (int, Fraction)):
            return self._f.field(QQ(Fraction(other).numerator, Fraction(other).denominator))
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return RationalFunction.wrap(self._f + o, self.names)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return RationalFunction.wrap(self._f - o, self.names)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return RationalFunction.wrap(o - self._f, self.names)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return RationalFunction.wrap(self._f * o, self.names)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return RationalFunction.wrap(self._f / o, self.names)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return RationalFunction.wrap(o / self._f, self.names)

    def __neg__(self):
        return RationalFunction(-self._f, self.names)

    def __pow__(self, k):
        return RationalFunction.wrap(self._f ** k, self.names)

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.names == other.names and self._f == other._f
        return False

    def __hash__(self):
        return hash((self.names, self._f))

    def __bool__(self):
        return True

    def diff(self, name):
        K = self._f.field
        return RationalFunction.wrap(self._f.diff(K.gens[self.names.index(name)]), self.names)

    def evaluate(self, point):
        """Value at ``point`` (mapping name -> Fraction); ZeroDivisionError at a pole."""
        num, den = self._f.numer, self._f.denom
        R = num.ring
        vals = [(g, QQ(Fraction(point[n]).numerator, Fraction(point[n]).denominator))
                for g, n in zip(R.gens, self.names)]
        d = _mpq_to_fraction(QQ.convert(den.evaluate(vals)))
        if d == 0:
            raise ZeroDivisionError("pole")
        return _mpq_to_fraction(QQ.convert(num.evaluate(vals))) / d

    def render(self):
        neg, body = self._render_parts()
        return "-" + body if neg else body

    def _render_parts(self):
        num, den = self._f.numer, self._f.denom
        neg = False
        if len(num.terms()) == 1 and num.LC < 0:
            neg, num = True, -num
        num_s = _fmt_sympy_poly(num, self.names)
        if len(num.terms()) > 1:
            num_s = f"({num_s})"
        if den == 1:
            return neg, num_s
        den_s = _fmt_sympy_poly(den, self.names)
        terms = den.terms()
        if len(terms) > 1 or terms[0][1] != 1:
            den_s = f"({den_s})"
        return neg, f"{num_s}/{den_s}"

    def __repr__(self):
        return f"RationalFunction({self.render()})"

    __str__ = render


def _fmt_sympy_poly(p, names):
    parts = []
    for exps, c in sorted(p.terms(), key=lambda t: t[0], reverse=True):
        c = _mpq_to_fraction(QQ.convert(c))
        mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e)
        parts.append(_join_coeff(c, mono))
    return _join_terms(parts)


def _join_coeff(c, mono):
    """(negative?, body) for a rational coefficient times a monomial string."""
    neg = c < 0
    a = -c if neg else c
    if not mono:
        return neg, _fmt_rational(a)
    if a == 1:
        return neg, mono
    return neg, f"{_fmt_rational(a)}*{mono}"


def _join_terms(parts):
    if not parts:
        return "0"
    out = []
    for i, (neg, body) in enumerate(parts):
        if i == 0:
            out.append("-" + body if neg else body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def coeff_diff(c, name):
    if isinstance(c, RationalFunction):
        return c.diff(name)
    return Fraction(0)


# ---------------------------------------------------------------------------
# polynomials


def _mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items(), key=lambda ve: ve[0].key))


def _mono_str(mono, order):
    parts = []
    for v, e in sorted(mono, key=lambda ve: order(ve[0]), reverse=True):
        parts.append(str(v) if e == 1 else f"{v}^{e}")
    return "*".join(parts)


def _as_coeff(c):
    if isinstance(c, (Fraction, RationalFunction)):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"unsupported coefficient {c!r}")


class Polynomial:
    """Immutable sparse polynomial: a map monomial -> nonzero coefficient.

    A monomial is a tuple of ``(variable, exponent)`` pairs sorted by
    ``variable.key``.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        self._terms = {} if terms is None else terms
        self._hash = None

    @classmethod
    def from_terms(cls, items):
        out = {}
        for mono, c in items:
            c = _as_coeff(c)
            mono = tuple(sorted(((v, e) for v, e in mono if e), key=lambda ve: ve[0].key))
            s = out.get(mono, 0) + c
            if s == 0:
                out.pop(mono, None)
            else:
                out[mono] = s
        return cls(out)

    @classmethod
    def constant(cls, c):
        c = _as_coeff(c)
        return cls({(): c} if c != 0 else {})

    @classmethod
    def variable(cls, v, exponent=1):
        return cls({((v, exponent),): Fraction(1)})

    @property
    def terms(self):
        return self._terms

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self):
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get((), Fraction(0))

    def variables(self):
        return frozenset(v for mono in self._terms for v, _ in mono)

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction, RationalFunction)):
            return Polynomial.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if len(other._terms) > len(self._terms):
            a, b = other._terms, self._terms
        else:
            a, b = self._terms, other._terms
        out = dict(a)
        for m, c in b.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s == 0:
                    del out[m]
                else:
                    out[m] = s
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RationalFunction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if not self._terms or not other._terms:
            return Polynomial()
        out = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                c = c1 * c2
                s = out.get(m)
                out[m] = c if s is None else s + c
        return Polynomial({m: c for m, c in out.items() if c != 0})

    def __rmul__(self, other):
        return self.__mul__(other)

    def scale(self, c):
        c = _as_coeff(c)
        if c == 0:
            return Polynomial()
        return Polynomial({m: v * c for m, v in self._terms.items()})

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            if not other.is_constant():
                return exact_divide(self, other)
            other = other.constant_value()
        if not isinstance(other, (int, Fraction, RationalFunction)):
            return NotImplemented
        if other == 0:
            raise ZeroDivisionError("division by zero")
        inv = Fraction(1) / other if not isinstance(other, RationalFunction) else 1 / other
        return self.scale(inv)

    def __rtruediv__(self, other):
        if not self.is_constant() or not isinstance(other, (int, Fraction, RationalFunction)):
            return NotImplemented
        c = self.constant_value()
        if c == 0:
            raise ZeroDivisionError("division by zero")
        return Polynomial.constant(other / c if isinstance(c, RationalFunction)
                                   else (other * (Fraction(1) / c)))

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction, RationalFunction)):
            return self._terms == Polynomial.constant(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # structure ------------------------------------------------------------

    def degree(self, v):
        d = 0
        for mono in self._terms:
            for w, e in mono:
                if w == v and e > d:
                    d = e
        return d

    def total_degree(self):
        return max((sum(e for _, e in m) for m in self._terms), default=0)

    def coefficients_in(self, v):
        """Map exponent d -> coefficient of v^d (a polynomial free of v)."""
        buckets = {}
        for mono, c in self._terms.items():
            d = 0
            rest = []
            for w, e in mono:
                if w == v:
                    d = e
                else:
                    rest.append((w, e))
            buckets.setdefault(d, {})[tuple(rest)] = c
        return {d: Polynomial(t) for d, t in buckets.items()}

    def coeff(self, v, d):
        out = {}
        for mono, c in self._terms.items():
            e = 0
            rest = []
            for w, k in mono:
                if w == v:
                    e = k
                else:
                    rest.append((w, k))
            if e == d:
                out[tuple(rest)] = c
        return Polynomial(out)

    def diff(self, v):
        out = {}
        for mono, c in self._terms.items():
            for i, (w, e) in enumerate(mono):
                if w == v:
                    m = mono[:i] + (((w, e - 1),) if e > 1 else ()) + mono[i + 1:]
                    s = out.get(m, 0) + c * e
                    if s == 0:
                        out.pop(m, None)
                    else:
                        out[m] = s
                    break
        return Polynomial(out)

    def subs(self, v, value):
        """Substitute a polynomial (or scalar) for the variable ``v``."""
        if not isinstance(value, Polynomial):
            value = Polynomial.constant(value)
        parts = self.coefficients_in(v)
        result = Polynomial()
        powers = {0: Polynomial.constant(1)}
        for d in sorted(parts):
            if d not in powers:
                powers[d] = value ** d
            result = result + parts[d] * powers[d]
        return result

    def map_coefficients(self, fn):
        out = {}
        for m, c in self._terms.items():
            c2 = _as_coeff(fn(c))
            if c2 != 0:
                out[m] = c2
        return Polynomial(out)

    def map_variables(self, fn):
        """Rename variables through ``fn`` (must stay injective on the support)."""
        return Polynomial.from_terms(
            (tuple((fn(v), e) for v, e in mono), c) for mono, c in self._terms.items()
        )

    def evaluate(self, assignment):
        """Substitute scalars for all variables given in ``assignment``."""
        result = Polynomial()
        for mono, c in self._terms.items():
            coeff = c
            rest = []
            for v, e in mono:
                if v in assignment:
                    coeff = coeff * _as_coeff(assignment[v]) ** e
                else:
                    rest.append((v, e))
            if coeff != 0:
                result = result + Polynomial({tuple(rest): coeff})
        return result

    def has_rational_function_coefficients(self):
        return any(isinstance(c, RationalFunction) for c in self._terms.values())

    # ordering / printing --------------------------------------------------

    def ordered_terms(self, ranking=None):
        """Terms in decreasing canonical order (ranking-major lexicographic)."""
        order = _rank_fn(ranking)

        def key(item):
            mono = item[0]
            return sorted(((order(v), e) for v, e in mono), reverse=True)

        return sorted(self._terms.items(), key=key, reverse=True)

    def leading_term(self, ranking=None):
        return self.ordered_terms(ranking)[0]

    def sort_key(self):
        return tuple(
            (tuple((v.key, e) for v, e in m), str(c)) for m, c in self.ordered_terms()
        )

    def render(self, ranking=None):
        order = _rank_fn(ranking)
        parts = []
        for mono, c in self.ordered_terms(ranking):
            ms = _mono_str(mono, order)
            if isinstance(c, RationalFunction):
                neg, body = c._render_parts()
                if ms:
                    body = ms if body == "1" else f"{body}*{ms}"
                parts.append((neg, body))
            else:
                parts.append(_join_coeff(c, ms))
        return _join_terms(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"Polynomial({self.render()})"


def as_polynomial(x):
    if isinstance(x, Polynomial):
        return x
    return Polynomial.constant(x)


# ---------------------------------------------------------------------------
# ranking-aware structure


def leader(p, ranking=None):
    """The greatest variable occurring in ``p`` under ``ranking``."""
    vs = p.variables()
    if not vs:
        raise ConstantPolynomial(f"{p} has no ranked variable")
    return max(vs, key=_rank_fn(ranking))


def initial(p, ranking=None):
    v = leader(p, ranking)
    return p.coeff(v, p.degree(v))


def separant(p, ranking=None):
    return p.diff(leader(p, ranking))


def tail(p, ranking=None):
    """``p`` minus its leading part ini(p) * ld(p)^deg."""
    v = leader(p, ranking)
    d = p.degree(v)
    return p - initial(p, ranking) * Polynomial.variable(v, d)


@dataclass(frozen=True)
class PseudoDivision:
    """ini(q)^exponent * p = quotient * q + remainder."""

    remainder: Polynomial
    quotient: Polynomial
    exponent: int
    multiplier: Polynomial


def pseudo_remainder(p, q, v):
    dq = q.degree(v)
    if dq == 0:
        raise NotReducible(f"{q} does not involve {v}")
    lc = q.coeff(v, dq)
    r = p
    quot = Polynomial()
    e = 0
    while r and r.degree(v) >= dq:
        dr = r.degree(v)
        t = r.coeff(v, dr) * Polynomial.variable(v, dr - dq) if dr > dq else r.coeff(v, dr)
        r = lc * r - t * q
        quot = lc * quot + t
        e += 1
    return PseudoDivision(r, quot, e, lc ** e)


def _lex_leading(p):
    """Leading (monomial, coefficient) under lex order on variable keys."""
    return max(p.items(), key=lambda it: sorted(((v.key, e) for v, e in it[0]), reverse=True))


def exact_divide(a, b):
    """Quotient a / b; raises InexactDivision when b does not divide a."""
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if b.is_constant():
        return a.scale(Fraction(1) / b.constant_value()) if not isinstance(
            b.constant_value(), RationalFunction) else a.map_coefficients(
                lambda c: c / b.constant_value())
    mb, cb = _lex_leading(b)
    db = dict(mb)
    q = {}
    r = a
    while r:
        mr, cr = _lex_leading(r)
        dr = dict(mr)
        rest = {}
        for v, e in db.items():
            if dr.get(v, 0) < e:
                raise InexactDivision(f"{b} does not divide {a}")
        for v, e in dr.items():
            k = e - db.get(v, 0)
            if k:
                rest[v] = k
        m = tuple(sorted(rest.items(), key=lambda ve: ve[0].key))
        c = cr / cb
        q[m] = q.get(m, 0) + c
        r = r - Polynomial({m: c}) * b
    return Polynomial({m: c for m, c in q.items() if c != 0})


def divides(b, a):
    try:
        exact_divide(a, b)
    except InexactDivision:
        return False
    return True


def _det(matrix):
    """Fraction-free (Bareiss) determinant of a square polynomial matrix."""
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return Polynomial.constant(1)
    sign = 1
    prev = Polynomial.constant(1)
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Polynomial()
        piv = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                val = m[i][j] * piv - m[i][k] * m[k][j]
                m[i][j] = exact_divide(val, prev) if not prev.is_constant() else (
                    val.scale(Fraction(1) / prev.constant_value()))
            m[i][k] = Polynomial()
        prev = piv
    d = m[n - 1][n - 1]
    return d if sign > 0 else -d


def _sylvester_block(p, q, v, j):
    """Rows of the j-th subresultant matrix and the column powers."""
    dp, dq = p.degree(v), q.degree(v)
    cp = p.coefficients_in(v)
    cq = q.coefficients_in(v)
    zero = Polynomial()
    top = dp + dq - j - 1
    powers = list(range(top, -1, -1))
    rows = []
    for s in range(dq - j - 1, -1, -1):
        rows.append([cp.get(c - s, zero) for c in powers])
    for s in range(dp - j - 1, -1, -1):
        rows.append([cq.get(c - s, zero) for c in powers])
    return rows, powers


def _check_chain_input(p, q, v):
    if not p or not q:
        raise ZeroInput("subresultants of the zero polynomial")
    if p.degree(v) < q.degree(v):
        raise ValueError("need deg_v(p) >= deg_v(q)")


def subresultant(p, q, v, j):
    """The j-th subresultant S_j(p, q) for 0 <= j < deg_v(q) (formal degrees)."""
    _check_chain_input(p, q, v)
    dq = q.degree(v)
    if not 0 <= j < dq:
        raise ValueError("subresultant index out of range")
    rows, powers = _sylvester_block(p, q, v, j)
    size = len(rows)
    result = Polynomial()
    for i in range(j + 1):
        col = powers.index(i)
        mat = [row[: size - 1] + [row[col]] for row in rows]
        d = _det(mat)
        if d:
            result = result + d * Polynomial.variable(v, i) if i else result + d
    return result


def principal_subresultant_coefficient(p, q, v, j):
    _check_chain_input(p, q, v)
    rows, powers = _sylvester_block(p, q, v, j)
    size = len(rows)
    return _det([row[:size] for row in rows])


def principal_subresultant_coefficients(p, q, v):
    """[psc_0, ..., psc_{deg q - 1}]; psc_0 is the resultant."""
    return [principal_subresultant_coefficient(p, q, v, j) for j in range(q.degree(v))]


def subresultant_chain(p, q, v):
    """[p, q, S_{d-1}, ..., S_0] with d = deg_v(q); the last entry is the resultant."""
    _check_chain_input(p, q, v)
    dq = q.degree(v)
    return [p, q] + [subresultant(p, q, v, j) for j in range(dq - 1, -1, -1)]


def resultant(p, q, v):
    """Res_v(p, q) via the Sylvester determinant; larger degree goes first."""
    if not p or not q:
        raise ZeroInput("resultant of the zero polynomial")
    dp, dq = p.degree(v), q.degree(v)
    if dq == 0 and dp == 0:
        return Polynomial.constant(1)
    if dp < dq:
        r = resultant(q, p, v)
        return -r if (dp * dq) % 2 else r
    if dq == 0:
        return q ** dp
    return principal_subresultant_coefficient(p, q, v, 0)


# ---------------------------------------------------------------------------
# gcd / content (delegated to sympy's sparse rings)


def _to_sympy(polys):
    vs = sorted({v for p in polys for v in p.variables()}, key=lambda v: v.key)
    names = [f"z{i}" for i in range(len(vs))] or ["z0"]
    R, *_ = _sympy_ring(",".join(names), QQ)
    idx = {v: i for i, v in enumerate(vs)}
    out = []
    for p in polys:
        d = {}
        for mono, c in p.items():
            if isinstance(c, RationalFunction):
                raise TypeError("gcd needs constant coefficients")
            exps = [0] * len(names)
            for v, e in mono:
                exps[idx[v]] = e
            d[tuple(exps)] = QQ(c.numerator, c.denominator)
        out.append(R.from_dict(d) if d else R.zero)
    return out, vs


def _from_sympy(sp, vs):
    items = []
    for exps, c in sp.terms():
        mono = tuple((vs[i], e) for i, e in enumerate(exps) if e)
        items.append((mono, _mpq_to_fraction(QQ.convert(c))))
    return Polynomial.from_terms(items)


def poly_gcd(a, b):
    if not a:
        return b
    if not b:
        return a
    (sa, sb), vs = _to_sympy([a, b])
    return _from_sympy(sa.gcd(sb), vs)


def rational_primitive(p):
    """Scale a Q-polynomial to coprime integer coefficients, leading term positive."""
    if not p or p.has_rational_function_coefficients():
        return p
    den = 1
    num = 0
    for c in p.terms.values():
        den = den * c.denominator // gcd(den, c.denominator)
    for c in p.terms.values():
        num = gcd(num, (c * den).numerator)
    scale = Fraction(den, num)
    _, lc = _lex_leading(p)
    if lc < 0:
        scale = -scale
    return p.scale(scale)


def primitive_part(p, v):
    """Remove the content of ``p`` as a polynomial in ``v`` (and rational content)."""
    if not p or p.has_rational_function_coefficients():
        return p
    coeffs = list(p.coefficients_in(v).values())
    g = Polynomial()
    for c in coeffs:
        if c.is_constant():
            g = Polynomial.constant(1)
            break
    if not g:
        for c in coeffs:
            g = poly_gcd(g, c)
            if g.is_constant():
                break
    if g and not g.is_constant():
        p = exact_divide(p, g)
    return rational_primitive(p)


def squarefree_part(p, v):
    """p / gcd(p, dp/dv), computed generically over the other variables."""
    d = p.degree(v)
    if d == 0:
        raise ConstantInV(f"{p} does not involve {v}")
    if d == 1:
        return primitive_part(p, v)
    dp = p.diff(v)
    for j in range(dp.degree(v)):
        if principal_subresultant_coefficient(p, dp, v, j):
            if j == 0:
                return primitive_part(p, v)
            g = subresultant(p, dp, v, j)
            return primitive_part(pseudo_remainder(p, g, v).quotient, v)
    # gcd has the degree of dp itself
    return primitive_part(pseudo_remainder(p, dp, v).quotient, v)


def reduce_modulo(p, equations, ranking=None):
    """Pseudo-reduce ``p`` by a triangular set of equations (highest leader first).

    Returns the reduced polynomial; every step multiplies by a power of an
    initial, so zero sets on the solutions of the set are preserved when the
    initials do not vanish there.
    """
    order = _rank_fn(ranking)
    eqs = sorted(equations, key=lambda e: order(leader(e, ranking)), reverse=True)
    r = p
    for e in eqs:
        v = leader(e, ranking)
        if r and r.degree(v) >= e.degree(v):
            r = pseudo_remainder(r, e, v).remainder
    return r
