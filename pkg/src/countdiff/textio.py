"""Text formats: algebraic systems (.sys), differential systems (.dsys), strata manifests (.mf).

All three are line based; ``#`` starts a comment.  Polynomials use
``+ - * / ^`` with parentheses, ``D(u, x, k, ...)`` for derivatives of whole
expressions and ``G(u, x, k, ...)`` for power series coefficient symbols.
Template lines (``*-for`` keywords, ``{...}`` holes) are expanded with a small
integer expression evaluator that knows ``i``, ``k``, ``l`` and ``fact``.
"""

import ast
import operator
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from pathlib import Path

from .diffalg import (
    CoefficientConstraints,
    DifferentialRing,
    DifferentialSystem,
    OrderlyRanking,
    derive_multi,
    rho,
)
from .errors import ParseError
from .polyring import Polynomial, Ranking
from .sigma_systems import CofiniteMarker, SigmaSystem

__all__ = [
    "parse_polynomial",
    "parse_sigma_system",
    "render_sigma_system",
    "DifferentialSpec",
    "parse_differential_system",
    "render_differential_system",
    "Manifest",
    "parse_manifest",
    "load",
    "load_sigma_system",
    "load_differential_system",
    "load_manifest",
    "eval_int",
]


# ---------------------------------------------------------------------------
# tokens and expressions

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^(),]))")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    col: int   # 1-based within the line


def _tokenize(text, line, col0, source):
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[start]!r}", line, col0 + start, source)
        kind = m.lastgroup
        tok = m.group(kind)
        if tok == "^" and text[m.end():m.end() + 1] == "^":
            raise ParseError("unexpected '^^'", line, col0 + start, source)
        if tok == "*" and text[m.end():m.end() + 1] == "*":
            raise ParseError("use '^' for powers", line, col0 + start, source)
        out.append(_Tok(kind, tok, col0 + start))
        pos = m.end()
    out.append(_Tok("end", "", col0 + len(text)))
    return out


class _Parser:
    """Recursive descent over one expression; ``ctx`` resolves names."""

    def __init__(self, text, ctx, line=None, col0=1, source=None):
        self.toks = _tokenize(text, line, col0, source)
        self.i = 0
        self.ctx = ctx
        self.line = line
        self.source = source

    def error(self, msg, tok=None):
        tok = tok or self.toks[self.i]
        return ParseError(msg, self.line, tok.col, self.source)

    def peek(self):
        return self.toks[self.i]

    def take(self, text=None, kind=None):
        tok = self.toks[self.i]
        if (text is not None and tok.text != text) or (kind is not None and tok.kind != kind):
            want = repr(text) if text is not None else kind
            got = repr(tok.text) if tok.text else "end of line"
            raise self.error(f"expected {want}, found {got}")
        self.i += 1
        return tok

    def parse(self):
        value = self.expr()
        if self.peek().kind != "end":
            raise self.error(f"unexpected {self.peek().text!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek().text in ("+", "-"):
            op = self.take().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek().text in ("*", "/"):
            tok = self.take()
            rhs = self.unary()
            if tok.text == "*":
                value = value * rhs
            else:
                try:
                    value = value / rhs
                except ZeroDivisionError:
                    raise self.error("division by zero", tok) from None
                except Exception as exc:  # noqa: BLE001 - inexact division of polynomials
                    raise self.error(f"cannot divide: {exc}", tok) from None
        return value

    def unary(self):
        if self.peek().text == "-":
            self.take()
            return -self.unary()
        if self.peek().text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.primary()
        if self.peek().text == "^":
            self.take()
            tok = self.take(kind="num")
            base = base ** int(tok.text)
        return base

    def primary(self):
        tok = self.peek()
        if tok.kind == "num":
            self.take()
            return Polynomial.constant(Fraction(int(tok.text)))
        if tok.text == "(":
            self.take()
            value = self.expr()
            self.take(")")
            return value
        if tok.kind == "name":
            self.take()
            if self.peek().text == "(":
                return self.call(tok)
            return self.ctx.name(tok, self)
        raise self.error(f"unexpected {tok.text!r}" if tok.text else "unexpected end of line")

    def call(self, head):
        self.take("(")
        if head.text == "D":
            target = self.expr()
        elif head.text == "G":
            target = self.take(kind="name")
        else:
            raise self.error(f"unknown function {head.text!r}", head)
        mods = []
        while self.peek().text == ",":
            self.take()
            name = self.take(kind="name")
            count = 1
            if self.peek().text == ",":
                if self.toks[self.i + 1].kind == "num":
                    self.take()
                    count = int(self.take(kind="num").text)
            mods.append((name, count))
        self.take(")")
        return self.ctx.apply(head, target, mods, self)


class _AlgebraicNames:
    def __init__(self, ranking):
        self.ranking = ranking

    def name(self, tok, parser):
        try:
            return Polynomial.variable(self.ranking.by_name(tok.text))
        except KeyError:
            raise parser.error(f"unknown variable {tok.text!r}", tok) from None

    def apply(self, head, target, mods, parser):
        raise parser.error(f"{head.text}(...) is not allowed in algebraic systems", head)


class _DifferentialNames:
    def __init__(self, ring, allow_g=False):
        self.ring = ring
        self.allow_g = allow_g

    def name(self, tok, parser):
        if tok.text in self.ring.funcs:
            return self.ring.u(tok.text)
        if tok.text in self.ring.bases:
            return self.ring.base(tok.text)
        raise parser.error(f"unknown name {tok.text!r}", tok)

    def _mu(self, mods, parser):
        mu = [0] * self.ring.n
        for name, count in mods:
            if name.text not in self.ring.bases:
                raise parser.error(f"{name.text!r} is not a base variable", name)
            mu[self.ring.bases.index(name.text)] += count
        return tuple(mu)

    def apply(self, head, target, mods, parser):
        mu = self._mu(mods, parser)
        if head.text == "D":
            return derive_multi(target, mu, self.ring)
        if not self.allow_g:
            raise parser.error("G(...) is only allowed in coefficient constraints", head)
        if target.text not in self.ring.funcs:
            raise parser.error(f"unknown function {target.text!r}", target)
        return self.ring.g(target.text, mu)


def parse_polynomial(text, names, *, source=None):
    """Parse ``text`` over a ranking (algebraic) or a DifferentialRing."""
    if isinstance(names, DifferentialRing):
        ctx = _DifferentialNames(names, allow_g=True)
    else:
        if not isinstance(names, Ranking):
            names = Ranking.from_names(names)
        ctx = _AlgebraicNames(names)
    return _Parser(text, ctx, source=source).parse()


# ---------------------------------------------------------------------------
# integer templates

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.FloorDiv: operator.floordiv, ast.Mod: operator.mod, ast.Pow: operator.pow,
           ast.Div: lambda a, b: Fraction(a) / b}


def eval_int(text, env):
    """Evaluate a small arithmetic expression over integers/fractions."""
    text = text.replace("^", "**")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise ValueError(f"unknown name {node.id!r}")
            return env[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Pow) and (b < 0 or b > 64):
                raise ValueError("exponent out of range")
            return _BINOPS[type(node.op)](a, b)
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id == "fact" and len(node.args) == 1 and not node.keywords):
            v = ev(node.args[0])
            if v != int(v) or v < 0 or v > 200:
                raise ValueError("fact() needs a small nonnegative integer")
            return factorial(int(v))
        raise ValueError("unsupported template expression")

    try:
        value = ev(ast.parse(text.strip(), mode="eval"))
    except SyntaxError as exc:
        raise ValueError(f"bad template expression {text!r}") from exc
    if isinstance(value, Fraction) and value.denominator == 1:
        value = int(value)
    return value


_HOLE = re.compile(r"\{([^{}]*)\}")


def _fill(text, env, line, col0, source):
    def sub(m):
        try:
            v = eval_int(m.group(1), env)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(str(exc), line, col0 + m.start(), source) from None
        if isinstance(v, int) and v >= 0:
            return str(v)
        return f"({v})"
    return _HOLE.sub(sub, text)


def _uses_order(text):
    return any(re.search(r"\bl\b", h) for h in _HOLE.findall(text))


_RANGE = re.compile(r"^(?P<var>[a-z])\s+in\s+(?P<lo>[^:]+?)\.\.(?P<hi>[^:]*?)\s*:\s*(?P<body>.*)$")


def _range_bounds(lo, hi, env, line, source):
    try:
        a = eval_int(lo, env)
        b = eval_int(hi, env) if hi.strip() else None
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(str(exc), line, None, source) from None
    return a, b


# ---------------------------------------------------------------------------
# line splitting


def _lines(text):
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        indent = len(body) - len(body.lstrip())
        head, _, rest = stripped.partition(" ")
        rest_col = indent + len(head) + 1 + (len(rest) - len(rest.lstrip())) + 1
        yield no, head, rest.strip(), rest_col, raw


# ---------------------------------------------------------------------------
# algebraic systems


def _parse_vars(rest, line, source):
    if ">" in rest and "<" in rest:
        raise ParseError("mix of '<' and '>' in vars line", line, None, source)
    if ">" in rest:
        names = [s.strip() for s in rest.split(">")][::-1]
    elif "<" in rest:
        names = [s.strip() for s in rest.split("<")]
    else:
        names = rest.split()
    for n in names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", n):
            raise ParseError(f"bad variable name {n!r}", line, None, source)
    if len(set(names)) != len(names):
        raise ParseError("variable declared twice", line, None, source)
    return Ranking.from_names(names)


def parse_sigma_system(text, *, source=None):
    """``vars x < y`` (lowest first) then ``eq``/``ineq``/``cofinite`` lines."""
    ranking = None
    eqs, ineqs, markers = [], [], []
    for no, head, rest, col, _ in _lines(text):
        if head == "vars":
            if ranking is not None:
                raise ParseError("second vars line", no, 1, source)
            ranking = _parse_vars(rest, no, source)
            continue
        if ranking is None:
            raise ParseError("a vars line must come first", no, 1, source)
        if head in ("eq", "ineq"):
            p = _Parser(rest, _AlgebraicNames(ranking), no, col, source).parse()
            (eqs if head == "eq" else ineqs).append(p)
        elif head == "cofinite":
            name, _, desc = rest.partition(" ")
            try:
                v = ranking.by_name(name)
            except KeyError:
                raise ParseError(f"unknown variable {name!r}", no, col, source) from None
            desc = desc.strip()
            disjoint = desc.split(" ", 1)[0] == "disjoint"
            if disjoint:
                desc = desc[len("disjoint"):].strip()
            markers.append(CofiniteMarker(v, desc, (), disjoint))
        else:
            raise ParseError(f"unknown keyword {head!r}", no, 1, source)
    if ranking is None:
        raise ParseError("missing vars line", None, None, source)
    return SigmaSystem(ranking, eqs, ineqs, markers)


def render_sigma_system(S):
    lines = ["vars " + " < ".join(str(v) for v in S.ranking)]
    lines += ["eq " + p.render(S.ranking) for p in S.equations]
    lines += ["ineq " + p.render(S.ranking) for p in S.inequations]
    for m in S.cofinite:
        extra = " ".join(x for x in ("disjoint" if m.disjoint else "", m.description) if x)
        lines.append(f"cofinite {m.variable}" + (f" {extra}" if extra else ""))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# differential systems


@dataclass(frozen=True)
class _Template:
    kind: str          # "eq" or "ineq"
    body: str
    line: int
    col: int
    var: str = None    # range variable for *-for lines
    lo: str = None
    hi: str = None


@dataclass(frozen=True)
class _CofiniteTemplate:
    target: str
    disjoint: bool
    line: int
    col: int
    var: str = None
    lo: str = None
    hi: str = None
    body: str = None


@dataclass
class DifferentialSpec:
    """A parsed .dsys file; ``build`` turns it into a DifferentialSystem."""

    ring: DifferentialRing
    equations: tuple
    point: tuple = None
    templates: tuple = ()
    cofinite: tuple = ()
    name: str = ""
    params: dict = field(default_factory=dict)
    source: str = None

    def has_constraints(self):
        return bool(self.templates or self.cofinite)

    def _expand(self, order, zeta):
        env = dict(self.params, l=order)
        ctx = _DifferentialNames(self.ring, allow_g=True)
        eqs, ineqs, markers = [], [], []

        def image(body, local, line, col):
            text = _fill(body, local, line, col, self.source)
            p = _Parser(text, ctx, line, col, self.source).parse()
            return rho(p, zeta, self.ring)

        for t in self.templates:
            out = eqs if t.kind == "eq" else ineqs
            if t.var is None:
                out.append(image(t.body, env, t.line, t.col))
                continue
            a, b = _range_bounds(t.lo, t.hi, env, t.line, self.source)
            for i in range(a, b + 1):
                out.append(image(t.body, dict(env, **{t.var: i}), t.line, t.col))
        for c in self.cofinite:
            target = rho(_Parser(c.target, ctx, c.line, c.col, self.source).parse(), zeta, self.ring)
            vs = target.variables()
            if len(vs) != 1 or target != Polynomial.variable(next(iter(vs))):
                raise ParseError("cofinite target must be a single coefficient", c.line, c.col,
                                 self.source)
            wit = []
            if c.var is not None:
                a, b = _range_bounds(c.lo, c.hi, env, c.line, self.source)
                for i in range(a, b + 1):
                    wit.append(image(c.body, dict(env, **{c.var: i}), c.line, c.col))
            markers.append(CofiniteMarker(next(iter(vs)), "", tuple(wit), c.disjoint))
        return CoefficientConstraints(tuple(eqs), tuple(ineqs), tuple(markers))

    def _order_free(self):
        """True when no constraint depends on the order l."""
        if self.cofinite:
            return False
        return all(t.var is None and not _uses_order(t.body) for t in self.templates)

    def build(self, point=None):
        zeta = tuple(Fraction(z) for z in (point if point is not None else self.point or ()))
        if self.has_constraints() and not zeta:
            raise ParseError("coefficient constraints need an expansion point", None, None,
                             self.source)
        constraints = None
        if self.has_constraints():
            if self._order_free():
                constraints = self._expand(0, zeta)
            else:
                constraints = lambda order: self._expand(order, zeta)  # noqa: E731
        return DifferentialSystem(self.ring, tuple(self.equations), zeta or None,
                                  constraints, self.name)


def _parse_point(rest, line, col, source):
    parts = [p for p in re.split(r"[\s,]+", rest.strip()) if p]
    try:
        return tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad point {rest!r}", line, col, source) from None


def _parse_ranking(rest, funcs, line, col, source):
    words = rest.split()
    if not words or words[0] != "orderly":
        raise ParseError("only 'ranking orderly ...' is supported", line, col, source)
    tiebreak = "function-first"
    tail = words[1:]
    if tail[-2:] == ["by", "derivative"]:
        tiebreak, tail = "derivative-first", tail[:-2]
    elif tail[-2:] == ["by", "function"]:
        tail = tail[:-2]
    prio = [p.strip() for p in "".join(tail).split(">") if p.strip()]
    if sorted(prio) != sorted(funcs):
        raise ParseError("ranking must list every function exactly once", line, col, source)
    return OrderlyRanking(prio, tiebreak)


def parse_differential_system(text, *, source=None, params=None):
    params = dict(params or {})
    funcs = bases = ranking = None
    point = None
    name = ""
    eq_lines, templates, cofinite = [], [], []
    for no, head, rest, col, _ in _lines(text):
        if head == "funcs":
            funcs = rest.split()
        elif head == "basevars":
            bases = rest.split()
        elif head == "ranking":
            if funcs is None:
                raise ParseError("ranking before funcs", no, 1, source)
            ranking = _parse_ranking(rest, funcs, no, col, source)
        elif head == "point":
            point = _parse_point(rest, no, col, source)
        elif head == "name":
            name = rest
        elif head == "lookahead":
            continue
        elif head == "eq":
            eq_lines.append((no, col, rest))
        elif head in ("coef-eq", "coef-ineq"):
            templates.append(_Template(head[5:], rest, no, col))
        elif head in ("coef-eq-for", "coef-ineq-for"):
            m = _RANGE.match(rest)
            if not m or not m.group("hi").strip():
                raise ParseError("expected '<var> in <a>..<b>: <expr>'", no, col, source)
            body_col = col + m.start("body")
            templates.append(_Template(head[5:-4], m.group("body"), no, body_col,
                                       m.group("var"), m.group("lo"), m.group("hi")))
        elif head == "coef-cofinite":
            words = rest
            disjoint = words.startswith("disjoint ")
            if disjoint:
                words = words[len("disjoint "):].lstrip()
            target, sep, tail = words.partition(" witnesses ")
            wcol = col + rest.find(target)
            if not sep:
                cofinite.append(_CofiniteTemplate(target.strip(), disjoint, no, wcol))
                continue
            m = _RANGE.match(tail.strip())
            if not m:
                raise ParseError("expected 'witnesses <var> in <a>..<b>: <expr>'", no, col, source)
            cofinite.append(_CofiniteTemplate(target.strip(), disjoint, no, wcol, m.group("var"),
                                              m.group("lo"), m.group("hi"), m.group("body")))
        else:
            raise ParseError(f"unknown keyword {head!r}", no, 1, source)
    if not funcs:
        raise ParseError("missing funcs line", None, None, source)
    if not bases:
        raise ParseError("missing basevars line", None, None, source)
    try:
        ring = DifferentialRing(funcs, bases, ranking)
    except ValueError as exc:
        raise ParseError(str(exc), None, None, source) from None
    ctx = _DifferentialNames(ring)
    eqs = []
    for no, col, body in eq_lines:
        body = _fill(body, params, no, col, source)
        eqs.append(_Parser(body, ctx, no, col, source).parse())
    spec = DifferentialSpec(ring, tuple(eqs), point, tuple(templates), tuple(cofinite), name,
                            params, source)
    # surface template syntax errors at load time
    if spec.has_constraints():
        probe = tuple(point or (Fraction(0),) * ring.n)
        try:
            spec._expand(0, probe)
        except ParseError:
            raise
        except Exception:  # noqa: BLE001 - a pole at the probe point is not a syntax error
            pass
    return spec


def render_differential_system(system):
    """Render a DifferentialSystem (constraints only when order independent)."""
    ring = system.ring
    r = ring.ranking
    lines = []
    if system.name:
        lines.append(f"name {system.name}")
    lines.append("funcs " + " ".join(ring.funcs))
    lines.append("basevars " + " ".join(ring.bases))
    line = "ranking orderly " + ">".join(r.priority)
    if r.tiebreak == "derivative-first":
        line += " by derivative"
    lines.append(line)
    if system.point is not None:
        lines.append("point " + " ".join(str(z) for z in system.point))
    lines += ["eq " + p.render(r) for p in system.equations]
    cons = system.constraints
    if isinstance(cons, CoefficientConstraints):
        lines += ["coef-eq " + p.render(r) for p in cons.equations]
        lines += ["coef-ineq " + p.render(r) for p in cons.inequations]
        for m in cons.cofinite:
            if m.witnesses:
                raise ValueError("cofinite witnesses cannot be rendered without their template")
            lines.append("coef-cofinite " + ("disjoint " if m.disjoint else "") + str(m.variable))
    elif cons is not None:
        raise ValueError("order-dependent constraints cannot be rendered")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# manifests


@dataclass(frozen=True)
class StratumEntry:
    path: Path
    var: str = None      # family variable, e.g. k
    lo: str = None
    hi: str = None


@dataclass
class Manifest:
    entries: tuple
    point: tuple = None
    degree: int = None
    expect: str = None
    source: str = None

    def strata(self, point=None):
        from .diffcount import Stratum

        zeta = tuple(point) if point is not None else self.point
        out = []
        for e in self.entries:
            text = e.path.read_text()
            if e.var is None:
                spec = parse_differential_system(text, source=str(e.path))
                system = spec.build(zeta)
                out.append(Stratum.from_system(system, system.point, name=e.path.stem))
                continue
            out.append(_family_stratum(e, text, zeta))
        return out


def _family_stratum(entry, text, zeta):
    from .diffcount import Stratum
    from .diffalg import truncation_system

    cache = {}

    def system_for(k):
        if k not in cache:
            spec = parse_differential_system(text, source=str(entry.path), params={entry.var: k})
            cache[k] = spec.build(zeta)
        return cache[k]

    def gen(order):
        a, b = _range_bounds(entry.lo, entry.hi, {"l": order}, None, str(entry.path))
        out = []
        for k in range(a, b + 1):
            s = system_for(k)
            out.append(truncation_system(s, s.point, order))
        return out

    return Stratum(generator=gen, name=f"{entry.path.stem}[{entry.var}]")


def parse_manifest(text, *, source=None, base_dir="."):
    base = Path(base_dir)
    entries = []
    point = degree = expect = None
    for no, head, rest, col, _ in _lines(text):
        if head == "point":
            point = _parse_point(rest, no, col, source)
        elif head == "stratum":
            entries.append(StratumEntry(base / rest))
        elif head == "stratum-for":
            m = _RANGE.match(rest)
            if not m or not m.group("hi").strip():
                raise ParseError("expected 'stratum-for <var> in <a>..<b>: FILE'", no, col, source)
            entries.append(StratumEntry(base / m.group("body").strip(), m.group("var"),
                                        m.group("lo"), m.group("hi")))
        elif head == "degree":
            try:
                degree = int(rest)
            except ValueError:
                raise ParseError(f"bad degree {rest!r}", no, col, source) from None
        elif head == "expect":
            expect = rest
        else:
            raise ParseError(f"unknown keyword {head!r}", no, 1, source)
    if not entries:
        raise ParseError("manifest lists no strata", None, None, source)
    return Manifest(tuple(entries), point, degree, expect, source)


# ---------------------------------------------------------------------------
# file helpers


def load_sigma_system(path):
    path = Path(path)
    return parse_sigma_system(path.read_text(), source=str(path))


def load_differential_system(path, params=None):
    path = Path(path)
    return parse_differential_system(path.read_text(), source=str(path), params=params)


def load_manifest(path):
    path = Path(path)
    return parse_manifest(path.read_text(), source=str(path), base_dir=path.parent)


def load(path):
    """Dispatch on the file suffix."""
    suffix = Path(path).suffix
    if suffix == ".sys":
        return load_sigma_system(path)
    if suffix == ".dsys":
        return load_differential_system(path)
    if suffix == ".mf":
        return load_manifest(path)
    raise ParseError(f"unknown file type {suffix!r}", None, None, str(path))
