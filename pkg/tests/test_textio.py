import pytest
from hypothesis import given, strategies as st

from countdiff.errors import ParseError
from countdiff.polyring import Ranking
from countdiff.textio import (
    eval_int,
    load,
    parse_differential_system,
    parse_manifest,
    parse_polynomial,
    parse_sigma_system,
    render_differential_system,
    render_sigma_system,
)


def test_simple_equation():
    S = parse_sigma_system("vars y1\neq y1^2 - 1")
    assert [p.render(S.ranking) for p in S.equations] == ["y1^2 - 1"]


def test_hard_equation_renders_canonically():
    spec = parse_differential_system(
        "funcs u1 u2\nbasevars t\nranking orderly u1>u2\neq u2*D(u1,t) - u1 + 1/t")
    assert spec.equations[0].render(spec.ring.ranking) == "D(u1,t)*u2 - u1 + 1/t"


def test_double_caret_column():
    with pytest.raises(ParseError) as err:
        parse_sigma_system("vars y1\neq y1 ^^ 2")
    assert (err.value.line, err.value.column) == (2, 7)


@pytest.mark.parametrize("text,line", [
    ("eq x", 1),
    ("vars x\neq y", 2),
    ("vars x\nfoo x", 2),
    ("vars x\neq (x + 1", 2),
    ("vars x\neq x^y", 2),
])
def test_errors_have_lines(text, line):
    with pytest.raises(ParseError) as err:
        parse_sigma_system(text)
    assert err.value.line == line


def test_differential_errors():
    with pytest.raises(ParseError, match="base variable"):
        parse_differential_system("funcs u\nbasevars t\nranking orderly u\neq D(u,q)")
    with pytest.raises(ParseError, match="only allowed"):
        parse_differential_system("funcs u\nbasevars t\nranking orderly u\neq G(u)")
    with pytest.raises(ParseError, match="every function"):
        parse_differential_system("funcs u v\nbasevars t\nranking orderly u\neq u")


def test_template_evaluator():
    assert eval_int("(-1)^k*fact(k)", {"k": 3}) == -6
    assert eval_int("k+1", {"k": 2}) == 3
    with pytest.raises(ValueError):
        eval_int("__import__('os')", {})


def test_templates_expand_per_order(corpus):
    spec = load(corpus / "hard_Tinf.dsys")
    cons = spec.build().constraints(2)
    rendered = sorted(p.render(spec.ring.ranking) for p in cons.equations)
    assert "2*G(u1,t,2)*G(u2,t) - G(u1,t,2) + 2" in rendered
    assert [len(m.witnesses) for m in cons.cofinite] == [2]


def test_manifest_parsing(tmp_path):
    (tmp_path / "a.dsys").write_text("funcs u\nbasevars t\nranking orderly u\neq u\n")
    m = parse_manifest("point 0\nstratum a.dsys\nstratum-for k in 1..l: a.dsys\n",
                       base_dir=tmp_path)
    assert len(m.entries) == 2 and m.point == (0,)
    with pytest.raises(ParseError):
        parse_manifest("stratum-for k in 1: a.dsys")


@pytest.mark.parametrize("name", ["split3.sys", "xy.sys", "parabola.sys", "cofinite.sys"])
def test_sys_roundtrip(corpus, name):
    S = load(corpus / name)
    assert parse_sigma_system(render_sigma_system(S)) == S


@pytest.mark.parametrize("name", ["heat", "wave", "u1sq", "navier_stokes", "hard_S", "hard_T",
                                  "better_S", "better_T"])
def test_dsys_roundtrip(corpus, name):
    s = load(corpus / f"{name}.dsys").build()
    again = parse_differential_system(render_differential_system(s)).build()
    assert again == s


R = Ranking.from_names(["a", "b"])
atoms = st.sampled_from(["a", "b", "1", "2", "1/3", "(a - b)", "a^2"])
exprs = st.recursive(atoms, lambda inner: st.tuples(inner, st.sampled_from([" + ", " - ", "*"]), inner)
                     .map(lambda t: f"({t[0]}{t[1]}{t[2]})"), max_leaves=8)


@given(exprs)
def test_render_parse_roundtrip(text):
    p = parse_polynomial(text, R)
    assert parse_polynomial(p.render(R), R) == p
