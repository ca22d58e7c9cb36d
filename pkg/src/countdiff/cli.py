"""Command-line front end.

Exit status: 0 on success, 2 when ``compare`` cannot decide, 1 on errors.
"""

import argparse
import json
import sys
import warnings
from fractions import Fraction
from pathlib import Path

from .counting_ring import Decision, decide_sequences
from .diffalg import truncation_system
from .diffcount import (
    CONDITIONAL,
    SimpleDifferentialSystem,
    counting_sequence_simple,
    crosscheck_truncation,
    stratified_counting,
)
from .dimension import LeaderSet, dimension_polynomial, differential_invariants
from .errors import CountDiffError, FitFailure
from .sigma_systems import count_simple, validate_simple
from .textio import load_differential_system, load_manifest, load_sigma_system
from .thomas import decompose

SCHEMA = 1


class UsageError(CountDiffError):
    pass


def _point(text):
    if text is None:
        return None
    try:
        return tuple(Fraction(p) for p in text.replace(",", " ").split())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad --point {text!r}") from None


def _check_point(zeta, ring):
    if zeta is not None and len(zeta) != ring.n:
        raise UsageError(f"--point needs {ring.n} coordinates, got {len(zeta)}")


def _emit(args, text, data):
    if args.output == "structured":
        doc = {"schema": SCHEMA, "command": args.command}
        doc.update(data)
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(text)


# ---------------------------------------------------------------------------


def _cmd_count_alg(args):
    S = load_sigma_system(args.file)
    if S.is_finite():
        D = decompose(S)
        c = D.counting_polynomial()
        notes = []
    else:
        T = validate_simple(S, warn=False)
        c = count_simple(T, trust_assumed=args.trust_assumed)
        notes = [f"{k}: {v.value}" for k, v in T.certificate.items()]
    _emit(args, c.render(), {"counting_polynomial": c.to_structured(),
                             "text": c.render(), "certificate": notes})
    return 0


def _render_members(T):
    r = T.ranking
    lines = [f"  eq {p.render(r)}" for p in T.system.equations]
    lines += [f"  ineq {p.render(r)}" for p in T.system.inequations]
    lines += [f"  cofinite {m.variable}" for m in T.system.cofinite]
    return lines


def _cmd_decompose(args):
    S = load_sigma_system(args.file)
    D = decompose(S)
    lines = []
    comps = []
    for i, T in enumerate(D.components, start=1):
        c = count_simple(T)
        lines.append(f"component {i}: {c.render()}")
        lines += _render_members(T)
        comps.append({
            "equations": [p.render(T.ranking) for p in T.system.equations],
            "inequations": [p.render(T.ranking) for p in T.system.inequations],
            "counting_polynomial": c.to_structured(),
            "text": c.render(),
        })
    total = D.counting_polynomial()
    lines.append(f"total: {total.render()}")
    _emit(args, "\n".join(lines), {"components": comps, "total": total.to_structured(),
                                   "text": total.render()})
    return 0


def _sequence_for(path, zeta, args, notes):
    """Counting sequence of a .dsys (closed formula) or .mf (strata) file."""
    path = Path(path)
    if path.suffix == ".mf":
        m = load_manifest(path)
        point = zeta if zeta is not None else m.point
        degree = args.degree if getattr(args, "degree", None) is not None else (m.degree or 1)
        return stratified_counting(m.strata(point), degree=degree,
                                   max_start=getattr(args, "max_start", 6))
    spec = load_differential_system(path)
    _check_point(zeta, spec.ring)
    system = spec.build(zeta)
    if system.point is None:
        raise UsageError("no expansion point: give --point or a point line")
    S = SimpleDifferentialSystem.certify(system)
    if S.passivity == CONDITIONAL:
        notes.append(f"{path.name}: {CONDITIONAL}")
    return counting_sequence_simple(S, system.point)


def _cmd_count_diff(args):
    notes = []
    try:
        seq = _sequence_for(args.file, _point(args.point), args, notes)
    except FitFailure as exc:
        _emit(args, f"no closed form: {exc}", {"fit_failure": str(exc)})
        return 0
    for n in notes:
        print(f"note: {n}", file=sys.stderr)
    _emit(args, seq.render(), {"sequence": seq.to_structured(), "text": seq.render(),
                               "notes": notes})
    return 0


def _parse_leaders(text, m=None, n=None):
    """``1:2,0;1:1,1;2:0,3`` -> LeaderSet (function index : multi-index)."""
    rows = {}
    for item in filter(None, (s.strip() for s in text.split(";"))):
        try:
            j, mu = item.split(":")
            mu = tuple(int(x) for x in mu.split(","))
            rows.setdefault(int(j), []).append(mu)
        except ValueError:
            raise UsageError(f"bad leader {item!r}; expected j:a,b,...") from None
    if not rows:
        raise UsageError("empty leader set")
    widths = {len(mu) for row in rows.values() for mu in row}
    if len(widths) != 1:
        raise UsageError("multi-indices of different lengths")
    n = n or widths.pop()
    m = m or max(rows)
    try:
        return LeaderSet(m, n, rows)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _cmd_dimension(args):
    if args.leaders:
        L = _parse_leaders(args.leaders, args.m)
    elif args.file:
        spec = load_differential_system(args.file)
        L = SimpleDifferentialSystem.certify(spec.build(), passivity=False).leader_set()
    else:
        raise UsageError("give a .dsys file or --leaders")
    omega, L0 = dimension_polynomial(L)
    inv = differential_invariants(omega, L.n)
    text = "\n".join([
        f"omega: {omega.render()}",
        f"stabilization order: {L0}",
        f"differential type: {inv.differential_type}",
        f"typical dimension: {inv.typical_dimension}",
        f"differential dimension: {inv.differential_dimension}",
    ])
    _emit(args, text, {
        "leaders": L.to_structured(),
        "omega": omega.to_structured(),
        "text": omega.render(),
        "stabilization_order": L0,
        "differential_type": inv.differential_type,
        "typical_dimension": str(inv.typical_dimension),
        "differential_dimension": str(inv.differential_dimension),
    })
    return 0


def _cmd_truncate(args):
    spec = load_differential_system(args.file)
    zeta = _point(args.point)
    _check_point(zeta, spec.ring)
    system = spec.build(zeta)
    if system.point is None:
        raise UsageError("no expansion point: give --point or a point line")
    if args.crosscheck:
        report = crosscheck_truncation(system, system.point, args.order)
        lines = [f"l = {k}: {'ok' if e == g else 'MISMATCH'} {g.render()}"
                 for k, e, g in report.rows]
        _emit(args, "\n".join(lines), {
            "ok": report.ok,
            "rows": [{"order": k, "expected": e.render(), "truncated": g.render()}
                     for k, e, g in report.rows]})
        return 0 if report.ok else 1
    T = truncation_system(system, system.point, args.order)
    if T is None:
        _emit(args, "inconsistent", {"inconsistent": True})
        return 0
    c = count_simple(T, trust_assumed=True)
    lines = _render_members(T)
    lines.append(f"count: {c.render()}")
    lines += [f"{k}: {v.value}" for k, v in T.certificate.items() if v.value != "Proved"]
    _emit(args, "\n".join(lines), {
        "equations": [p.render(T.ranking) for p in T.system.equations],
        "inequations": [p.render(T.ranking) for p in T.system.inequations],
        "counting_polynomial": c.to_structured(),
        "text": c.render(),
        "certificate": {k: v.value for k, v in T.certificate.items()},
    })
    return 0


def _cmd_compare(args):
    zeta = _point(args.point)
    notes = []
    first = _sequence_for(args.first, zeta, args, notes)
    second = _sequence_for(args.second, zeta, args, notes)
    decision = decide_sequences(first, second, K=args.K)
    lines = [str(decision)]
    if not args.assert_subset:
        lines.append(f"conditional: assumes the solutions of {Path(args.first).name} "
                     f"lie among those of {Path(args.second).name} "
                     "(pass --assert-subset to acknowledge)")
    for n in notes:
        print(f"note: {n}", file=sys.stderr)
    _emit(args, "\n".join(lines), {
        "decision": str(decision),
        "conditional": not args.assert_subset,
        "first": first.to_structured(),
        "second": second.to_structured(),
        "notes": notes,
    })
    return 2 if decision is Decision.UNKNOWN else 0


# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="countdiff",
                                description="Counting polynomials of algebraic and differential systems.")
    p.add_argument("--output", choices=("text", "structured"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--output", choices=("text", "structured"), default=argparse.SUPPRESS)

    sp = sub.add_parser("count-alg", help="counting polynomial of a .sys file")
    sp.add_argument("file")
    sp.add_argument("--trust-assumed", action="store_true",
                    help="count systems whose certificate has assumed flags")
    common(sp)

    sp = sub.add_parser("decompose", help="Thomas decomposition of a .sys file")
    sp.add_argument("file")
    common(sp)

    sp = sub.add_parser("count-diff", help="counting sequence of a .dsys or .mf file")
    sp.add_argument("file")
    sp.add_argument("--point")
    sp.add_argument("--degree", type=int, help="fit degree for strata (default: manifest or 1)")
    sp.add_argument("--max-start", type=int, default=6)
    common(sp)

    sp = sub.add_parser("dimension", help="differential dimension polynomial")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--leaders", help="e.g. '1:2,0;1:1,1'")
    sp.add_argument("--m", type=int, help="number of functions for --leaders")
    common(sp)

    sp = sub.add_parser("truncate", help="simple system of truncated power series solutions")
    sp.add_argument("file")
    sp.add_argument("--order", "--max-order", type=int, required=True, dest="order")
    sp.add_argument("--point")
    sp.add_argument("--crosscheck", action="store_true",
                    help="compare truncation counts with the closed formula for l <= order")
    common(sp)

    sp = sub.add_parser("compare", help="decide equality of nested solution sets")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--K", type=int, default=32)
    sp.add_argument("--point")
    sp.add_argument("--degree", type=int)
    sp.add_argument("--max-start", type=int, default=6)
    sp.add_argument("--assert-subset", action="store_true",
                    help="acknowledge that the first set is contained in the second")
    common(sp)
    return p


COMMANDS = {
    "count-alg": _cmd_count_alg,
    "decompose": _cmd_decompose,
    "count-diff": _cmd_count_diff,
    "dimension": _cmd_dimension,
    "truncate": _cmd_truncate,
    "compare": _cmd_compare,
}


def _validate(args):
    if getattr(args, "K", 1) < 0:
        raise UsageError("--K must be nonnegative")
    if getattr(args, "order", 0) < 0:
        raise UsageError("--order must be nonnegative")
    if getattr(args, "degree", None) is not None and args.degree < 0:
        raise UsageError("--degree must be nonnegative")
    for name in ("file", "first", "second"):
        path = getattr(args, name, None)
        if path is not None and not Path(path).is_file():
            raise UsageError(f"no such file: {path}")
    _point(getattr(args, "point", None))


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        _validate(args)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return COMMANDS[args.command](args)
    except CountDiffError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
