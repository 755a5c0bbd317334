"""Command-line entry point."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

from . import constraints as C
from . import optimizer as O
from . import runtime as R
from . import solver as V
from . import syntax as S
from .corpus import check_corpus
from .infer_strong import TypeError_, infer_scheme
from .types import (constraint_from_json, constraint_to_json, show_type,
                    type_from_json, type_to_json)
from .values import show_value


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _diag(msg: str) -> None:
    print(msg, file=sys.stderr)


USER_ERRORS = (S.SyntaxError_, S.DialectError, TypeError_, V.VerdictUnsolvable,
               V.NotInductive)


def cmd_typecheck(a) -> int:
    dialect = "strong" if a.strong else "soft"
    trace = [] if a.trace and dialect == "strong" else None
    try:
        e = S.parse(_read(a.file), dialect)
        if dialect == "strong":
            sc = infer_scheme(e, trace=trace)
        else:
            sc = C.typecheck_soft_expr(e, a.refine_catchall).scheme
    except USER_ERRORS as err:
        _diag(f"type error: {err}")
        return 1
    if a.json:
        out = {"scheme": type_to_json(sc)}
        if trace is not None:
            out["trace"] = [asdict(t) for t in trace]
        print(json.dumps(out, indent=2))
        return 0
    print(sc)
    if trace is not None:
        for t in trace:
            print(f"  {t.rule:<10} {t.expr}  :  {t.type}")
    return 0


def cmd_constraints(a) -> int:
    try:
        e = S.parse(_read(a.file), "soft")
        t, cs = C.generate({}, e, a.refine_catchall)
    except USER_ERRORS as err:
        _diag(f"error: {err}")
        return 1
    if a.json:
        print(json.dumps({"type": type_to_json(t),
                          "constraints": [constraint_to_json(c) for c in cs]}, indent=2))
    else:
        print(f"type: {show_type(t)}")
        for c in cs:
            print(f"  {c}    [{c.origin}]")
    return 0


def cmd_solve(a) -> int:
    data = json.loads(_read(a.file))
    items = data["constraints"] if isinstance(data, dict) else data
    cs = [constraint_from_json(c) for c in items]
    try:
        res = V.solve(cs)
    except V.NotInductive as err:
        _diag(f"not in inductive form: {err}")
        return 1
    if isinstance(res, V.VerdictUnsolvable):
        print(res.report())
        return 1
    print(res.describe())
    ls = V.least_solution_full(res)
    print(f"least solution: {ls.subst}")
    for v, t in ls.recursive.items():
        print(f"recursive: {v} = {show_type(t)}")
    if isinstance(data, dict) and "type" in data:
        t = type_from_json(data["type"])
        print(f"type: {show_type(C.solve_scheme(t, cs).scheme.body)}")
    return 0


def cmd_run(a) -> int:
    try:
        e = S.parse(_read(a.file), "soft")
    except S.SyntaxError_ as err:
        _diag(f"syntax error: {err}")
        return 1
    res = R.run(e, fuel=a.fuel, fix=a.fix)
    if isinstance(res, R.Err):
        print(res)
        return R.EXIT_CODES[res]
    print(show_value(res))
    return 0


def cmd_optimize(a) -> int:
    try:
        e = S.parse(_read(a.file), "soft")
        tau = S.parse_type(a.content_type)
    except S.SyntaxError_ as err:
        _diag(f"syntax error: {err}")
        return 1
    if not isinstance(e, S.Trans):
        _diag("optimize expects a file holding a single transformation")
        return 1
    report = []
    out = O.optimize(e, tau, report)
    print(S.pretty(out))
    for line in report:
        print(line)
    return 0


def cmd_check_corpus(a) -> int:
    reports = check_corpus(a.dir, a.fuel)
    width = max([len(r.name) for r in reports] + [4])
    print(f"{'file':<{width}}  dialect  result  member  outcome")
    for r in reports:
        member = {None: "-", True: "yes", False: "NO"}[r.member]
        verdict = "pass" if r.passed else "FAIL"
        detail = r.error or r.outcome
        print(f"{r.name:<{width}}  {r.dialect:<7}  {verdict:<6}  {member:<6}  {detail}")
    failed = sum(not r.passed for r in reports)
    print(f"{len(reports) - failed}/{len(reports)} passed")
    return 0 if failed == 0 and reports else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="topocheck", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("typecheck", help="infer the type scheme of a program")
    g = t.add_mutually_exclusive_group(required=True)
    g.add_argument("--strong", action="store_true")
    g.add_argument("--soft", action="store_true")
    t.add_argument("--refine-catchall", action="store_true")
    t.add_argument("--trace", action="store_true", help="strong: print the derivation steps")
    t.add_argument("--json", action="store_true", help="print the scheme (and trace) as JSON")
    t.add_argument("file")
    t.set_defaults(fn=cmd_typecheck)

    c = sub.add_parser("constraints", help="dump generated constraints (soft dialect)")
    c.add_argument("--json", action="store_true")
    c.add_argument("--refine-catchall", action="store_true")
    c.add_argument("file")
    c.set_defaults(fn=cmd_constraints)

    s = sub.add_parser("solve", help="solve a JSON constraint dump")
    s.add_argument("file")
    s.set_defaults(fn=cmd_solve)

    r = sub.add_parser("run", help="evaluate a program")
    r.add_argument("--fuel", type=int, default=None)
    r.add_argument("--fix", action="store_true")
    r.add_argument("file")
    r.set_defaults(fn=cmd_run)

    o = sub.add_parser("optimize", help="dead-rule and type-test elimination")
    o.add_argument("--content-type", required=True)
    o.add_argument("file")
    o.set_defaults(fn=cmd_optimize)

    k = sub.add_parser("check-corpus", help="type, run and check every corpus program")
    k.add_argument("--fuel", type=int, default=None)
    k.add_argument("dir")
    k.set_defaults(fn=cmd_check_corpus)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
