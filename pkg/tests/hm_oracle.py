"""A second, deliberately naive strong-dialect typer used to cross-check W.

It collects every equation first and solves them at the end with a
worklist unifier. ``let`` is handled by substituting the bound expression
into the body (after checking the bound expression on its own), which gives
the same typings as let-polymorphism.
"""

from __future__ import annotations

from topocheck import syntax as S
from topocheck.types import (BOOL, Arrow, Coll, FreshSupply, Substitution, TopoVar, TVar,
                             apply_subst, canonical_scheme, free_vars, generalize,
                             instantiate, seq_of, tc)


class Untypable(Exception):
    pass


def substitute(e: S.Expr, x: str, v: S.Expr) -> S.Expr:
    if isinstance(e, S.Var):
        return v if e.name == x else e
    if isinstance(e, S.Const):
        return e
    if isinstance(e, S.Lambda):
        return e if e.param == x else S.Lambda(e.param, substitute(e.body, x, v))
    if isinstance(e, S.App):
        return S.App(substitute(e.fn, x, v), substitute(e.arg, x, v))
    if isinstance(e, S.Let):
        body = e.body if e.name == x else substitute(e.body, x, v)
        return S.Let(e.name, substitute(e.bound, x, v), body)
    rules = []
    for r in e.rules:
        if x in r.pattern.variables() or x == "self":
            rules.append(r)
            continue
        p = S.Pattern(r.pattern.elements, substitute(r.pattern.guard, x, v))
        rules.append(S.Rule(p, substitute(r.replacement, x, v)))
    return S.Trans(tuple(rules))


def _collect(ctx: dict, e: S.Expr, fresh: FreshSupply, eqs: list):
    if isinstance(e, S.Var):
        if e.name not in ctx:
            raise Untypable(e.name)
        return ctx[e.name]
    if isinstance(e, S.Const):
        return instantiate(tc(e.name, "strong"), fresh)[0]
    if isinstance(e, S.Lambda):
        a = fresh.tvar()
        return Arrow(a, _collect({**ctx, e.param: a}, e.body, fresh, eqs))
    if isinstance(e, S.App):
        f = _collect(ctx, e.fn, fresh, eqs)
        a = _collect(ctx, e.arg, fresh, eqs)
        b = fresh.tvar()
        eqs.append((f, Arrow(a, b)))
        return b
    if isinstance(e, S.Let):
        _collect(ctx, e.bound, fresh, eqs)
        return _collect(ctx, substitute(e.body, e.name, e.bound), fresh, eqs)
    tau, tau2, rho = fresh.tvar(), fresh.tvar(), fresh.topo()
    for r in e.rules:
        p = S.desugar_direction(r.pattern)
        local = {**ctx, "self": Coll(rho, tau), **{x: tau for x in p.variables()}}
        eqs.append((_collect(local, p.guard, fresh, eqs), BOOL))
        eqs.append((_collect(local, r.replacement, fresh, eqs), seq_of(tau2)))
    return Arrow(Coll(rho, tau), Coll(rho, tau2))


def _solve(eqs: list) -> Substitution:
    s = Substitution()
    work = list(eqs)
    while work:
        a, b = work.pop()
        a, b = apply_subst(s, a), apply_subst(s, b)
        if a == b:
            continue
        if isinstance(b, TVar):
            a, b = b, a
        if isinstance(a, TVar):
            if a in free_vars(b):
                raise Untypable("occurs")
            s = Substitution({a.name: b}).compose(s)
        elif isinstance(a, Arrow) and isinstance(b, Arrow):
            work += [(a.dom, b.dom), (a.cod, b.cod)]
        elif isinstance(a, Coll) and isinstance(b, Coll):
            ra, rb = a.topo, b.topo
            if ra != rb:
                if isinstance(rb, TopoVar):
                    ra, rb = rb, ra
                if not isinstance(ra, TopoVar):
                    raise Untypable("topology")
                s = Substitution({}, {ra.name: rb}).compose(s)
            work.append((a.elem, b.elem))
        else:
            raise Untypable(f"{a} vs {b}")
    return s


def oracle_scheme(e: S.Expr):
    eqs: list = []
    fresh = FreshSupply()
    t = _collect({}, e, fresh, eqs)
    s = _solve(eqs)
    return canonical_scheme(generalize({}, apply_subst(s, t)))
