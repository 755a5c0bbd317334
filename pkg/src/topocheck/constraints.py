"""Constraint generation for the soft dialect, and the soft type-checker
built on top of it (generate, solve, present the least solution)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import solver as V
from . import syntax as S
from .infer_strong import UnboundVariable, TypeError_
from .types import (Arrow, BOOL, Base, Coll, Cond, Constraint, FreshSupply, Inter,
                    ONE, Substitution, TVar, Type, TypeScheme, Union, ZERO,
                    apply_subst, canonical_scheme, dedup, free_vars, generalize,
                    instantiate, inter, mono, normalize, seq_of, tc, union,
                    UnknownConstant)


class SchemeUnsolvable(TypeError_):
    def __init__(self, msg, expr=None, verdict: Optional[V.VerdictUnsolvable] = None):
        super().__init__(msg, expr)
        self.verdict = verdict


def comp(elements, tau: Type) -> Type:
    """Compatibility type of a pattern against content type ``tau``."""
    first, rest = elements[0], elements[1:]
    if not rest:
        if first.star:
            return inter(tau, Base(first.base)) if first.base else ONE
        return inter(tau, Base(first.base)) if first.base else tau
    tail = comp(rest, tau)
    if first.base is None:
        return tail
    return Cond(inter(tau, Base(first.base)), tail)


def gamma(elements, tau: Type) -> dict:
    """Types of the pattern variables, given the content type ``tau``."""
    out = {}
    for el in elements:
        t = inter(tau, Base(el.base)) if el.base else tau
        out[el.var] = seq_of(t) if el.star else t
    return out


def _origin(e: S.Expr, rule: str) -> str:
    loc = getattr(e, "loc", None)
    return f"{loc[0]}:{loc[1]} {rule}" if loc else rule


@dataclass
class _Gen:
    refine_catch_all: bool = False
    supply: FreshSupply = field(default_factory=FreshSupply)

    def gen(self, ctx: dict, e: S.Expr):
        """Returns (type, constraint list)."""
        if isinstance(e, S.Var):
            if e.name not in ctx:
                raise UnboundVariable(f"unbound variable {e.name}", e)
            t, cs = instantiate(ctx[e.name], self.supply)
            return t, cs
        if isinstance(e, S.Const):
            try:
                t, cs = instantiate(tc(e.name, "soft"), self.supply)
            except UnknownConstant:
                raise UnboundVariable(f"unknown constant {e.name}", e) from None
            return t, [Constraint(c.lhs, c.rhs, _origin(e, "const")) for c in cs]
        if isinstance(e, S.Lambda):
            a = self.supply.tvar()
            t, cs = self.gen({**ctx, e.param: mono(a)}, e.body)
            return Arrow(a, t), cs
        if isinstance(e, S.App):
            t1, c1 = self.gen(ctx, e.fn)
            t2, c2 = self.gen(ctx, e.arg)
            t3, t4 = self.supply.tvar(), self.supply.tvar()
            o = _origin(e, "app")
            return t4, c1 + c2 + [Constraint(t2, t3, o), Constraint(t1, Arrow(t3, t4), o)]
        if isinstance(e, S.Let):
            t1, c1 = self.gen(ctx, e.bound)
            verdict = V.solve(c1)
            if isinstance(verdict, V.VerdictUnsolvable):
                raise SchemeUnsolvable(f"cannot generalise {e.name}: {verdict.reason}",
                                       e.bound, verdict)
            sc = generalize(ctx, t1, dedup(c1))
            t2, c2 = self.gen({**ctx, e.name: sc}, e.body)
            return t2, c1 + c2
        if isinstance(e, S.Trans):
            return self.trans(ctx, e)
        raise TypeError(f"not an expression: {e!r}")

    def trans(self, ctx: dict, e: S.Trans):
        tau, tau2, rho = self.supply.tvar(), self.supply.tvar(), self.supply.topo()
        cs = []
        catch_all = False
        for rule in e.rules:
            p = S.desugar_direction(rule.pattern)
            p = S.Pattern(p.elements, S.locate(p.guard, rule.pattern.guard.loc or e.loc or (1, 1)))
            catch_all = catch_all or p.is_catch_all
            local = {**ctx, "self": mono(Coll(rho, tau))}
            local.update({k: mono(v) for k, v in gamma(p.elements, tau).items()})
            tg, cg = self.gen(local, p.guard)
            tr, cr = self.gen(local, rule.replacement)
            ti = self.supply.tvar()
            cs += cg + cr
            cs.append(Constraint(tg, BOOL, _origin(p.guard, "trans-guard")))
            cs.append(Constraint(tr, seq_of(ti), _origin(rule.replacement, "trans-rhs")))
            cs.append(Constraint(Cond(ti, comp(p.elements, tau)), tau2, _origin(e, "trans")))
        if not (self.refine_catch_all and catch_all):
            cs.append(Constraint(tau, tau2, _origin(e, "trans")))
        return Arrow(Coll(rho, tau), Coll(rho, tau2)), cs


def generate(ctx: dict, e: S.Expr, refine_catch_all: bool = False,
             supply: Optional[FreshSupply] = None):
    """Type and constraint set of ``e`` before solving."""
    g = _Gen(refine_catch_all, supply or FreshSupply())
    t, cs = g.gen(ctx, e)
    return t, dedup(cs)


def generate_scheme(e: S.Expr, refine_catch_all: bool = False) -> TypeScheme:
    t, cs = generate({}, e, refine_catch_all)
    return generalize({}, t, cs)


# -- presentation of solved schemes -------------------------------------------

def _drop_subsumed(t: Type) -> Type:
    """``a | (b ? (a & b))`` is ``a`` when b is a base type."""
    if not isinstance(t, Union):
        return t
    keep = []
    for i in t.items:
        if (isinstance(i, Cond) and isinstance(i.body, Base) and isinstance(i.guard, Inter)
                and i.body in i.guard.items
                and any(x in t.items for x in i.guard.items if x != i.body)):
            continue
        keep.append(i)
    return union(*keep)


def _present(t: Type, positive: bool = True) -> Type:
    if isinstance(t, Arrow):
        return Arrow(_present(t.dom, not positive), _present(t.cod, positive))
    if isinstance(t, Coll):
        return Coll(t.topo, _present(t.elem, positive))
    if isinstance(t, Union):
        return normalize(_drop_subsumed(union(*(_present(i, positive) for i in t.items))))
    if isinstance(t, Inter):
        return normalize(inter(*(_present(i, positive) for i in t.items)))
    if isinstance(t, Cond):
        body = _present(t.body, positive)
        if positive and isinstance(t.guard, TVar):
            return body  # b ? a <= b
        return Cond(body, t.guard)
    return t


def _polarities(t: Type, positive: bool, acc: dict):
    if isinstance(t, TVar):
        acc.setdefault(t.name, set()).add(positive)
    elif isinstance(t, Arrow):
        _polarities(t.dom, not positive, acc)
        _polarities(t.cod, positive, acc)
    elif isinstance(t, Coll):
        _polarities(t.elem, positive, acc)
    elif isinstance(t, (Union, Inter)):
        for i in t.items:
            _polarities(i, positive, acc)
    elif isinstance(t, Cond):
        _polarities(t.body, positive, acc)
        _polarities(t.guard, positive, acc)


def _residual(body: Type, form, ls, repl) -> list:
    """Constraints on the variables left universal in ``body``."""
    names = {v.name for v in free_vars(body) if isinstance(v, TVar)}
    residual = []
    for v in ls.free:
        if v not in names or v in repl:
            continue
        for u in form.upper.get(v, []):
            if isinstance(u, TVar):
                continue
            u2 = normalize(apply_subst(ls.subst, u))
            if u2 == ONE or (isinstance(u2, Union) and TVar(v) in u2.items):
                continue
            residual.append(Constraint(TVar(v), u2, "residual"))
        for g in form.exclusions.get(v, []):
            residual.append(Constraint(inter(TVar(v), apply_subst(ls.subst, g)), ZERO, "residual"))
    for v, d in ls.recursive.items():
        if v in names:
            residual += [Constraint(TVar(v), d, "recursive"), Constraint(d, TVar(v), "recursive")]
    return dedup(residual)


@dataclass
class SoftResult:
    scheme: TypeScheme
    raw_type: Type
    constraints: list
    solved: V.SolvedForm
    least: V.LeastSolution


def solve_scheme(t: Type, cs: list) -> SoftResult:
    form = V.solve(cs)
    if isinstance(form, V.VerdictUnsolvable):
        raise SchemeUnsolvable(form.reason, None, form)
    ls = V.least_solution_full(form)
    # parameters used only as functions take their (single) arrow upper bound
    repl = {}
    for v in ls.free:
        ups = [u for u in form.upper.get(v, []) if not isinstance(u, TVar)]
        if len(ups) == 1 and isinstance(ups[0], Arrow) and not form.exclusions.get(v):
            repl[v] = ups[0]
    body = apply_subst(ls.subst, t)
    for _ in range(len(repl) + 1):
        nxt = apply_subst(ls.subst, apply_subst(Substitution(repl), body))
        if nxt == body:
            break
        body = nxt
    body = _present(normalize(body))
    residual = _residual(body, form, ls, repl)
    # a variable seen only in positive positions, and unconstrained, is 0 at best
    protected = set()
    for c in residual:
        if c.origin == "recursive":
            protected |= {v.name for v in free_vars(c)}
        else:
            protected |= {v.name for v in free_vars(c.rhs)}
    pol = {}
    _polarities(body, True, pol)
    zero = {v: ZERO for v, ps in pol.items() if ps == {True} and v not in protected}
    if zero:
        body = _present(normalize(apply_subst(Substitution(zero), body)))
        residual = _residual(body, form, ls, repl)
    sc = canonical_scheme(generalize({}, body, dedup(residual)))
    return SoftResult(sc, t, cs, form, ls)


def typecheck_soft_expr(e: S.Expr, refine_catch_all: bool = False) -> SoftResult:
    t, cs = generate({}, e, refine_catch_all)
    return solve_scheme(t, cs)


def typecheck_soft(source: str, refine_catch_all: bool = False) -> TypeScheme:
    return typecheck_soft_expr(S.parse(source, "soft"), refine_catch_all).scheme
