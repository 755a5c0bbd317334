"""Hindley/Milner inference with topology variables (strong dialect)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import syntax as S
from .types import (Arrow, BOOL, Base, Coll, FreshSupply, Substitution, TVar,
                    TopoVar, Type, TypeScheme, apply_subst,
                    canonical_scheme, free_vars, generalize, instantiate, mono,
                    seq_of, show_type, tc, UnknownConstant)


class TypeError_(Exception):
    """Base class for inference failures; ``expr`` is the smallest enclosing expression."""

    def __init__(self, msg: str, expr: Optional[S.Expr] = None):
        self.msg = msg
        self.expr = expr
        where = ""
        if expr is not None:
            loc = getattr(expr, "loc", None)
            where = f" at {loc[0]}:{loc[1]}" if loc else ""
            where += f" in {S.pretty(expr)}"
        super().__init__(msg + where)


class UnifyMismatch(TypeError_):
    pass


class OccursCheck(TypeError_):
    pass


class UnboundVariable(TypeError_):
    pass


def _bind_topo(r: TopoVar, other) -> Substitution:
    if other == r:
        return Substitution()
    return Substitution({}, {r.name: other})


def unify_topo(a, b) -> Substitution:
    if isinstance(a, TopoVar):
        return _bind_topo(a, b)
    if isinstance(b, TopoVar):
        return _bind_topo(b, a)
    if a == b:
        return Substitution()
    raise UnifyMismatch(f"topology {a} does not match {b}")


def unify(t1: Type, t2: Type) -> Substitution:
    """Most general unifier of two strong-fragment types."""
    if isinstance(t1, TVar) or isinstance(t2, TVar):
        v, other = (t1, t2) if isinstance(t1, TVar) else (t2, t1)
        if other == v:
            return Substitution()
        if v in free_vars(other):
            raise OccursCheck(f"{v} occurs in {show_type(other)}")
        return Substitution({v.name: other})
    if isinstance(t1, Base) and isinstance(t2, Base):
        if t1 == t2:
            return Substitution()
        raise UnifyMismatch(f"cannot unify {t1} with {t2}")
    if isinstance(t1, Arrow) and isinstance(t2, Arrow):
        s1 = unify(t1.dom, t2.dom)
        s2 = unify(apply_subst(s1, t1.cod), apply_subst(s1, t2.cod))
        return s2.compose(s1)
    if isinstance(t1, Coll) and isinstance(t2, Coll):
        s1 = unify_topo(t1.topo, t2.topo)
        s2 = unify(apply_subst(s1, t1.elem), apply_subst(s1, t2.elem))
        return s2.compose(s1)
    raise UnifyMismatch(f"cannot unify {show_type(t1)} with {show_type(t2)}")


@dataclass
class TraceStep:
    rule: str
    expr: str
    type: str


@dataclass
class _W:
    supply: FreshSupply = field(default_factory=FreshSupply)
    trace: Optional[list] = None

    def unify_at(self, a, b, e):
        try:
            return unify(a, b)
        except TypeError_ as err:
            raise type(err)(err.msg, e) from None

    def note(self, rule, e, t):
        if self.trace is not None:
            self.trace.append(TraceStep(rule, S.pretty(e), show_type(t)))

    def w(self, ctx: dict, e: S.Expr):
        if isinstance(e, S.Var):
            if e.name not in ctx:
                raise UnboundVariable(f"unbound variable {e.name}", e)
            t, _ = instantiate(ctx[e.name], self.supply)
            self.note("var-inst", e, t)
            return Substitution(), t
        if isinstance(e, S.Const):
            try:
                t, _ = instantiate(tc(e.name, "strong"), self.supply)
            except UnknownConstant:
                raise UnboundVariable(f"unknown constant {e.name}", e) from None
            self.note("const-inst", e, t)
            return Substitution(), t
        if isinstance(e, S.Lambda):
            a = self.supply.tvar()
            s1, t1 = self.w({**ctx, e.param: mono(a)}, e.body)
            t = Arrow(apply_subst(s1, a), t1)
            self.note("fun", e, t)
            return s1, t
        if isinstance(e, S.App):
            s1, t1 = self.w(ctx, e.fn)
            s2, t2 = self.w(_apply_ctx(s1, ctx), e.arg)
            b = self.supply.tvar()
            s3 = self.unify_at(apply_subst(s2, t1), Arrow(t2, b), e)
            s = s3.compose(s2).compose(s1)
            t = apply_subst(s3, b)
            self.note("app", e, t)
            return s, t
        if isinstance(e, S.Let):
            s1, t1 = self.w(ctx, e.bound)
            ctx1 = _apply_ctx(s1, ctx)
            sc = generalize(ctx1, t1)
            s2, t2 = self.w({**ctx1, e.name: sc}, e.body)
            self.note("let", e, t2)
            return s2.compose(s1), t2
        if isinstance(e, S.Trans):
            return self.trans(ctx, e)
        raise TypeError(f"not an expression: {e!r}")

    def trans(self, ctx: dict, e: S.Trans):
        tau, tau2, rho = self.supply.tvar(), self.supply.tvar(), self.supply.topo()
        s = Substitution()
        for rule in e.rules:
            p = S.desugar_direction(rule.pattern)
            cur = _apply_ctx(s, ctx)
            t_in = apply_subst(s, tau)
            local = {**cur, "self": mono(Coll(apply_subst(s, rho), t_in))}
            for x in p.variables():
                local[x] = mono(t_in)
            sg, tg = self.w(local, p.guard)
            s = sg.compose(s)
            s = self.unify_at(tg, BOOL, p.guard).compose(s)
            local = _apply_ctx(s, local)
            sr, tr = self.w(local, rule.replacement)
            s = sr.compose(s)
            s = self.unify_at(tr, seq_of(apply_subst(s, tau2)), rule.replacement).compose(s)
        r = apply_subst(s, rho)
        t = Arrow(Coll(r, apply_subst(s, tau)), Coll(r, apply_subst(s, tau2)))
        self.note("trans", e, t)
        return s, t


def _apply_ctx(s: Substitution, ctx: dict) -> dict:
    if not s:
        return ctx
    return {k: apply_subst(s, v) for k, v in ctx.items()}


def infer_w(ctx: dict, e: S.Expr, supply: Optional[FreshSupply] = None, trace=None):
    """Algorithm W; returns (substitution, type)."""
    return _W(supply or FreshSupply(), trace).w(ctx, e)


def infer_scheme(e: S.Expr, ctx: Optional[dict] = None, trace=None) -> TypeScheme:
    """Principal scheme of ``e`` with canonical variable names."""
    ctx = ctx or {}
    s, t = infer_w(ctx, e, trace=trace)
    return canonical_scheme(generalize(_apply_ctx(s, ctx), t))


def typecheck_strong(source: str, trace=None) -> TypeScheme:
    return infer_scheme(S.parse(source, "strong"), trace=trace)
