"""Seeded random generators shared by the property and acceptance tests."""

from __future__ import annotations

import random
from functools import lru_cache

from topocheck import syntax as S
from topocheck.types import (Arrow, BOOL, Coll, Cond, Constraint, FLOAT, INT,
                             ONE, STRING, TopoSym, TopoVar, TVar, ZERO, FiniteUniverse,
                             inter, member, union)
from topocheck.values import Collection

BASES = [INT, BOOL, FLOAT, STRING]
TOPOS = ["set", "bag", "seq", "grid"]


def ground_type(rng: random.Random, depth: int = 2):
    k = rng.randrange(8 if depth > 0 else 5)
    if k == 0:
        return rng.choice([ZERO, ONE])
    if k in (1, 2):
        return rng.choice(BASES)
    if k == 3:
        return union(rng.choice(BASES), rng.choice(BASES))
    if k == 4:
        return inter(rng.choice(BASES + [union(INT, BOOL)]), rng.choice(BASES + [union(INT, FLOAT)]))
    if k == 5:
        return Cond(ground_type(rng, depth - 1), ground_type(rng, depth - 1))
    if k == 6:
        return Coll(TopoSym(rng.choice(TOPOS)), ground_type(rng, depth - 1))
    return union(ground_type(rng, depth - 1), ground_type(rng, depth - 1))


def strong_type(rng: random.Random, depth: int = 3, nvars: int = 3):
    """A type of the strong fragment over variables a0..a{n-1} and topology r0/r1."""
    k = rng.randrange(6 if depth > 0 else 2)
    if k == 0:
        return rng.choice(BASES[:2])
    if k == 1:
        return TVar(f"a{rng.randrange(nvars)}")
    if k in (2, 3):
        return Arrow(strong_type(rng, depth - 1, nvars), strong_type(rng, depth - 1, nvars))
    topo = TopoVar(f"r{rng.randrange(2)}") if rng.random() < 0.5 else TopoSym(rng.choice(TOPOS))
    return Coll(topo, strong_type(rng, depth - 1, nvars))


def inductive_system(rng: random.Random, nvars: int = 3, size: int = 5) -> list:
    """A small constraint set inside the solver's accepted form."""
    vs = [TVar(n) for n in "abc"[:nvars]]
    small = [INT, BOOL, FLOAT, union(INT, BOOL), union(INT, FLOAT)]
    out = []
    for _ in range(rng.randint(2, size)):
        k = rng.randrange(8)
        a, b = rng.choice(vs), rng.choice(vs)
        if k == 0:
            out.append(Constraint(rng.choice(small), a, "fuzz"))
        elif k == 1 and a != b:
            out.append(Constraint(a, b, "fuzz"))
        elif k == 2:
            out.append(Constraint(a, rng.choice(small + [ONE]), "fuzz"))
        elif k == 3:
            g = rng.choice(BASES[:3])
            out.append(Constraint(Cond(rng.choice(BASES[:3]), inter(a, g)), b, "fuzz"))
        elif k == 4:
            out.append(Constraint(inter(a, rng.choice(BASES[:3])), b, "fuzz"))
        elif k == 5:
            t = rng.choice(["set", "seq"])
            out.append(Constraint(Coll(TopoSym(t), rng.choice(small)), a, "fuzz"))
        elif k == 6:
            out.append(Constraint(a, Coll(TopoVar("r"), rng.choice(small)), "fuzz"))
        else:
            out.append(Constraint(inter(a, rng.choice(BASES[:3])), ZERO, "fuzz"))
    return out


def elem(rng: random.Random, name: str, last: bool):
    k = rng.randrange(6 if last else 4)
    if k < 2:
        return S.Elem(name)
    if k < 4:
        return S.Elem(name, rng.choice(["int", "bool", "float", "string"]))
    if k == 4:
        return S.Elem(name, None, True)
    return S.Elem(name, rng.choice(["int", "bool", "float"]), True)


def pattern(rng: random.Random, max_len: int = 3) -> S.Pattern:
    n = rng.randint(1, max_len)
    names = [f"x{i}" for i in range(n)]
    return S.Pattern(tuple(elem(rng, nm, i == n - 1) for i, nm in enumerate(names)))


@lru_cache(maxsize=None)
def _universe_members(t) -> tuple:
    u = FiniteUniverse()
    return tuple(v for v in u.values if not isinstance(v, Collection) and member(v, t))


def conforming_collection(rng: random.Random, tau, topo: str, max_size: int = 6):
    pool = _universe_members(tau)
    if not pool:
        return Collection.empty(topo)
    vals = [rng.choice(pool) for _ in range(rng.randint(0, max_size))]
    if topo == "grid":
        width = rng.randint(1, 3)
        return Collection.grid({(i % width, i // width): v for i, v in enumerate(vals)})
    return Collection.from_values(topo, vals)


def transformation(rng: random.Random, grid_safe: bool = False) -> S.Trans:
    rules = []
    for _ in range(rng.randint(1, 3)):
        p = pattern(rng, 2)
        names = [S.Var(v) for v in p.variables()]
        if grid_safe or rng.random() < 0.5:
            repl = names[::-1]
        else:
            repl = names + [S.Const("1")]
        guard = S.TRUE
        if rng.random() < 0.3 and len(names) == 2 and not any(e.star for e in p.elements):
            guard = S.app(S.Const(">"), names[0], names[1])
        body = S.seq_literal(repl)
        if any(e.star for e in p.elements):
            body = S.Var(p.elements[-1].var) if len(names) == 1 else body
        rules.append(S.Rule(S.Pattern(p.elements, guard), body))
    return S.Trans(tuple(rules))


LITERALS = ["0", "1", "7", "-3", "2.5", "true", "false", '"ab"', "empty_seq",
            "empty_set", "empty_bag", "empty_grid"]
OPERATORS = ["+", "-", "*", ">", "<", "=", "::", "&&", "||", "mod", "if",
             "nord", "-est", "est_nb"]


def expr(rng: random.Random, depth: int = 3, scope: tuple = (), strong: bool = False) -> S.Expr:
    """Random (not necessarily well-typed) AST; ``strong`` keeps to the strong grammar."""
    k = rng.randrange(7 if depth > 0 else 2)
    if k == 0 or (k == 1 and not scope):
        return S.Const(rng.choice(LITERALS))
    if k == 1:
        return S.Var(rng.choice(scope))
    if k == 2:
        x = f"v{len(scope)}"
        return S.Lambda(x, expr(rng, depth - 1, scope + (x,), strong))
    if k == 3:
        return S.App(expr(rng, depth - 1, scope, strong), expr(rng, depth - 1, scope, strong))
    if k == 4:
        op = rng.choice(OPERATORS)
        args = [expr(rng, depth - 1, scope, strong) for _ in range(rng.randint(0, 2))]
        return S.app(S.Const(op), *args)
    if k == 5:
        x = f"v{len(scope)}"
        return S.Let(x, expr(rng, depth - 1, scope, strong),
                     expr(rng, depth - 1, scope + (x,), strong))
    return trans_expr(rng, depth - 1, scope, strong)


def trans_expr(rng, depth, scope, strong):
    rules = []
    n = rng.randint(1, 3)
    for i in range(n):
        last = i == n - 1
        if strong and last:
            p = S.Pattern((S.Elem("y0"),))
        else:
            size = rng.randint(1, 3)
            els = []
            for j in range(size):
                e = elem(rng, f"y{j}", j == size - 1)
                if strong:
                    e = S.Elem(e.var)
                if j and rng.random() < 0.2:
                    e = S.Elem(e.var, e.base, e.star, rng.choice(["nord", "est", "-est"]))
                els.append(e)
            guard = S.TRUE
            inner = scope + tuple(e.var for e in els)
            if rng.random() < 0.4:
                guard = expr(rng, max(depth - 1, 0), inner, strong)
            p = S.Pattern(tuple(els), guard)
        inner = scope + tuple(p.variables()) + ("self",)
        rules.append(S.Rule(p, expr(rng, max(depth - 1, 0), inner, strong)))
    return S.Trans(tuple(rules))


def abstract(rng: random.Random, t, prefix: str, binding: dict):
    """Replace random subterms of ``t`` by fresh variables named ``prefix``N,
    recording what each variable stands for in ``binding``."""
    if rng.random() < 0.25:
        v = TVar(f"{prefix}{len(binding)}")
        binding[v.name] = t
        return v
    if isinstance(t, Arrow):
        return Arrow(abstract(rng, t.dom, prefix, binding), abstract(rng, t.cod, prefix, binding))
    if isinstance(t, Coll):
        topo = t.topo
        if rng.random() < 0.3:
            topo = TopoVar(f"{prefix}r{len(binding)}")
            binding[topo] = t.topo
        return Coll(topo, abstract(rng, t.elem, prefix, binding))
    return t


def unifiable_pair(rng: random.Random):
    """Two abstractions of one strong type plus a unifier for them."""
    from topocheck.types import Substitution
    c = strong_type(rng, 3)
    ba, bb = {}, {}
    a, b = abstract(rng, c, "p", ba), abstract(rng, c, "q", bb)
    types = {k: v for k, v in {**ba, **bb}.items() if isinstance(k, str)}
    topos = {k.name: v for k, v in {**ba, **bb}.items() if isinstance(k, TopoVar)}
    return a, b, Substitution(types, topos)
