"""Inclusion-constraint solving over union, intersection and conditional types.

``solve`` closes a constraint set under a rewrite system, recording lower and
upper bounds per type variable and binding topology variables by unification.
``least_solution`` then reads off the smallest assignment.

Accepted input form (``NotInductive`` otherwise):

* no intersection of arrow types on a left-hand side;
* an intersection on a left-hand side holds at most one variable, or the
  right-hand side is a variable;
* a union on a right-hand side has at most one member whose head is
  compatible with the left-hand side, unless both sides are ground.
"""

from __future__ import annotations

import itertools
import random
import sys
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import types as T
from .types import (Arrow, Base, Coll, Cond, Constraint, Inter, One, Substitution,
                    TVar, TopoSym, TopoVar, Type, Union, Zero, ZERO, apply_subst,
                    free_vars, ground_subtype, inter, is_empty, is_ground, normalize,
                    union)


class NotInductive(Exception):
    pass


class VerdictUnsolvable(Exception):
    """The constraint set has no solution; ``trace`` leads from an input
    constraint to the contradiction."""

    def __init__(self, constraint: Constraint, trace: list, reason: str):
        self.constraint = constraint
        self.trace = trace
        self.reason = reason
        super().__init__(f"unsolvable: {reason} ({constraint})")

    def report(self) -> str:
        lines = [f"unsolvable: {self.reason}"]
        lines += [f"  {i}. {c}" for i, c in enumerate(self.trace, 1)]
        return "\n".join(lines)


@dataclass
class SolvedForm:
    lower: dict = field(default_factory=lambda: defaultdict(list))
    upper: dict = field(default_factory=lambda: defaultdict(list))
    exclusions: dict = field(default_factory=lambda: defaultdict(list))
    topo: Substitution = field(default_factory=Substitution)
    residual: list = field(default_factory=list)
    variables: tuple = ()

    def guarded_lower_bounds(self, v: str) -> list:
        return [(b.guard, b.body) for b in self.lower.get(v, []) if isinstance(b, Cond)]

    def plain_lower_bounds(self, v: str) -> list:
        return [b for b in self.lower.get(v, []) if not isinstance(b, Cond)]

    def describe(self) -> str:
        lines = []
        for v in self.variables:
            lo = " | ".join(T.show_type(b) for b in self.lower.get(v, [])) or "0"
            hi = [T.show_type(b) for b in self.upper.get(v, [])]
            hi += [f"not {T.show_type(g)}" for g in self.exclusions.get(v, [])]
            lines.append(f"{v} >= {lo}" + (f" ; {v} <= " + ", ".join(hi) if hi else ""))
        for k, r in sorted(self.topo.topos.items()):
            lines.append(f"{k} = {r}")
        return "\n".join(lines)


class _Restart(Exception):
    pass


def _head(t: Type):
    if isinstance(t, Base):
        return ("base", t.name)
    if isinstance(t, Arrow):
        return ("arrow",)
    if isinstance(t, Coll):
        return ("coll",)
    return None


def _compatible(t: Type, cand: Type) -> bool:
    if isinstance(cand, (TVar, One)):
        return True
    ht, hc = _head(t), _head(cand)
    if hc is None or ht is None:
        return True
    if ht[0] != hc[0]:
        return False
    if ht[0] == "base":
        return ht == hc
    if ht[0] == "coll":
        a, b = t.topo, cand.topo
        return not (isinstance(a, TopoSym) and isinstance(b, TopoSym) and a != b)
    return True


class _Solver:
    def __init__(self, constraints: list, topo: Substitution):
        self.topo = topo
        self.form = SolvedForm(topo=topo)
        self.seen = set()
        self.parent = {}
        self.work = []
        for c in constraints:
            self.push(apply_subst(topo, c.lhs), apply_subst(topo, c.rhs), c.origin, None)

    def push(self, lhs, rhs, origin, parent):
        key = (normalize(lhs), normalize(rhs))
        if key in self.seen:
            return
        self.seen.add(key)
        self.parent[key] = parent
        self.work.append((key, origin))

    def trace(self, key) -> list:
        out = []
        while key is not None:
            out.append(Constraint(key[0], key[1], ""))
            key = self.parent.get(key)
        return list(reversed(out))

    def fail(self, key, origin, reason):
        raise VerdictUnsolvable(Constraint(key[0], key[1], origin), self.trace(key), reason)

    def run(self) -> SolvedForm:
        while self.work:
            key, origin = self.work.pop()
            self.step(key, origin)
        return self.form

    # bound bookkeeping -------------------------------------------------

    def add_lower(self, v: TVar, b: Type, key, origin):
        lows = self.form.lower[v.name]
        if b in lows:
            return
        lows.append(b)
        for u in list(self.form.upper[v.name]):
            self.push(b, u, origin, key)
        for g in list(self.form.exclusions[v.name]):
            self.push(inter(b, g), ZERO, origin, key)

    def add_upper(self, v: TVar, b: Type, key, origin):
        ups = self.form.upper[v.name]
        if b in ups:
            return
        ups.append(b)
        for l in list(self.form.lower[v.name]):
            self.push(l, b, origin, key)

    def add_exclusion(self, v: TVar, g: Type, key, origin):
        ex = self.form.exclusions[v.name]
        if g in ex:
            return
        ex.append(g)
        for l in list(self.form.lower[v.name]):
            self.push(inter(l, g), ZERO, origin, key)

    # rewriting ---------------------------------------------------------

    def step(self, key, origin):
        l, r = key
        P = lambda a, b: self.push(a, b, origin, key)  # noqa: E731
        if l == r or isinstance(l, Zero) or isinstance(r, One):
            return
        if isinstance(l, Union):
            for i in l.items:
                P(i, r)
            return
        if isinstance(r, Inter):
            for i in r.items:
                P(l, i)
            return
        if isinstance(l, Cond):
            return self.cond_lhs(l, r, key, origin, P)
        if isinstance(r, TVar):
            if isinstance(l, Inter) and r in l.items:
                return
            self.add_lower(r, l, key, origin)
            if isinstance(l, TVar):
                self.add_upper(l, r, key, origin)
            return
        if isinstance(l, TVar):
            if isinstance(r, Union) and l in r.items:
                return
            self.add_upper(l, r, key, origin)
            return
        if is_ground(l) and is_ground(r):
            if not ground_subtype(l, r):
                self.fail(key, origin, f"{T.show_type(l)} is not included in {T.show_type(r)}")
            return
        if isinstance(l, Inter):
            return self.inter_lhs(l, r, key, origin, P)
        if isinstance(r, Zero):
            if is_empty(l) is not True:
                self.fail(key, origin, f"{T.show_type(l)} is not empty")
            return
        if isinstance(r, Union):
            return self.union_rhs(l, r, key, origin, P)
        if isinstance(r, Cond):
            raise NotInductive(f"conditional type on the right of {l} <= {r}")
        if isinstance(l, One):
            self.fail(key, origin, f"1 is not included in {T.show_type(r)}")
        if isinstance(l, Coll) and isinstance(r, Coll):
            if l.topo != r.topo:
                try:
                    from .infer_strong import unify_topo
                    b = unify_topo(l.topo, r.topo)
                except Exception:
                    self.fail(key, origin, f"topology {l.topo} does not match {r.topo}")
                self.topo = b.compose(self.topo)
                raise _Restart
            P(l.elem, r.elem)
            return
        if isinstance(l, Arrow) and isinstance(r, Arrow):
            P(r.dom, l.dom)
            P(l.cod, r.cod)
            return
        if isinstance(l, Base) and isinstance(r, Base):
            if l != r:
                self.fail(key, origin, f"{l} is not {r}")
            return
        self.fail(key, origin, f"{T.show_type(l)} cannot be included in {T.show_type(r)}")

    def cond_lhs(self, l: Cond, r, key, origin, P):
        e = is_empty(l.guard)
        if e is True:
            return
        if e is False:
            return P(l.body, r)
        g = l.guard
        # b ? (a & b) <= a holds because base types are atomic
        if (isinstance(l.body, Base) and isinstance(g, Inter) and len(g.items) == 2
                and l.body in g.items):
            (a,) = [i for i in g.items if i != l.body]
            if a == r or (isinstance(r, Union) and a in r.items):
                return
        if isinstance(r, TVar):
            self.add_lower(r, l, key, origin)
            return
        if is_ground(l.body) and is_ground(r):
            if ground_subtype(l.body, r):
                return
            P(g, ZERO)  # the rule may never fire
            return
        if is_empty(l.body) is False and isinstance(normalize(inter(l.body, r)), Zero):
            P(g, ZERO)  # body and r cannot share a value
            return
        P(l.body, r)

    def inter_lhs(self, l: Inter, r, key, origin, P):
        vs = [i for i in l.items if isinstance(i, TVar)]
        rest = [i for i in l.items if not isinstance(i, TVar)]
        if any(isinstance(i, Arrow) for i in rest) and len(rest) > 1:
            raise NotInductive(f"intersection of arrow types on the left: {l}")
        if r in l.items:
            return
        g = inter(*rest) if rest else T.ONE
        if len(vs) != 1:
            if rest and is_ground(g) and is_ground(r) and ground_subtype(g, r):
                return
            raise NotInductive(f"intersection with {len(vs)} variables on the left: {l}")
        (a,) = vs
        if isinstance(r, Zero):
            if rest:
                self.add_exclusion(a, g, key, origin)
            else:
                self.add_upper(a, ZERO, key, origin)
            return
        if is_ground(g) and is_ground(r):
            if ground_subtype(g, r):
                return
            if isinstance(normalize(inter(g, r)), Zero):
                self.add_exclusion(a, g, key, origin)
                return
        elif isinstance(normalize(inter(g, r)), Zero) and _head(r) is not None:
            self.add_exclusion(a, g, key, origin)
            return
        if rest:
            P(g, r)  # a & g <= g <= r
            return
        raise NotInductive(f"cannot decompose {l} <= {r}")

    def union_rhs(self, l, r: Union, key, origin, P):
        if l in r.items:
            return
        if isinstance(l, Base) and any(i == l for i in r.items):
            return
        cands = [i for i in r.items if _compatible(l, i)]
        if not cands:
            self.fail(key, origin, f"{T.show_type(l)} fits no member of {T.show_type(r)}")
        if len(cands) == 1:
            return P(l, cands[0])
        structural = [i for i in cands if not isinstance(i, TVar)]
        if len(structural) == 1 and is_ground(l) and is_ground(structural[0]) \
                and ground_subtype(l, structural[0]):
            return
        raise NotInductive(f"ambiguous union on the right: {T.show_type(l)} <= {T.show_type(r)}")


def _variables(constraints) -> tuple:
    names = []
    for c in constraints:
        for v in sorted(free_vars(c), key=lambda x: x.name):
            if isinstance(v, TVar) and v.name not in names:
                names.append(v.name)
    return tuple(names)


def solve(constraints: Iterable[Constraint]):
    """Returns a :class:`SolvedForm` or a :class:`VerdictUnsolvable`."""
    constraints = list(constraints)
    topo = Substitution()
    while True:
        s = _Solver(constraints, topo)
        try:
            form = s.run()
        except _Restart:
            topo = s.topo
            continue
        except VerdictUnsolvable as v:
            return v
        form.variables = _variables(constraints)
        return form


def solve_or_raise(constraints) -> SolvedForm:
    res = solve(constraints)
    if isinstance(res, VerdictUnsolvable):
        raise res
    return res


# -- least solution -----------------------------------------------------------

def _sccs(nodes, edges):
    """Tarjan.  Returns (node -> representative, components); components come
    out dependencies-first and the representative is the member listed first
    in ``nodes``."""
    index, low, stack, on, rep, comps = {}, {}, [], set(), {}, []
    order = {n: i for i, n in enumerate(nodes)}
    counter = itertools.count()

    def visit(v):
        index[v] = low[v] = next(counter)
        stack.append(v)
        on.add(v)
        for w in edges.get(v, ()):
            if w not in index:
                visit(w)
                low[v] = min(low[v], low[w])
            elif w in on:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = []
            while True:
                w = stack.pop()
                on.discard(w)
                comp.append(w)
                if w == v:
                    break
            comp.sort(key=lambda n: order.get(n, len(order)))
            for w in comp:
                rep[w] = comp[0]
            comps.append(comp)

    for n in nodes:
        if n not in index:
            visit(n)
    return rep, comps


@dataclass
class LeastSolution:
    subst: Substitution
    recursive: dict  # var name -> defining type (variable stays in place)
    free: tuple      # variables left universal

    def equations(self) -> list:
        out = []
        for v, t in self.recursive.items():
            out += [Constraint(TVar(v), t, "recursive"), Constraint(t, TVar(v), "recursive")]
        return out


def least_solution(f: SolvedForm, target_vars=None) -> Substitution:
    return least_solution_full(f, target_vars).subst


KLEENE_ROUNDS = 8


def least_solution_full(f: SolvedForm, target_vars=None) -> LeastSolution:
    """Least assignment meeting every lower bound.

    Variables in a cycle of inclusions are equal and collapse to one
    representative.  Variables without lower bounds stay universal.  The rest
    are computed component by component, iterating cyclic components from 0;
    a component that has not converged after ``KLEENE_ROUNDS`` rounds (it
    grows through a type constructor) is kept as a recursive binding.
    """
    names = list(f.variables)
    for k in list(f.lower) + list(f.upper):
        if k not in names:
            names.append(k)
    targets = names if target_vars is None else [
        v.name if isinstance(v, TVar) else v for v in target_vars]
    for n in targets:
        if n not in names:
            names.append(n)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 10_000))

    edges = {v: [b.name for b in f.lower.get(v, []) if isinstance(b, TVar)] for v in names}
    rep, _ = _sccs(names, edges)
    members = defaultdict(list)
    for v in names:
        members[rep[v]].append(v)
    heads = list(members)
    lbs = {h: [b for m in members[h] for b in f.lower.get(m, [])
               if not (isinstance(b, TVar) and rep.get(b.name, b.name) == h)]
           for h in heads}

    sol = {}
    for h in heads:
        if not lbs[h]:
            sol[h] = TVar(h)

    def sub(t):
        if isinstance(t, TVar):
            return sol.get(rep.get(t.name, t.name), t)
        if isinstance(t, (Base, Zero, One)):
            return t
        if isinstance(t, Arrow):
            return Arrow(sub(t.dom), sub(t.cod))
        if isinstance(t, Coll):
            return Coll(t.topo, sub(t.elem))
        if isinstance(t, Union):
            return union(*(sub(i) for i in t.items))
        if isinstance(t, Inter):
            return inter(*(sub(i) for i in t.items))
        if isinstance(t, Cond):
            return Cond(sub(t.body), sub(t.guard))
        raise TypeError(t)

    def compute(h):
        return normalize(union(*(sub(b) for b in lbs[h])))

    deps = {}
    for h in heads:
        if h in sol:
            continue
        ds = set()
        for b in lbs[h]:
            ds |= {rep.get(v.name, v.name) for v in free_vars(b) if isinstance(v, TVar)}
        deps[h] = [d for d in ds if d not in sol]
    _, comps = _sccs([h for h in heads if h not in sol], deps)

    recursive = {}
    for comp in comps:
        if len(comp) == 1 and comp[0] not in deps[comp[0]]:
            sol[comp[0]] = compute(comp[0])
            continue
        for h in comp:
            sol[h] = ZERO
        for _ in range(KLEENE_ROUNDS):
            new = {h: compute(h) for h in comp}
            if all(new[h] == sol[h] for h in comp):
                break
            sol.update(new)
        else:
            for h in comp:
                sol[h] = TVar(h)
            for h in comp:
                recursive[h] = compute(h)

    types = {}
    for v in targets:
        t = normalize(apply_subst(f.topo, sol.get(rep.get(v, v), TVar(v))))
        if t != TVar(v):
            types[v] = t
    free = tuple(h for h in heads if sol[h] == TVar(h) and h not in recursive)
    recursive = {k: normalize(apply_subst(f.topo, v)) for k, v in recursive.items()}
    return LeastSolution(Substitution(types, dict(f.topo.topos)), recursive, free)


# -- ground checking -------------------------------------------------------------

class _MemberCache:
    def __init__(self, u: T.FiniteUniverse):
        self.u = u
        self.vals = u.values
        self.cache = {}

    def ext(self, t: Type) -> frozenset:
        t = normalize(t)
        if t not in self.cache:
            self.cache[t] = frozenset(i for i, v in enumerate(self.vals) if T.member(v, t))
        return self.cache[t]


_CACHES: dict = {}


def _contains_arrow(t) -> bool:
    if isinstance(t, Arrow):
        return True
    if isinstance(t, Coll):
        return _contains_arrow(t.elem)
    if isinstance(t, (Union, Inter)):
        return any(_contains_arrow(i) for i in t.items)
    if isinstance(t, Cond):
        return _contains_arrow(t.body) or _contains_arrow(t.guard)
    return False


def semantic_subtype(a: Type, b: Type, u: T.FiniteUniverse) -> bool:
    """``a <= b`` extensionally over ``u`` (structurally for arrows)."""
    a, b = normalize(a), normalize(b)
    if isinstance(a, Arrow) and isinstance(b, Arrow):
        return semantic_subtype(b.dom, a.dom, u) and semantic_subtype(a.cod, b.cod, u)
    if _contains_arrow(a) or _contains_arrow(b):
        return ground_subtype(a, b)
    cache = _CACHES.setdefault(u, _MemberCache(u))
    return cache.ext(a) <= cache.ext(b)


def check_solution(constraints: Iterable[Constraint], s: Substitution,
                   u: Optional[T.FiniteUniverse] = None) -> bool:
    u = u or T.FiniteUniverse()
    for c in constraints:
        l, r = apply_subst(s, c.lhs), apply_subst(s, c.rhs)
        if free_vars(l) or free_vars(r):
            raise ValueError(f"substitution does not ground {c}")
        if not semantic_subtype(l, r, u):
            return False
    return True


def ground_completions(f: SolvedForm, ls: LeastSolution, u: T.FiniteUniverse,
                       rng: random.Random, count: int = 100, depth: int = 1):
    """Sample ground substitutions extending ``ls`` by choosing the free
    variables from the ground-type lattice, keeping only choices that meet
    each free variable's own upper bounds and exclusions."""
    lattice = u.ground_types(depth)
    topo_vars = set()
    for c in f.lower.values():
        for b in c:
            topo_vars |= {v.name for v in free_vars(b) if isinstance(v, TopoVar)}
    for c in f.upper.values():
        for b in c:
            topo_vars |= {v.name for v in free_vars(b) if isinstance(v, TopoVar)}
    out, tries = [], 0
    free = list(ls.free)

    def fits(v, cand, full) -> bool:
        """Bounds of ``v`` that are already ground under ``full``."""
        for ub in f.upper.get(v, []):
            ub = apply_subst(full, ub)
            if is_ground(ub) and not semantic_subtype(cand, ub, u):
                return False
        for g in f.exclusions.get(v, []):
            g = apply_subst(full, g)
            if is_ground(g) and not semantic_subtype(inter(cand, g), ZERO, u):
                return False
        return True

    while len(out) < count and tries < count * 50:
        tries += 1
        pick_r = {v: TopoSym(rng.choice(T.TOPOLOGIES)) for v in topo_vars
                  if v not in ls.subst.topos}
        pick_t = {}
        for v in free:
            partial = _extend(ls.subst, pick_t, pick_r)
            cands = [c for c in lattice if fits(v, c, partial)]
            pick_t[v] = rng.choice(cands or lattice)
        full = _extend(ls.subst, pick_t, pick_r)
        if any(free_vars(apply_subst(full, TVar(v))) for v in f.variables):
            continue
        if all(fits(v, pick_t[v], full) for v in free):
            out.append(full)
    return out


def _extend(subst: Substitution, types: dict, topos: dict) -> Substitution:
    full = Substitution(types, topos).compose(subst)
    return Substitution({**full.types, **types}, {**full.topos, **topos})
