"""Reference interpreter: call-by-value evaluation with a fuel budget.

Evaluation never raises for program errors.  The public entry points return
either a value or one of the :class:`Err` outcomes.
"""

from __future__ import annotations

import enum
import json
import os
import sys
from dataclasses import dataclass
from typing import Iterator, Optional

from . import syntax as S
from .values import (Builtin, Closure, Collection, DIRECTIONS, TransValue,
                     is_function, value_key, value_tag, values_equal)

DEFAULT_FUEL = 100_000


def default_fuel() -> int:
    try:
        return int(os.environ.get("TOPOCHECK_FUEL", DEFAULT_FUEL))
    except ValueError:
        return DEFAULT_FUEL


class Err(enum.Enum):
    WRONG = "Wrong"
    SHAPE_ERR = "ShapeErr"
    OUT_OF_FUEL = "OutOfFuel"

    def __str__(self):
        return self.value


EXIT_CODES = {Err.WRONG: 1, Err.SHAPE_ERR: 2, Err.OUT_OF_FUEL: 3}


class _Abort(Exception):
    def __init__(self, outcome: Err, why: str = ""):
        super().__init__(f"{outcome}: {why}")
        self.outcome = outcome
        self.why = why


def _wrong(why):
    raise _Abort(Err.WRONG, why)


@dataclass(frozen=True)
class Match:
    rule: int
    path: tuple
    bindings: dict


_ARITY = {"::": 2, "&&": 2, "||": 2, "mod": 2, ">": 2, "<": 2, "=": 2,
          "+": 2, "-": 2, "*": 2, "if": 3}
for _d in DIRECTIONS:
    _ARITY[_d] = 2
    _ARITY[_d + "_nb"] = 3

_EMPTY = {"empty_seq": "seq", "empty_set": "set", "empty_bag": "bag", "empty_grid": "grid"}


def _literal(name: str):
    if name == "true":
        return True
    if name == "false":
        return False
    if name.startswith('"'):
        return json.loads(name)
    try:
        return int(name)
    except ValueError:
        return float(name)


def _is_number(v) -> bool:
    return value_tag(v) in ("int", "float")


class Interpreter:
    """One evaluation run; owns the fuel counter."""

    def __init__(self, fuel: Optional[int] = None):
        self.fuel = default_fuel() if fuel is None else fuel

    def tick(self, n: int = 1):
        self.fuel -= n
        if self.fuel < 0:
            raise _Abort(Err.OUT_OF_FUEL)

    # -- expressions -----------------------------------------------------

    def eval(self, e: S.Expr, env: dict):
        if isinstance(e, S.Var):
            if e.name not in env:
                _wrong(f"unbound variable {e.name}")
            return env[e.name]
        if isinstance(e, S.Const):
            if e.name in _EMPTY:
                return Collection.empty(_EMPTY[e.name])
            if e.name in _ARITY:
                return Builtin(e.name, _ARITY[e.name])
            return _literal(e.name)
        if isinstance(e, S.Lambda):
            return Closure(e.param, e.body, env)
        if isinstance(e, S.Trans):
            return TransValue(e.rules, env)
        if isinstance(e, S.Let):
            v = self.eval(e.bound, env)
            return self.eval(e.body, {**env, e.name: v})
        if isinstance(e, S.App):
            # `if` evaluates only the selected branch
            f = e.fn
            if isinstance(f, S.App) and isinstance(f.fn, S.App) and f.fn.fn == S.Const("if"):
                self.tick()
                c = self.eval(f.fn.arg, env)
                if not isinstance(c, bool):
                    _wrong("if condition is not a boolean")
                return self.eval(f.arg if c else e.arg, env)
            fv = self.eval(e.fn, env)
            av = self.eval(e.arg, env)
            return self.apply(fv, av)
        raise TypeError(f"not an expression: {e!r}")

    def apply(self, f, a):
        self.tick()
        if isinstance(f, Closure):
            return self.eval(f.body, {**f.env, f.param: a})
        if isinstance(f, TransValue):
            if not isinstance(a, Collection):
                _wrong("transformation applied to a non-collection")
            return self.transform(f, a)
        if isinstance(f, Builtin):
            args = f.args + (a,)
            if len(args) < f.arity:
                return Builtin(f.name, f.arity, args)
            return self.prim(f.name, args)
        _wrong("application of a non-function")

    def prim(self, name: str, args: tuple):
        if name == "::":
            v, c = args
            if not isinstance(c, Collection):
                _wrong(":: onto a non-collection")
            out = c.insert(v)
            if out is None:
                raise _Abort(Err.SHAPE_ERR, "grid cell already occupied")
            return out
        if name in DIRECTIONS:
            v, c = args
            if not isinstance(c, Collection) or c.topo != "grid":
                _wrong(f"{name} onto a non-grid")
            out = c.insert(v, name)
            if out is None:
                raise _Abort(Err.SHAPE_ERR, "grid cell already occupied")
            return out
        if name.endswith("_nb"):
            g, x, y = args
            if not isinstance(g, Collection) or g.topo != "grid":
                _wrong(f"{name} on a non-grid")
            dx, dy = DIRECTIONS[name[:-3]]
            cells = dict(g.cells)
            return any(values_equal(v, x) and (p[0] + dx, p[1] + dy) in cells
                       and values_equal(cells[(p[0] + dx, p[1] + dy)], y)
                       for p, v in cells.items())
        if name in ("&&", "||"):
            a, b = args
            if not (isinstance(a, bool) and isinstance(b, bool)):
                _wrong(f"{name} on non-booleans")
            return (a and b) if name == "&&" else (a or b)
        if name == "if":
            c, a, b = args
            if not isinstance(c, bool):
                _wrong("if condition is not a boolean")
            return a if c else b
        if name in ("+", "-", "*"):
            a, b = args
            if not (_is_number(a) and _is_number(b)):
                _wrong(f"{name} on non-numbers")
            if name == "+":
                return a + b
            if name == "-":
                return a - b
            return a * b
        if name == "mod":
            a, b = args
            if value_tag(a) != "int" or value_tag(b) != "int":
                _wrong("mod on non-integers")
            return a if b == 0 else a % b
        if name in ("=", "<", ">"):
            a, b = args
            if is_function(a) or is_function(b):
                return False
            if _is_number(a) and _is_number(b):
                ka, kb = a, b
            else:
                ka, kb = value_key(a), value_key(b)
            if name == "=":
                return ka == kb
            return ka < kb if name == "<" else ka > kb
        raise AssertionError(f"unknown builtin {name}")

    # -- transformations -------------------------------------------------

    def matches(self, t: TransValue, rule_index: int, c: Collection,
                consumed: frozenset, cells: Optional[dict] = None) -> Iterator[Match]:
        """All matches of one rule among unconsumed positions, in canonical order."""
        rule = t.rules[rule_index]
        elems = rule.pattern.elements
        cells = cells if cells is not None else dict(c.cells)
        base_env = {**t.env, "self": c}

        def ok(el, p, used):
            if p in consumed or p in used:
                return False
            return el.base is None or value_tag(cells[p]) == el.base

        def dfs(i, path, bindings):
            self.tick()
            if i == len(elems):
                g = self.eval(rule.pattern.guard, {**base_env, **bindings})
                if not isinstance(g, bool):
                    _wrong("guard did not evaluate to a boolean")
                if g:
                    yield Match(rule_index, tuple(path), dict(bindings))
                return
            el = elems[i]
            if i == 0:
                cands = [p for p in c.positions() if ok(el, p, ())]
            else:
                cands = [p for p in c.neighbors(path[-1], el.direction) if ok(el, p, path)]
            if not el.star:
                for p in cands:
                    yield from dfs(i + 1, path + [p], {**bindings, el.var: cells[p]})
                return
            for first in cands:
                run = [first]
                while True:
                    nxt = [p for p in c.neighbors(run[-1], el.direction)
                           if ok(el, p, path + run)]
                    if not nxt:
                        break
                    run.append(nxt[0])
                for k in range(len(run), 0, -1):
                    seq = Collection.from_values("seq", [cells[p] for p in run[:k]])
                    yield from dfs(i + 1, path + run[:k], {**bindings, el.var: seq})

        yield from dfs(0, [], {})

    def select(self, t: TransValue, c: Collection) -> list:
        """Phase one: greedy disjoint matches, rule by rule in priority order."""
        cells = dict(c.cells)
        consumed: set = set()
        found = []
        for i in range(len(t.rules)):
            while True:
                m = next(self.matches(t, i, c, frozenset(consumed), cells), None)
                if m is None:
                    break
                found.append(m)
                consumed.update(m.path)
        return found

    def transform(self, t: TransValue, c: Collection) -> Collection:
        cells = dict(c.cells)
        found = self.select(t, c)
        consumed = {p for m in found for p in m.path}
        replacements = []
        for m in found:
            rule = t.rules[m.rule]
            r = self.eval(rule.replacement, {**t.env, "self": c, **m.bindings})
            if not isinstance(r, Collection) or r.topo != "seq":
                _wrong("rule replacement is not a sequence")
            replacements.append((m, r.values()))
        if c.topo == "grid":
            out = dict(cells)
            for m, vals in replacements:
                if len(vals) != len(m.path):
                    raise _Abort(Err.SHAPE_ERR, "grid replacement changes the number of values")
                out.update(zip(m.path, vals))
            return Collection.grid(out, c.cursor)
        at_start = {min(m.path): vals for m, vals in replacements}
        result = []
        for p, v in c.cells:
            if p in at_start:
                result.extend(at_start[p])
            elif p not in consumed:
                result.append(v)
        return Collection.from_values(c.topo, result)

    def fixpoint(self, t: TransValue, c: Collection) -> Collection:
        while True:
            self.tick()
            nxt = self.transform(t, c)
            if nxt == c:
                return nxt
            c = nxt


# -- public interface ----------------------------------------------------------

def _guarded(fn, *args, fuel=None):
    interp = Interpreter(fuel)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 20_000))
    try:
        return fn(interp, *args)
    except _Abort as a:
        return a.outcome
    except RecursionError:
        return Err.OUT_OF_FUEL
    finally:
        sys.setrecursionlimit(old)


def evaluate(e: S.Expr, env: Optional[dict] = None, fuel: Optional[int] = None):
    """Evaluate ``e``; returns a value or an :class:`Err` outcome."""
    return _guarded(lambda i: i.eval(e, dict(env or {})), fuel=fuel)


def apply_transformation(t, c: Collection, fuel: Optional[int] = None):
    if not isinstance(t, TransValue):
        return Err.WRONG
    return _guarded(lambda i: i.transform(t, c), fuel=fuel)


def select_matches(t, c: Collection, fuel: Optional[int] = None):
    """The phase-one match records of one application of ``t`` to ``c``."""
    if not isinstance(t, TransValue):
        return Err.WRONG
    return _guarded(lambda i: i.select(t, c), fuel=fuel)


def fixpoint(t, c: Collection, fuel: Optional[int] = None):
    if not isinstance(t, TransValue):
        return Err.WRONG
    return _guarded(lambda i: i.fixpoint(t, c), fuel=fuel)


def match_paths(pattern: S.Pattern, c: Collection, consumed=frozenset(),
                env: Optional[dict] = None, fuel: Optional[int] = None):
    """First match of ``pattern`` in ``c`` avoiding ``consumed``, or None.

    Returns an :class:`Err` if guard evaluation fails.
    """
    t = TransValue((S.Rule(pattern, S.seq_literal([])),), dict(env or {}))
    return _guarded(lambda i: next(i.matches(t, 0, c, frozenset(consumed)), None), fuel=fuel)


def all_matches(pattern: S.Pattern, c: Collection, env: Optional[dict] = None,
                fuel: Optional[int] = None):
    """Every candidate match (not necessarily disjoint), in canonical order."""
    t = TransValue((S.Rule(pattern, S.seq_literal([])),), dict(env or {}))
    return _guarded(lambda i: list(i.matches(t, 0, c, frozenset())), fuel=fuel)


def run(e: S.Expr, fuel: Optional[int] = None, fix: bool = False):
    """Evaluate a program.  With ``fix`` the program must be ``t c`` and the
    transformation is iterated to a fixpoint."""
    if not fix:
        return evaluate(e, fuel=fuel)
    if not isinstance(e, S.App):
        return Err.WRONG

    def go(i: Interpreter):
        t = i.eval(e.fn, {})
        c = i.eval(e.arg, {})
        if not isinstance(t, TransValue) or not isinstance(c, Collection):
            _wrong("--fix needs a transformation applied to a collection")
        return i.fixpoint(t, c)

    return _guarded(go, fuel=fuel)
