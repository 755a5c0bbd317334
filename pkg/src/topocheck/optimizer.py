"""Type-directed rewrites of transformations: drop rules that can never fire
and type tests that always succeed, given the content type of the argument."""

from __future__ import annotations

from dataclasses import replace

from . import syntax as S
from .constraints import comp
from .types import Base, Type, Zero, inter, is_ground, normalize, show_type


def eliminate_dead_rules(t: S.Trans, tau: Type, report=None) -> S.Trans:
    kept = []
    for i, r in enumerate(t.rules):
        elems = S.desugar_direction(r.pattern).elements
        if isinstance(normalize(comp(elems, tau)), Zero):
            if report is not None:
                report.append(f"rule {i + 1} removed: pattern never matches content {show_type(tau)}")
            continue
        kept.append(r)
    return replace(t, rules=tuple(kept))


def eliminate_type_tests(t: S.Trans, tau: Type, report=None) -> S.Trans:
    if not is_ground(tau):
        return t
    nt = normalize(tau)
    rules = []
    for i, r in enumerate(t.rules):
        elems = []
        for el in r.pattern.elements:
            if el.base is not None and normalize(inter(tau, Base(el.base))) == nt:
                if report is not None:
                    report.append(f"rule {i + 1}: test {el.var}:{el.base} always succeeds, removed")
                el = replace(el, base=None)
            elems.append(el)
        rules.append(S.Rule(S.Pattern(tuple(elems), r.pattern.guard), r.replacement))
    return replace(t, rules=tuple(rules))


def optimize(t: S.Trans, tau: Type, report=None) -> S.Trans:
    return eliminate_type_tests(eliminate_dead_rules(t, tau, report), tau, report)
