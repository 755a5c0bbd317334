import itertools
import random
import re
from pathlib import Path

import pytest

from topocheck import solver as V
from topocheck import syntax as S
from topocheck.constraints import (SchemeUnsolvable, comp, gamma, generate, typecheck_soft,
                                   typecheck_soft_expr)
from topocheck.corpus import instances
from topocheck.infer_strong import infer_scheme
from topocheck.runtime import match_paths
from topocheck.types import (BOOL, INT, Base, Cond, FiniteUniverse, Substitution, TopoSym,
                             TVar, TypeScheme, TOPOLOGIES, Zero, alpha_equivalent,
                             apply_subst, generalize, inter, normalize, seq_of)

from fuzzers import conforming_collection, ground_type, pattern

P = S.parse_type
ROOT = Path(__file__).parents[1] / "corpus"
U = FiniteUniverse()


def elements(src):
    return S.parse("{" + src + " => []}").rules[0].pattern.elements


def same(sc, text):
    return alpha_equivalent(sc, S.parse_scheme(text))


def test_comp_examples():
    t = TVar("t")
    assert comp(elements("x1:int, x2:float"), t) == Cond(inter(t, INT), inter(t, Base("float")))
    assert comp(elements("x"), t) == t
    assert isinstance(normalize(comp(elements("x:int, y"), BOOL)), Zero)


def test_gamma_examples():
    a = TVar("a")
    assert gamma(elements("x:int"), a) == {"x": inter(a, INT)}
    assert gamma(elements("x, y"), a) == {"x": a, "y": a}
    assert gamma(elements("int* as xs"), a) == {"xs": seq_of(inter(a, INT))}


def test_typed_identity_constraints_vanish():
    res = typecheck_soft_expr(S.parse("{x:int => [x;1]}"))
    assert same(res.scheme, "forall a,t. [t] a -> [t] a")
    assert not res.scheme.constraints


def test_boolify_scheme():
    res = typecheck_soft_expr(S.parse("{x:int => [true]}"))
    assert same(res.scheme, "forall a,t. [t] a -> [t] (a | bool ? (a & int))")


def test_boolify_raw_constraints():
    t, cs = generate({}, S.parse("{x:int => [true]}"))
    shown = {str(c) for c in cs}
    a, b = t.dom.elem, t.cod.elem
    assert f"{a} <= {b}" in shown
    assert any(re.fullmatch(rf"a\d+ \? \({a} & int\) <= {b}", s) for s in shown)


def test_map_refinement():
    m = S.parse("fun f -> {x => [f x]}")
    assert same(typecheck_soft_expr(m).scheme, "forall a,b,t. (a -> b) -> [t] a -> [t] (a | b)")
    assert same(typecheck_soft_expr(m, True).scheme, "forall a,b,t. (a -> b) -> [t] a -> [t] b")


def test_refine_without_catch_all_changes_nothing():
    src = S.parse("{x:int => [x]}")
    assert alpha_equivalent(typecheck_soft_expr(src).scheme,
                            typecheck_soft_expr(src, True).scheme)


@pytest.mark.parametrize("src", ["1 + true", "let f = fun x -> x + 1 in f true",
                                 "1 :: 2"])
def test_soft_rejects(src):
    with pytest.raises(SchemeUnsolvable):
        typecheck_soft(src)


def test_soft_accepts_heterogeneous_set():
    assert same(typecheck_soft("1 :: true :: empty_set"), "[set] (bool | int)")


def test_generation_is_deterministic():
    for path in sorted((ROOT / "soft").glob("*.mgs"))[:12]:
        e = S.parse(path.read_text())
        t1, c1 = generate({}, e)
        t2, c2 = generate({}, e)
        assert (t1, c1) == (t2, c2)
        assert alpha_equivalent(generalize({}, t1, c1), generalize({}, t2, c2))


@pytest.mark.parametrize("path", sorted(ROOT.glob("*/*.mgs")), ids=lambda p: p.stem)
def test_origins_point_into_source(path):
    text = path.read_text()
    lines = text.splitlines()
    _, cs = generate({}, S.parse(text))
    for c in cs:
        m = re.match(r"(\d+):(\d+) ", c.origin)
        assert m, c.origin
        line, col = int(m.group(1)), int(m.group(2))
        assert 1 <= line <= len(lines) and 1 <= col <= len(lines[line - 1]) + 1


def ground_instances(sc: TypeScheme, rng):
    if not sc.quantified:
        return [sc.body]
    return [apply_subst(s, sc.body) for s in instances(sc, U, rng, limit=30)]


def all_instances(sc: TypeScheme):
    tvs = [v.name for v in sc.quantified if isinstance(v, TVar)]
    rvs = [v.name for v in sc.quantified if not isinstance(v, TVar)]
    for combo in itertools.product(U.ground_types(1), repeat=len(tvs)):
        for topos in itertools.product(TOPOLOGIES, repeat=len(rvs)):
            s = Substitution(dict(zip(tvs, combo)),
                             {r: TopoSym(t) for r, t in zip(rvs, topos)})
            yield apply_subst(s, sc.body)


@pytest.mark.parametrize("path", sorted((ROOT / "strong").glob("*.mgs")), ids=lambda p: p.stem)
def test_soft_is_coherent_with_strong(path):
    e = S.parse(path.read_text(), "strong")
    strong, soft = infer_scheme(e), typecheck_soft_expr(e).scheme
    strong_insts = list(all_instances(strong))
    for inst in ground_instances(soft, random.Random(0)):
        assert any(V.semantic_subtype(s, inst, U) for s in strong_insts), inst


def test_dead_patterns_never_match():
    rng = random.Random(21)
    dead = 0
    while dead < 40:
        m, tau = pattern(rng), ground_type(rng, 1)
        if not isinstance(normalize(comp(m.elements, tau)), Zero):
            continue
        dead += 1
        for topo in ("seq", "set", "bag", "grid"):
            c = conforming_collection(rng, tau, topo)
            assert match_paths(m, c) is None, (m, tau, c)
