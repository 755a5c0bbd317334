import random

import pytest
from hypothesis import given, settings, strategies as st

from topocheck import syntax as S
from topocheck.types import (BOOL, INT, ONE, ZERO, Arrow, Coll, Cond, FiniteUniverse,
                             FreshSupply, Substitution, TopoSym, TopoVar, TVar,
                             UnknownConstant, alpha_equivalent, apply_subst,
                             contains_closure, generalize, ground_subtype, inter,
                             instantiate, is_empty, member, mono, normalize, tc, union)
from topocheck.values import Collection

from fuzzers import ground_type, strong_type

P = S.parse_type
U = FiniteUniverse()
FIRST_ORDER = [v for v in U.values if not contains_closure(v)]


def members(t):
    return {i for i, v in enumerate(FIRST_ORDER) if member(v, t, Substitution(), U)}


def test_apply_subst_examples():
    assert apply_subst(Substitution({"a": INT}), P("[t] a")) == P("[t] int")
    s = Substitution({"a": INT}, {"t": TopoSym("grid")})
    assert apply_subst(s, P("a -> [t] a")) == P("int -> [grid] int")
    sc = S.parse_scheme("forall a. a -> a")
    assert apply_subst(Substitution({"a": BOOL}), sc) == sc


def test_generalize_examples():
    assert alpha_equivalent(generalize({}, P("[t] a -> [t] a")),
                            S.parse_scheme("forall a,t. [t] a -> [t] a"))
    sc = generalize({"y": mono(TVar("a"))}, P("a -> b"))
    assert [v.name for v in sc.quantified] == ["b"]
    cs = S.parse_constraints("a <= b, bool ? (a & int) <= b")
    sc = generalize({}, P("[t] a -> [t] b"), cs)
    assert {v.name for v in sc.quantified} == {"a", "b", "t"}
    assert list(sc.constraints) == cs


def test_instantiate_examples():
    fs = FreshSupply()
    t, cs = instantiate(tc("::"), fs)
    assert cs == [] and isinstance(t, Arrow)
    assert alpha_equivalent(generalize({}, t), tc("::"))
    assert t.dom not in (TVar("a"),)  # fresh
    assert instantiate(mono(INT), fs) == (INT, [])
    t, cs = instantiate(tc("+"), fs)
    assert len(cs) == 1 and cs[0].lhs == t.dom and cs[0].rhs == union(INT, P("float"))


def test_normalize_examples():
    assert normalize(P("int & bool")) == ZERO
    assert normalize(P("bool ? (int & int)")) == BOOL
    assert normalize(P("a | 0")) == TVar("a")


def test_is_empty_examples():
    assert is_empty(ZERO) is True
    assert is_empty(P("[set] 0")) is False
    assert is_empty(P("a & int")) is None


def test_member_examples():
    assert member(Collection.from_values("set", [1, True]), P("[set] (int | bool)"))
    assert not member(3, ZERO)
    assert member(Collection.empty("grid"), P("[grid] int"))
    assert not member(Collection.from_values("seq", [1]), P("[set] int"))


def test_tc_table():
    assert alpha_equivalent(tc("::"), S.parse_scheme("forall a,t. a -> [t] a -> [t] a"))
    assert alpha_equivalent(tc("empty_grid"), S.parse_scheme("forall a. [grid] a"))
    assert alpha_equivalent(tc("if", "strong"), S.parse_scheme("forall a. bool -> a -> a -> a"))
    assert alpha_equivalent(tc("+", "strong"), S.parse_scheme("int -> int -> int"))
    with pytest.raises(UnknownConstant):
        tc("nosuch")


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_normalize_idempotent_and_sound(seed):
    t = ground_type(random.Random(seed), 3)
    n = normalize(t)
    assert normalize(n) == n
    assert members(t) == members(n)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_is_empty_sound(seed):
    t = ground_type(random.Random(seed), 3)
    verdict = is_empty(t)
    if verdict is True:
        assert not members(t)
    elif verdict is False:
        assert members(t)


def test_apply_subst_distributes():
    rng = random.Random(5)
    for _ in range(300):
        a, b = strong_type(rng), strong_type(rng)
        s = Substitution({"a0": strong_type(rng, 1), "a1": INT}, {"r0": TopoSym("seq")})
        assert apply_subst(s, Arrow(a, b)) == Arrow(apply_subst(s, a), apply_subst(s, b))
        assert apply_subst(s, Coll(TopoVar("r0"), a)) == Coll(TopoSym("seq"), apply_subst(s, a))
        assert apply_subst(s, union(a, b)) == union(apply_subst(s, a), apply_subst(s, b))
        assert apply_subst(s, inter(a, b)) == inter(apply_subst(s, a), apply_subst(s, b))
        assert apply_subst(s, Cond(a, b)) == Cond(apply_subst(s, a), apply_subst(s, b))


def test_ground_subtype_sound():
    rng = random.Random(8)
    checked = 0
    for _ in range(400):
        a, b = ground_type(rng, 2), ground_type(rng, 2)
        if ground_subtype(a, b):
            checked += 1
            assert members(a) <= members(b), (a, b)
    assert checked > 20


def test_tautology_every_ground_alpha():
    for g in U.ground_types(2):
        lhs = Cond(INT, inter(g, INT))
        assert members(lhs) <= members(g), g


def test_one_and_zero():
    assert len(members(ONE)) == len(FIRST_ORDER)
    assert not members(ZERO)
