"""Type algebra: types, topologies, schemes, substitutions and the
finite membership oracle used to test the inference engines."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Union as _U

BASE_TYPES = ("int", "bool", "float", "string")
TOPOLOGIES = ("set", "bag", "seq", "grid")


class UnknownConstant(Exception):
    pass


class UnsupportedValue(Exception):
    """Raised by the oracle on closures: arrow membership is not decided."""


# -- topologies ------------------------------------------------------------

@dataclass(frozen=True)
class TopoSym:
    name: str

    def __post_init__(self):
        if self.name not in TOPOLOGIES:
            raise ValueError(f"unknown topology {self.name!r}")

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class TopoVar:
    name: str

    def __str__(self):
        return self.name


Topology = _U[TopoSym, TopoVar]


# -- types -----------------------------------------------------------------

class Type:
    __slots__ = ()

    def __str__(self):
        return show_type(self)


@dataclass(frozen=True)
class Base(Type):
    name: str

    def __post_init__(self):
        if self.name not in BASE_TYPES:
            raise ValueError(f"unknown base type {self.name!r}")


@dataclass(frozen=True)
class TVar(Type):
    name: str


@dataclass(frozen=True)
class Arrow(Type):
    dom: Type
    cod: Type


@dataclass(frozen=True)
class Coll(Type):
    topo: Topology
    elem: Type


@dataclass(frozen=True)
class Union(Type):
    items: tuple


@dataclass(frozen=True)
class Inter(Type):
    items: tuple


@dataclass(frozen=True)
class Zero(Type):
    pass


@dataclass(frozen=True)
class One(Type):
    pass


@dataclass(frozen=True)
class Cond(Type):
    """``body ? guard``: body when guard is inhabited, 0 otherwise."""
    body: Type
    guard: Type


INT, BOOL, FLOAT, STRING = (Base(b) for b in BASE_TYPES)
ZERO, ONE = Zero(), One()


def _flatten(kind, items):
    for t in items:
        if isinstance(t, kind):
            yield from t.items
        else:
            yield t


def union(*items: Type) -> Type:
    """Canonical (flattened, deduplicated, sorted) union; no other rewriting."""
    flat = sorted(set(_flatten(Union, items)), key=sort_key)
    if not flat:
        return ZERO
    if len(flat) == 1:
        return flat[0]
    return Union(tuple(flat))


def inter(*items: Type) -> Type:
    flat = sorted(set(_flatten(Inter, items)), key=sort_key)
    if not flat:
        return ONE
    if len(flat) == 1:
        return flat[0]
    return Inter(tuple(flat))


def sort_key(t: Type) -> str:
    return show_type(t)


def seq_of(t: Type) -> Coll:
    return Coll(TopoSym("seq"), t)


# -- pretty printing -------------------------------------------------------

def show_type(t: Type, prec: int = 0) -> str:
    # prec: 0 arrow, 1 union, 2 inter, 3 cond, 4 atom
    if isinstance(t, Base):
        return t.name
    if isinstance(t, TVar):
        return t.name
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, One):
        return "1"
    if isinstance(t, Coll):
        s = f"[{t.topo}] {show_type(t.elem, 4)}"
        return s if prec < 4 else f"({s})"
    if isinstance(t, Arrow):
        s = f"{show_type(t.dom, 1)} -> {show_type(t.cod, 0)}"
        return s if prec == 0 else f"({s})"
    if isinstance(t, Union):
        s = " | ".join(show_type(i, 2) for i in t.items)
        return s if prec <= 1 else f"({s})"
    if isinstance(t, Inter):
        s = " & ".join(show_type(i, 3) for i in t.items)
        return s if prec <= 2 else f"({s})"
    if isinstance(t, Cond):
        s = f"{show_type(t.body, 4)} ? {show_type(t.guard, 4)}"
        return s if prec <= 2 else f"({s})"
    raise TypeError(f"not a type: {t!r}")


# -- free variables and substitution ----------------------------------------

def free_vars(t) -> set:
    """Free type and topology variables (TVar / TopoVar objects)."""
    if isinstance(t, (TVar, TopoVar)):
        return {t}
    if isinstance(t, (Base, Zero, One, TopoSym)):
        return set()
    if isinstance(t, Arrow):
        return free_vars(t.dom) | free_vars(t.cod)
    if isinstance(t, Coll):
        return free_vars(t.topo) | free_vars(t.elem)
    if isinstance(t, (Union, Inter)):
        out = set()
        for i in t.items:
            out |= free_vars(i)
        return out
    if isinstance(t, Cond):
        return free_vars(t.body) | free_vars(t.guard)
    if isinstance(t, TypeScheme):
        out = free_vars(t.body)
        for c in t.constraints:
            out |= free_vars(c.lhs) | free_vars(c.rhs)
        return out - set(t.quantified)
    if isinstance(t, Constraint):
        return free_vars(t.lhs) | free_vars(t.rhs)
    raise TypeError(f"no free variables for {t!r}")


def is_ground(t: Type) -> bool:
    return not free_vars(t)


@dataclass(frozen=True)
class Constraint:
    """Inclusion ``lhs <= rhs``; equality is stored as two of these."""
    lhs: Type
    rhs: Type
    origin: str = field(default="", compare=False)

    def __str__(self):
        return f"{self.lhs} <= {self.rhs}"


def dedup(constraints: Iterable[Constraint]) -> list:
    seen = set()
    out = []
    for c in constraints:
        key = (c.lhs, c.rhs)
        if key not in seen and c.lhs != c.rhs:
            seen.add(key)
            out.append(c)
    return out


@dataclass(frozen=True)
class TypeScheme:
    quantified: tuple
    body: Type
    constraints: tuple = ()

    def __str__(self):
        return show_scheme(self)


def show_scheme(s: TypeScheme) -> str:
    tv = [v.name for v in s.quantified if isinstance(v, TVar)]
    rv = [v.name for v in s.quantified if isinstance(v, TopoVar)]
    text = show_type(s.body)
    if s.quantified:
        text = f"forall {','.join(tv + rv)}. {text}"
    if s.constraints:
        text += " where {" + ", ".join(str(c) for c in s.constraints) + "}"
    return text


def mono(t: Type) -> TypeScheme:
    return TypeScheme((), t, ())


class FreshSupply:
    """Private counter for one inference run."""

    def __init__(self, prefix: str = ""):
        self.n = 0
        self.prefix = prefix

    def tvar(self) -> TVar:
        self.n += 1
        return TVar(f"{self.prefix}a{self.n}")

    def topo(self) -> TopoVar:
        self.n += 1
        return TopoVar(f"{self.prefix}r{self.n}")

    def like(self, v):
        return self.tvar() if isinstance(v, TVar) else self.topo()


@dataclass(frozen=True)
class Substitution:
    types: dict = field(default_factory=dict)   # name -> Type
    topos: dict = field(default_factory=dict)   # name -> Topology

    def __post_init__(self):
        for k, v in self.types.items():
            if not isinstance(v, Type):
                raise TypeError(f"type variable {k} mapped to non-type {v!r}")
        for k, v in self.topos.items():
            if not isinstance(v, (TopoSym, TopoVar)):
                raise TypeError(f"topology variable {k} mapped to non-topology {v!r}")

    def __bool__(self):
        return bool(self.types or self.topos)

    def __str__(self):
        parts = [f"{k} := {v}" for k, v in sorted(self.types.items())]
        parts += [f"{k} := {v}" for k, v in sorted(self.topos.items())]
        return "{" + ", ".join(parts) + "}"

    def __call__(self, t):
        return apply_subst(self, t)

    def without(self, names) -> Substitution:
        return Substitution({k: v for k, v in self.types.items() if k not in names},
                            {k: v for k, v in self.topos.items() if k not in names})

    def compose(self, other: Substitution) -> Substitution:
        """``self . other``: apply ``other`` first, then ``self``."""
        types = {k: apply_subst(self, v) for k, v in other.types.items()}
        topos = {k: apply_subst(self, v) for k, v in other.topos.items()}
        for k, v in self.types.items():
            types.setdefault(k, v)
        for k, v in self.topos.items():
            topos.setdefault(k, v)
        return Substitution(types, topos)


def apply_subst(s: Substitution, t):
    if not s:
        return t
    if isinstance(t, TVar):
        return s.types.get(t.name, t)
    if isinstance(t, TopoVar):
        return s.topos.get(t.name, t)
    if isinstance(t, (Base, Zero, One, TopoSym)):
        return t
    if isinstance(t, Arrow):
        return Arrow(apply_subst(s, t.dom), apply_subst(s, t.cod))
    if isinstance(t, Coll):
        return Coll(apply_subst(s, t.topo), apply_subst(s, t.elem))
    if isinstance(t, Union):
        return union(*(apply_subst(s, i) for i in t.items))
    if isinstance(t, Inter):
        return inter(*(apply_subst(s, i) for i in t.items))
    if isinstance(t, Cond):
        return Cond(apply_subst(s, t.body), apply_subst(s, t.guard))
    if isinstance(t, Constraint):
        return Constraint(apply_subst(s, t.lhs), apply_subst(s, t.rhs), t.origin)
    if isinstance(t, TypeScheme):
        return _apply_scheme(s, t)
    raise TypeError(f"cannot substitute into {t!r}")


def _apply_scheme(s: Substitution, sc: TypeScheme) -> TypeScheme:
    bound = {v.name for v in sc.quantified}
    inner = s.without(bound)
    if not inner:
        return sc
    # rename quantified variables that would capture variables of the range
    rng = set()
    for v in list(inner.types.values()) + list(inner.topos.values()):
        rng |= {x.name for x in free_vars(v)}
    clash = bound & rng
    quantified = sc.quantified
    body, cons = sc.body, sc.constraints
    if clash:
        taken = bound | rng | {x.name for x in free_vars(sc.body)}
        ren_t, ren_r, newq = {}, {}, []
        for v in quantified:
            if v.name in clash:
                new = _fresh_name(v.name, taken)
                taken.add(new)
                if isinstance(v, TVar):
                    ren_t[v.name] = TVar(new)
                    newq.append(TVar(new))
                else:
                    ren_r[v.name] = TopoVar(new)
                    newq.append(TopoVar(new))
            else:
                newq.append(v)
        ren = Substitution(ren_t, ren_r)
        body = apply_subst(ren, body)
        cons = tuple(apply_subst(ren, c) for c in cons)
        quantified = tuple(newq)
    return TypeScheme(quantified, apply_subst(inner, body),
                      tuple(apply_subst(inner, c) for c in cons))


def _fresh_name(base: str, taken: set) -> str:
    for i in itertools.count(1):
        cand = f"{base}'{i}"
        if cand not in taken:
            return cand


# -- generalisation / instantiation ------------------------------------------

def context_free_vars(ctx: dict) -> set:
    out = set()
    for sc in ctx.values():
        out |= free_vars(sc)
    return out


def generalize(ctx: dict, t: Type, constraints=()) -> TypeScheme:
    fv = free_vars(t)
    for c in constraints:
        fv |= free_vars(c)
    q = fv - context_free_vars(ctx)
    order = _appearance_order(t, constraints)
    quantified = tuple(sorted(q, key=lambda v: (isinstance(v, TopoVar), order.get(v, 1 << 30), v.name)))
    return TypeScheme(quantified, t, tuple(constraints))


def _appearance_order(t, constraints=()) -> dict:
    order = {}

    def walk(x):
        if isinstance(x, (TVar, TopoVar)):
            order.setdefault(x, len(order))
        elif isinstance(x, Arrow):
            walk(x.dom), walk(x.cod)
        elif isinstance(x, Coll):
            walk(x.topo), walk(x.elem)
        elif isinstance(x, (Union, Inter)):
            for i in x.items:
                walk(i)
        elif isinstance(x, Cond):
            walk(x.body), walk(x.guard)

    walk(t)
    for c in constraints:
        walk(c.lhs), walk(c.rhs)
    return order


def instantiate(sc: TypeScheme, supply: FreshSupply):
    """Returns (type, constraints) with quantified variables made fresh."""
    if not sc.quantified:
        return sc.body, list(sc.constraints)
    types, topos = {}, {}
    for v in sc.quantified:
        if isinstance(v, TVar):
            types[v.name] = supply.tvar()
        else:
            topos[v.name] = supply.topo()
    s = Substitution(types, topos)
    return apply_subst(s, sc.body), [apply_subst(s, c) for c in sc.constraints]


def canonical_scheme(sc: TypeScheme) -> TypeScheme:
    """Rename quantified variables by order of appearance: a, b, ... and t, t1, ..."""
    order = _appearance_order(sc.body, sc.constraints)
    qs = sorted(sc.quantified, key=lambda v: order.get(v, 1 << 30))
    free = {v.name for v in free_vars(sc)}
    tnames = (n for n in _type_names() if n not in free)
    rnames = (n for n in _topo_names() if n not in free)
    types, topos, newq = {}, {}, []
    for v in qs:
        if isinstance(v, TVar):
            nv = TVar(next(tnames))
            types[v.name] = nv
        else:
            nv = TopoVar(next(rnames))
            topos[v.name] = nv
        newq.append(nv)
    s = Substitution(types, topos)
    newq.sort(key=lambda v: isinstance(v, TopoVar))
    return TypeScheme(tuple(newq), apply_subst(s, sc.body),
                      tuple(apply_subst(s, c) for c in sc.constraints))


def _type_names():
    for i in itertools.count():
        for ch in "abcdefgh":
            yield ch if i == 0 else f"{ch}{i}"


def _topo_names():
    yield "t"
    for i in itertools.count(1):
        yield f"t{i}"


def alpha_equivalent(a, b) -> bool:
    """Equality up to a bijective renaming of variables (small types only).

    Schemes compare their bodies and constraint lists with the quantified
    variables opened up."""
    if isinstance(a, TypeScheme) or isinstance(b, TypeScheme):
        if not (isinstance(a, TypeScheme) and isinstance(b, TypeScheme)):
            return False
        if (len(a.quantified) != len(b.quantified) or len(a.constraints) != len(b.constraints)
                or free_vars(a) != free_vars(b)):
            return False
        return alpha_equivalent(_scheme_as_type(a), _scheme_as_type(b))
    fa, fb = sorted(free_vars(a), key=repr), sorted(free_vars(b), key=repr)
    ta = [v for v in fa if isinstance(v, TVar)]
    tb = [v for v in fb if isinstance(v, TVar)]
    ra = [v for v in fa if isinstance(v, TopoVar)]
    rb = [v for v in fb if isinstance(v, TopoVar)]
    if len(ta) != len(tb) or len(ra) != len(rb):
        return False
    for pt in itertools.permutations(tb):
        for pr in itertools.permutations(rb):
            s = Substitution({x.name: y for x, y in zip(ta, pt)},
                             {x.name: y for x, y in zip(ra, pr)})
            if normalize(apply_subst(s, a)) == normalize(b):
                return True
    return False


def _scheme_as_type(sc: TypeScheme) -> Type:
    out = sc.body
    for c in reversed(sc.constraints):
        out = Arrow(Arrow(c.lhs, c.rhs), out)
    return out


# -- normalisation and emptiness -------------------------------------------

def _head(t: Type) -> Optional[tuple]:
    """Disjointness class of a variable-free-headed type."""
    if isinstance(t, Base):
        return ("base", t.name)
    if isinstance(t, Arrow):
        return ("arrow",)
    if isinstance(t, Coll):
        if isinstance(t.topo, TopoSym):
            return ("coll", t.topo.name)
        return ("coll", None)
    return None


def normalize(t: Type) -> Type:
    if isinstance(t, (Base, TVar, Zero, One)):
        return t
    if isinstance(t, Arrow):
        return Arrow(normalize(t.dom), normalize(t.cod))
    if isinstance(t, Coll):
        return Coll(t.topo, normalize(t.elem))
    if isinstance(t, Cond):
        return _norm_cond(normalize(t.body), normalize(t.guard))
    if isinstance(t, Union):
        return _norm_union([normalize(i) for i in t.items])
    if isinstance(t, Inter):
        return _norm_inter([normalize(i) for i in t.items])
    raise TypeError(f"not a type: {t!r}")


def _norm_cond(body: Type, guard: Type) -> Type:
    if isinstance(body, Zero) or isinstance(guard, Zero):
        return ZERO
    if body == guard:
        return body
    e = is_empty(guard)
    if e is False:
        return body
    if e is True:
        return ZERO
    return Cond(body, guard)


def _norm_union(items: list) -> Type:
    flat = []
    for i in _flatten(Union, items):
        if isinstance(i, One):
            return ONE
        if not isinstance(i, Zero):
            flat.append(i)
    flat = set(flat)
    # absorption: a | (a & b) = a
    kept = [i for i in flat
            if not (isinstance(i, Inter) and any(j in flat for j in i.items))]
    # [r]0 holds only empty collections, which any other [r]t also holds
    kept = [i for i in kept
            if not (isinstance(i, Coll) and isinstance(i.elem, Zero)
                    and any(isinstance(j, Coll) and j.topo == i.topo and j != i for j in kept))]
    return union(*kept)


def _norm_inter(items: list) -> Type:
    flat = []
    for i in _flatten(Inter, items):
        if isinstance(i, Zero):
            return ZERO
        if not isinstance(i, One):
            flat.append(i)
    flat = list(dict.fromkeys(flat))
    # distribute over unions
    for k, i in enumerate(flat):
        if isinstance(i, Union):
            rest = flat[:k] + flat[k + 1:]
            return _norm_union([_norm_inter(rest + [j]) for j in i.items])
    # pull conditionals out: (a ? g) & b = (a & b) ? g
    for k, i in enumerate(flat):
        if isinstance(i, Cond):
            rest = flat[:k] + flat[k + 1:]
            return _norm_cond(_norm_inter(rest + [i.body]), i.guard)
    heads = {}
    for i in flat:
        h = _head(i)
        if h is not None:
            heads.setdefault(h[0], set()).add(h)
    if len(heads) > 1:
        return ZERO
    if "base" in heads and len(heads["base"]) > 1:
        return ZERO
    if "coll" in heads:
        named = {h[1] for h in heads["coll"] if h[1] is not None}
        if len(named) > 1:
            return ZERO
        # same topology: <r>a & <r>b = <r>(a & b)
        colls = [i for i in flat if isinstance(i, Coll)]
        topos = {c.topo for c in colls}
        if len(colls) > 1 and len(topos) == 1:
            merged = Coll(colls[0].topo, _norm_inter([c.elem for c in colls]))
            flat = [i for i in flat if not isinstance(i, Coll)] + [merged]
    return inter(*flat)


def is_empty(t: Type) -> Optional[bool]:
    """Three-valued emptiness: True (only bottom), False (inhabited), None (unknown)."""
    if isinstance(t, Zero):
        return True
    if isinstance(t, (Base, One, Arrow, Coll)):
        return False
    if isinstance(t, TVar):
        return None
    if isinstance(t, Union):
        res = [is_empty(i) for i in t.items]
        if any(r is False for r in res):
            return False
        if all(r is True for r in res):
            return True
        return None
    if isinstance(t, Cond):
        g = is_empty(t.guard)
        if g is True:
            return True
        b = is_empty(t.body)
        if g is False:
            return b
        return True if b is True else None
    if isinstance(t, Inter):
        n = normalize(t)
        if not isinstance(n, Inter):
            return is_empty(n)
        if all(isinstance(i, Arrow) for i in n.items):
            # the everywhere-bottom function inhabits every arrow type
            return False
        return None
    raise TypeError(f"not a type: {t!r}")


# -- ground subtyping --------------------------------------------------------

def ground_subtype(a: Type, b: Type) -> bool:
    """Decide ``a <= b`` for variable-free types."""
    a, b = normalize(a), normalize(b)
    if a == b or isinstance(a, Zero) or isinstance(b, One):
        return True
    if isinstance(a, Union):
        return all(ground_subtype(i, b) for i in a.items)
    if isinstance(a, Cond):
        return ground_subtype(a.body, b)  # guard is decided by normalize
    if isinstance(b, Inter):
        return all(ground_subtype(a, i) for i in b.items)
    if isinstance(b, Zero):
        return is_empty(a) is True
    if isinstance(a, One):
        return False
    if isinstance(a, Inter):
        return any(ground_subtype(i, b) for i in a.items)
    if isinstance(b, Union):
        return any(ground_subtype(a, i) for i in b.items)
    if isinstance(a, Base):
        return a == b
    if isinstance(a, Arrow):
        return isinstance(b, Arrow) and ground_subtype(b.dom, a.dom) and ground_subtype(a.cod, b.cod)
    if isinstance(a, Coll):
        return isinstance(b, Coll) and a.topo == b.topo and ground_subtype(a.elem, b.elem)
    return False


# -- constant table ----------------------------------------------------------

def _scheme(text_vars, body, constraints=()):
    q = tuple(TVar(n) if not n.startswith("r") else TopoVar(n) for n in text_vars)
    return TypeScheme(q, body, tuple(constraints))


_a, _b, _r = TVar("a"), TVar("b"), TopoVar("r")
_DIRS = ("nord", "-nord", "est", "-est")

_COMMON = {
    "::": _scheme(["a", "r"], Arrow(_a, Arrow(Coll(_r, _a), Coll(_r, _a)))),
    "empty_seq": _scheme(["a"], Coll(TopoSym("seq"), _a)),
    "empty_set": _scheme(["a"], Coll(TopoSym("set"), _a)),
    "empty_bag": _scheme(["a"], Coll(TopoSym("bag"), _a)),
    "empty_grid": _scheme(["a"], Coll(TopoSym("grid"), _a)),
    "&&": mono(Arrow(BOOL, Arrow(BOOL, BOOL))),
    "||": mono(Arrow(BOOL, Arrow(BOOL, BOOL))),
    "mod": mono(Arrow(INT, Arrow(INT, INT))),
    "true": mono(BOOL),
    "false": mono(BOOL),
}
for _d in _DIRS:
    _COMMON[_d] = _scheme(["a"], Arrow(_a, Arrow(Coll(TopoSym("grid"), _a), Coll(TopoSym("grid"), _a))))
    _COMMON[_d + "_nb"] = _scheme(["a"], Arrow(Coll(TopoSym("grid"), _a), Arrow(_a, Arrow(_a, BOOL))))
for _op in (">", "<", "="):
    _COMMON[_op] = _scheme(["a"], Arrow(_a, Arrow(_a, BOOL)))

_ARITH_SOFT = _scheme(
    ["a"],
    Arrow(_a, Arrow(_a, union(Cond(INT, inter(_a, INT)), Cond(FLOAT, inter(_a, FLOAT))))),
    [Constraint(_a, union(INT, FLOAT), "tc")],
)

CONSTANT_NAMES = frozenset(_COMMON) | {"+", "-", "*", "if"}


def literal_type(name: str) -> Optional[Base]:
    if name.startswith('"'):
        return STRING
    try:
        int(name)
        return INT
    except ValueError:
        pass
    try:
        float(name)
        return FLOAT
    except ValueError:
        return None


def tc(name: str, dialect: str = "soft") -> TypeScheme:
    """Type scheme of a constant in the given dialect ("strong" or "soft")."""
    if name in _COMMON:
        return _COMMON[name]
    if name in ("+", "-", "*"):
        if dialect == "strong":
            return mono(Arrow(INT, Arrow(INT, INT)))
        return _ARITH_SOFT
    if name == "if":
        if dialect == "strong":
            return _scheme(["a"], Arrow(BOOL, Arrow(_a, Arrow(_a, _a))))
        return _scheme(["a", "b"], Arrow(BOOL, Arrow(_a, Arrow(_b, union(_a, _b)))))
    lit = literal_type(name)
    if lit is not None:
        return mono(lit)
    raise UnknownConstant(name)


# -- JSON --------------------------------------------------------------------

def type_to_json(t) -> dict:
    if isinstance(t, TopoSym):
        return {"kind": "topo", "name": t.name}
    if isinstance(t, TopoVar):
        return {"kind": "topovar", "name": t.name}
    if isinstance(t, Base):
        return {"kind": "base", "name": t.name}
    if isinstance(t, TVar):
        return {"kind": "var", "name": t.name}
    if isinstance(t, Arrow):
        return {"kind": "arrow", "dom": type_to_json(t.dom), "cod": type_to_json(t.cod)}
    if isinstance(t, Coll):
        return {"kind": "coll", "topo": type_to_json(t.topo), "elem": type_to_json(t.elem)}
    if isinstance(t, Union):
        return {"kind": "union", "items": [type_to_json(i) for i in t.items]}
    if isinstance(t, Inter):
        return {"kind": "inter", "items": [type_to_json(i) for i in t.items]}
    if isinstance(t, Zero):
        return {"kind": "zero"}
    if isinstance(t, One):
        return {"kind": "one"}
    if isinstance(t, Cond):
        return {"kind": "cond", "body": type_to_json(t.body), "guard": type_to_json(t.guard)}
    if isinstance(t, TypeScheme):
        return {"kind": "scheme",
                "quantified": [type_to_json(v) for v in t.quantified],
                "body": type_to_json(t.body),
                "constraints": [constraint_to_json(c) for c in t.constraints]}
    raise TypeError(f"cannot serialise {t!r}")


def type_from_json(d: dict):
    k = d["kind"]
    if k == "topo":
        return TopoSym(d["name"])
    if k == "topovar":
        return TopoVar(d["name"])
    if k == "base":
        return Base(d["name"])
    if k == "var":
        return TVar(d["name"])
    if k == "arrow":
        return Arrow(type_from_json(d["dom"]), type_from_json(d["cod"]))
    if k == "coll":
        return Coll(type_from_json(d["topo"]), type_from_json(d["elem"]))
    if k == "union":
        return union(*(type_from_json(i) for i in d["items"]))
    if k == "inter":
        return inter(*(type_from_json(i) for i in d["items"]))
    if k == "zero":
        return ZERO
    if k == "one":
        return ONE
    if k == "cond":
        return Cond(type_from_json(d["body"]), type_from_json(d["guard"]))
    if k == "scheme":
        return TypeScheme(tuple(type_from_json(v) for v in d["quantified"]),
                          type_from_json(d["body"]),
                          tuple(constraint_from_json(c) for c in d["constraints"]))
    raise ValueError(f"unknown type kind {k!r}")


def constraint_to_json(c: Constraint) -> dict:
    return {"lhs": type_to_json(c.lhs), "rhs": type_to_json(c.rhs), "origin": c.origin}


def constraint_from_json(d: dict) -> Constraint:
    return Constraint(type_from_json(d["lhs"]), type_from_json(d["rhs"]), d.get("origin", ""))


# -- finite semantic oracle ---------------------------------------------------

@dataclass(frozen=True)
class FiniteUniverse:
    """Desk-scale stand-in for the value domain; only the oracle uses it."""
    max_depth: int = 2
    max_collection_size: int = 3
    base_samples: tuple = (("int", (0, 3)), ("bool", (True, False)),
                           ("float", (1.5,)), ("string", ("s",)))

    @cached_property
    def values(self) -> tuple:
        from .values import Collection
        level = [v for _, vs in self.base_samples for v in vs]
        reps = [vs[0] for _, vs in self.base_samples]
        everything = list(level)
        for _ in range(self.max_depth):
            new = []
            for topo in TOPOLOGIES:
                new.append(Collection.empty(topo))
                for v in level:
                    new.append(Collection.from_values(topo, [v]))
                for k in range(2, self.max_collection_size + 1):
                    for combo in itertools.combinations_with_replacement(reps, k):
                        new.append(Collection.from_values(topo, list(combo)))
            # representatives for the next level: one per topology, homogeneous and mixed
            reps = reps[:len(self.base_samples)] + [
                Collection.from_values(t, [self.base_samples[0][1][0]]) for t in TOPOLOGIES
            ] + [Collection.from_values(t, [self.base_samples[1][1][0]]) for t in TOPOLOGIES]
            level = reps
            everything.extend(new)
        uniq = {}
        for v in everything:
            from .values import value_key
            uniq.setdefault(value_key(v), v)
        return tuple(uniq.values())

    def ground_types(self, depth: int = 1) -> tuple:
        """A small lattice of ground types for exhaustive enumeration."""
        atoms = [ZERO, INT, BOOL, FLOAT, union(INT, BOOL), union(INT, FLOAT)]
        out = list(atoms)
        if depth >= 1:
            for topo in ("set", "seq", "grid"):
                for e in (INT, BOOL, union(INT, BOOL)):
                    out.append(Coll(TopoSym(topo), e))
        return tuple(out)


def contains_closure(v) -> bool:
    from .values import Collection, is_function
    if is_function(v):
        return True
    if isinstance(v, Collection):
        return any(contains_closure(x) for x in v.values())
    return False


def member(v, t: Type, s: Substitution = Substitution(), u: FiniteUniverse = None) -> bool:
    """Membership of a first-order value in the denotation of ``t`` under ``s``."""
    from .values import Collection, value_tag
    if contains_closure(v):
        raise UnsupportedValue("closure membership is not decided by the oracle")
    t = apply_subst(s, t)
    return _member(v, t, Collection, value_tag)


def _member(v, t, Collection, value_tag) -> bool:
    if isinstance(t, Base):
        return value_tag(v) == t.name
    if isinstance(t, Union):
        return any(_member(v, i, Collection, value_tag) for i in t.items)
    if isinstance(t, Inter):
        return all(_member(v, i, Collection, value_tag) for i in t.items)
    if isinstance(t, Zero):
        return False
    if isinstance(t, One):
        return True
    if isinstance(t, Cond):
        g = normalize(t.guard)
        if free_vars(g):
            raise ValueError(f"membership in non-ground type {t}")
        return is_empty(g) is False and _member(v, t.body, Collection, value_tag)
    if isinstance(t, Coll):
        if not isinstance(t.topo, TopoSym):
            raise ValueError(f"membership in non-ground type {t}")
        return (isinstance(v, Collection) and v.topo == t.topo.name
                and all(_member(x, t.elem, Collection, value_tag) for x in v.values()))
    if isinstance(t, Arrow):
        return False
    raise ValueError(f"membership in non-ground type {t}")
