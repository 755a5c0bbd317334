"""Surface syntax shared by the strong and soft dialects.

Concrete syntax summary::

    e ::= x | c | \\x.e | fun x y -> e | e e | let x = e in e
        | if e then e else e | { rule ; ... } | [e, ..., e] | (e)
        | e op e          (op in :: nord -nord est -est || && > < = + - * mod)
    rule ::= pattern [/ e] => e
    pattern ::= elem ((',' | '|dir>') elem)*
    elem ::= x | x:b | * as x | b* as x

Comments run from ``//`` to end of line.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from typing import Optional

from . import types as T


class SyntaxError_(Exception):
    def __init__(self, msg, line=0, col=0):
        super().__init__(f"{line}:{col}: {msg}")
        self.line, self.col = line, col


class DialectError(Exception):
    pass


# -- AST ---------------------------------------------------------------------

class Expr:
    __slots__ = ()

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True)
class Var(Expr):
    name: str
    loc: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Const(Expr):
    name: str
    loc: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Lambda(Expr):
    param: str
    body: Expr
    loc: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class App(Expr):
    fn: Expr
    arg: Expr
    loc: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Let(Expr):
    name: str
    bound: Expr
    body: Expr
    loc: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Elem:
    """Elementary pattern: ``x``, ``x:b``, ``* as x`` or ``b* as x``.

    ``direction`` tags the separator *preceding* this element
    (``x |nord> y`` puts ``"nord"`` on ``y``).
    """
    var: str
    base: Optional[str] = None
    star: bool = False
    direction: Optional[str] = None

    @property
    def plain(self) -> bool:
        return self.base is None and not self.star


TRUE = Const("true")


@dataclass(frozen=True)
class Pattern:
    elements: tuple
    guard: Expr = TRUE

    def variables(self) -> list:
        return [e.var for e in self.elements]

    @property
    def is_catch_all(self) -> bool:
        return (len(self.elements) == 1 and self.elements[0].plain
                and self.elements[0].direction is None and self.guard == TRUE)


@dataclass(frozen=True)
class Rule:
    pattern: Pattern
    replacement: Expr


@dataclass(frozen=True)
class Trans(Expr):
    rules: tuple
    loc: Optional[tuple] = field(default=None, compare=False, repr=False)


def app(f: Expr, *args: Expr) -> Expr:
    for a in args:
        f = App(f, a)
    return f


def seq_literal(items) -> Expr:
    out: Expr = Const("empty_seq")
    for e in reversed(list(items)):
        out = app(Const("::"), e, out)
    return out


# -- lexer -------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+|//[^\n]*)
  | (?P<nl>\n)
  | (?P<float>\d+\.\d+(?:[eE][-+]?\d+)?)
  | (?P<int>\d+)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<negdir>-(?:nord_nb|est_nb|nord|est)(?![A-Za-z0-9_']))
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<lambda>\\|λ)
  | (?P<op>=>|->|::|&&|\|\||[-+*/<>=(){}\[\],;:|.])
""", re.VERBOSE)

KEYWORDS = {"let", "in", "fun", "if", "then", "else", "as", "mod",
            "nord", "est"}


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(src: str) -> list:
    toks, pos, line, line_start = [], 0, 1, 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if not m:
            raise SyntaxError_(f"unexpected character {src[pos]!r}", line, pos - line_start + 1)
        kind, text = m.lastgroup, m.group()
        col = pos - line_start + 1
        if kind == "nl":
            line, line_start = line + 1, m.end()
        elif kind != "ws":
            if kind == "ident" and text in KEYWORDS:
                kind = "kw"
            elif kind == "negdir":
                kind = "kw" if text in ("-nord", "-est") else "ident"
            toks.append(Token(kind, text, line, col))
        pos = m.end()
    toks.append(Token("eof", "", line, pos - line_start + 1))
    return toks


# -- parser ------------------------------------------------------------------

CONS_OPS = ("::", "nord", "-nord", "est", "-est")
BINARY_LEVELS = [("||",), ("&&",), (">", "<", "="), ("+", "-"), ("*", "mod")]
OPERATORS = set(CONS_OPS) | {op for lvl in BINARY_LEVELS for op in lvl}


class Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.i = 0

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, *texts) -> bool:
        t = self.tok
        return t.kind in ("op", "kw", "lambda") and t.text in texts

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def error(self, msg):
        raise SyntaxError_(msg, self.tok.line, self.tok.col)

    def ident(self) -> str:
        if self.tok.kind != "ident" or self.tok.text in T.CONSTANT_NAMES:
            self.error(f"expected identifier, found {self.tok.text!r}")
        return self.advance().text

    # grammar
    def program(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r}")
        return locate(e, (1, 1))

    def expr(self) -> Expr:
        t = self.tok
        loc = (t.line, t.col)
        if t.kind == "lambda":
            self.advance()
            params = [self.ident()]
            while self.tok.kind == "ident":
                params.append(self.ident())
            self.expect(".")
            return self._lambdas(params, self.expr(), loc)
        if self.at("fun"):
            self.advance()
            params = [self.ident()]
            while self.tok.kind == "ident":
                params.append(self.ident())
            self.expect("->")
            return self._lambdas(params, self.expr(), loc)
        if self.at("let"):
            self.advance()
            name = self.ident()
            params = []
            while self.tok.kind == "ident":
                params.append(self.ident())
            self.expect("=")
            bound = self.expr()
            self.expect("in")
            if params:
                bound = self._lambdas(params, bound, loc)
            return Let(name, bound, self.expr(), loc=loc)
        if self.at("if"):
            self.advance()
            c = self.expr()
            self.expect("then")
            a = self.expr()
            self.expect("else")
            b = self.expr()
            return App(App(App(Const("if", loc=loc), c, loc=loc), a, loc=loc), b, loc=loc)
        return self.cons_expr()

    @staticmethod
    def _lambdas(params, body, loc):
        for p in reversed(params):
            body = Lambda(p, body, loc=loc)
        return body

    def cons_expr(self) -> Expr:
        left = self.binary(0)
        if self.at(*CONS_OPS):
            t = self.advance()
            right = self.cons_expr() if not self._starts_binder() else self.expr()
            return App(App(Const(t.text, loc=(t.line, t.col)), left), right, loc=(t.line, t.col))
        return left

    def _starts_binder(self) -> bool:
        return self.tok.kind == "lambda" or self.at("fun", "let", "if")

    def binary(self, level: int) -> Expr:
        if level == len(BINARY_LEVELS):
            return self.application()
        ops = BINARY_LEVELS[level]
        left = self.binary(level + 1)
        while self.at(*ops):
            t = self.advance()
            if self._starts_binder():
                right = self.expr()
            else:
                right = self.binary(level + 1)
            left = App(App(Const(t.text, loc=(t.line, t.col)), left), right, loc=(t.line, t.col))
            if level == 2:  # comparisons do not chain
                break
        return left

    def _starts_atom(self) -> bool:
        t = self.tok
        if t.kind in ("int", "float", "string"):
            return True
        if t.kind == "ident":
            return True
        return self.at("(", "[", "{")

    def application(self) -> Expr:
        f = self.atom()
        while self._starts_atom():
            t = self.tok
            f = App(f, self.atom(), loc=(t.line, t.col))
        return f

    def atom(self) -> Expr:
        t = self.tok
        loc = (t.line, t.col)
        if t.kind in ("int", "float", "string"):
            self.advance()
            return Const(t.text, loc=loc)
        if t.kind == "ident":
            self.advance()
            if t.text in T.CONSTANT_NAMES:
                return Const(t.text, loc=loc)
            return Var(t.text, loc=loc)
        if self.at("("):
            self.advance()
            # operator section: (+), (::), (nord), (if)
            if (self.tok.kind in ("op", "kw") and self.tok.text in OPERATORS | {"if"}
                    and self.peek().kind == "op" and self.peek().text == ")"):
                name = self.advance().text
                self.expect(")")
                return Const(name, loc=loc)
            # negative literal: (-3)
            if (self.at("-") and self.peek().kind in ("int", "float")
                    and self.peek(2).text == ")"):
                self.advance()
                num = self.advance().text
                self.expect(")")
                return Const("-" + num, loc=loc)
            e = self.expr()
            self.expect(")")
            return e
        if self.at("["):
            self.advance()
            items = []
            if not self.at("]"):
                items.append(self.expr())
                while self.at(",", ";"):
                    self.advance()
                    items.append(self.expr())
            self.expect("]")
            return locate(seq_literal(items), loc)
        if self.at("{"):
            return self.transformation()
        self.error(f"unexpected {t.text or 'end of input'!r}")

    def transformation(self) -> Trans:
        t = self.expect("{")
        rules = []
        while not self.at("}"):
            rules.append(self.rule())
            if self.at(";"):
                self.advance()
            elif not self.at("}"):
                self.error("expected ';' or '}' after rule")
        self.expect("}")
        return Trans(tuple(rules), loc=(t.line, t.col))

    def rule(self) -> Rule:
        elems = [self.elem(None)]
        while self.at(",", "|"):
            if self.advance().text == ",":
                elems.append(self.elem(None))
            else:
                d = self.tok
                if d.text not in ("nord", "-nord", "est", "-est"):
                    self.error("expected a direction after '|'")
                self.advance()
                self.expect(">")
                elems.append(self.elem(d.text))
        names = [e.var for e in elems]
        if len(set(names)) != len(names):
            self.error("pattern variables must be pairwise distinct")
        guard = TRUE
        if self.at("/"):
            self.advance()
            guard = self.expr()
        self.expect("=>")
        return Rule(Pattern(tuple(elems), guard), self.expr())

    def elem(self, direction) -> Elem:
        if self.at("*"):
            self.advance()
            self.expect("as")
            return Elem(self.ident(), None, True, direction)
        if self.tok.kind == "ident" and self.tok.text in T.BASE_TYPES and self.peek().text == "*":
            base = self.advance().text
            self.advance()
            self.expect("as")
            return Elem(self.ident(), base, True, direction)
        name = self.ident()
        if self.at(":"):
            self.advance()
            b = self.tok
            if b.text not in T.BASE_TYPES:
                self.error(f"expected a base type, found {b.text!r}")
            self.advance()
            return Elem(name, b.text, False, direction)
        return Elem(name, None, False, direction)


def locate(e: Expr, loc: tuple) -> Expr:
    """Give desugared nodes the position of their nearest located ancestor."""
    loc = e.loc or loc
    if isinstance(e, (Var, Const)):
        return e if e.loc else replace(e, loc=loc)
    if isinstance(e, Lambda):
        return replace(e, body=locate(e.body, loc), loc=loc)
    if isinstance(e, App):
        return replace(e, fn=locate(e.fn, loc), arg=locate(e.arg, loc), loc=loc)
    if isinstance(e, Let):
        return replace(e, bound=locate(e.bound, loc), body=locate(e.body, loc), loc=loc)
    rules = tuple(Rule(Pattern(r.pattern.elements, locate(r.pattern.guard, loc)),
                       locate(r.replacement, loc)) for r in e.rules)
    return replace(e, rules=rules, loc=loc)


def parse(source: str, dialect: str = "soft") -> Expr:
    """Parse a program; ``dialect`` is "strong" or "soft"."""
    if dialect not in ("strong", "soft"):
        raise ValueError(f"unknown dialect {dialect!r}")
    e = Parser(source).program()
    if dialect == "strong":
        check_strong(e)
    return e


def check_strong(e: Expr) -> None:
    for t in subexprs(e):
        if isinstance(t, Trans):
            if not t.rules or not t.rules[-1].pattern.is_catch_all:
                raise DialectError("strong transformations must end with a catch-all rule 'x => e'")
            for r in t.rules:
                for el in r.pattern.elements:
                    if not el.plain:
                        raise DialectError(f"typed or star pattern element {el.var!r} not allowed in the strong dialect")


def subexprs(e: Expr):
    yield e
    if isinstance(e, Lambda):
        yield from subexprs(e.body)
    elif isinstance(e, App):
        yield from subexprs(e.fn)
        yield from subexprs(e.arg)
    elif isinstance(e, Let):
        yield from subexprs(e.bound)
        yield from subexprs(e.body)
    elif isinstance(e, Trans):
        for r in e.rules:
            yield from subexprs(r.pattern.guard)
            yield from subexprs(r.replacement)


# -- direction sugar ------------------------------------------------------------

def desugar_direction(p: Pattern) -> Pattern:
    """Move ``x |d> y`` adjacency tags into the guard as ``d_nb self x y``."""
    conj = []
    elems = []
    for i, el in enumerate(p.elements):
        if el.direction is not None:
            prev = p.elements[i - 1].var
            conj.append(app(Const(el.direction + "_nb"), Var("self"), Var(prev), Var(el.var)))
            el = replace(el, direction=None)
        elems.append(el)
    if not conj:
        return p
    guard = p.guard
    if guard == TRUE:
        guard = conj.pop()
    for c in reversed(conj):
        guard = app(Const("&&"), c, guard)
    return Pattern(tuple(elems), guard)


def desugar(e: Expr) -> Expr:
    """Apply :func:`desugar_direction` to every transformation in ``e``."""
    if isinstance(e, Lambda):
        return replace(e, body=desugar(e.body))
    if isinstance(e, App):
        return replace(e, fn=desugar(e.fn), arg=desugar(e.arg))
    if isinstance(e, Let):
        return replace(e, bound=desugar(e.bound), body=desugar(e.body))
    if isinstance(e, Trans):
        rules = []
        for r in e.rules:
            p = desugar_direction(r.pattern)
            rules.append(Rule(Pattern(p.elements, desugar(p.guard)), desugar(r.replacement)))
        return replace(e, rules=tuple(rules))
    return e


# -- pretty printing -------------------------------------------------------

def pretty(x) -> str:
    if isinstance(x, T.TypeScheme):
        return T.show_scheme(x)
    if isinstance(x, T.Type):
        return T.show_type(x)
    if isinstance(x, T.Constraint):
        return str(x)
    return _pp(x, top=True)


def _as_seq_literal(e: Expr):
    items = []
    while isinstance(e, App) and isinstance(e.fn, App) and e.fn.fn == Const("::"):
        items.append(e.fn.arg)
        e = e.arg
    if e == Const("empty_seq") and items:
        return items
    return None


def _show_const(name: str) -> str:
    if name in OPERATORS or name == "if":
        return f"({name})"
    if name.startswith("-") and name[1:2].isdigit():
        return f"({name})"
    return name


def _pp(e: Expr, top: bool = False) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Const):
        return _show_const(e.name)
    if isinstance(e, Lambda):
        s = f"fun {e.param} -> {_pp(e.body, True)}"
        return s if top else f"({s})"
    if isinstance(e, Let):
        s = f"let {e.name} = {_pp(e.bound, True)} in {_pp(e.body, True)}"
        return s if top else f"({s})"
    if isinstance(e, Trans):
        return "{" + "; ".join(_pp_rule(r) for r in e.rules) + "}"
    if isinstance(e, App):
        items = _as_seq_literal(e)
        if items is not None:
            return "[" + ", ".join(_pp(i, True) for i in items) + "]"
        # fully applied binary operator
        if isinstance(e.fn, App) and isinstance(e.fn.fn, Const) and e.fn.fn.name in OPERATORS:
            return f"({_pp(e.fn.arg)} {e.fn.fn.name} {_pp(e.arg)})"
        if (isinstance(e.fn, App) and isinstance(e.fn.fn, App)
                and e.fn.fn.fn == Const("if")):
            s = f"if {_pp(e.fn.fn.arg, True)} then {_pp(e.fn.arg, True)} else {_pp(e.arg, True)}"
            return s if top else f"({s})"
        s = f"{_pp_fn(e.fn)} {_pp_arg(e.arg)}"
        return s if top else f"({s})"
    raise TypeError(f"not an expression: {e!r}")


def _pp_fn(e: Expr) -> str:
    if isinstance(e, App) and _as_seq_literal(e) is None and not _is_special_app(e):
        return _pp_fn(e.fn) + " " + _pp_arg(e.arg)
    return _pp(e)


def _is_special_app(e: App) -> bool:
    if isinstance(e.fn, App) and isinstance(e.fn.fn, Const) and e.fn.fn.name in OPERATORS:
        return True
    return isinstance(e.fn, App) and isinstance(e.fn.fn, App) and e.fn.fn.fn == Const("if")


def _pp_arg(e: Expr) -> str:
    return _pp(e)


def _pp_elem(el: Elem) -> str:
    if el.star:
        return f"{el.base + '*' if el.base else '*'} as {el.var}"
    return f"{el.var}:{el.base}" if el.base else el.var


def _pp_rule(r: Rule) -> str:
    parts = []
    for i, el in enumerate(r.pattern.elements):
        if i:
            parts.append(f" |{el.direction}> " if el.direction else ", ")
        parts.append(_pp_elem(el))
    s = "".join(parts)
    if r.pattern.guard != TRUE:
        s += f" / {_pp(r.pattern.guard)}"
    return f"{s} => {_pp(r.replacement, True)}"


# -- type syntax ---------------------------------------------------------------

_TYPE_TOKEN = re.compile(r"\s*(->|<=|[\[\]()|&?,.{}]|[A-Za-z_][A-Za-z0-9_']*|[01])")


def _type_tokens(src: str) -> list:
    out, pos = [], 0
    src = src.rstrip()
    while pos < len(src):
        m = _TYPE_TOKEN.match(src, pos)
        if not m:
            raise SyntaxError_(f"bad type syntax near {src[pos:pos + 10]!r}", 1, pos + 1)
        out.append(m.group(1))
        pos = m.end()
    out.append("")
    return out


class _TypeParser:
    def __init__(self, src):
        self.toks = _type_tokens(src)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def eat(self, t):
        if self.tok != t:
            raise SyntaxError_(f"expected {t!r} in type, found {self.tok!r}", 1, self.i + 1)
        self.i += 1

    def arrow(self):
        left = self.union()
        if self.tok == "->":
            self.i += 1
            return T.Arrow(left, self.arrow())
        return left

    def union(self):
        items = [self.inter()]
        while self.tok == "|":
            self.i += 1
            items.append(self.inter())
        return T.union(*items) if len(items) > 1 else items[0]

    def inter(self):
        items = [self.cond()]
        while self.tok == "&":
            self.i += 1
            items.append(self.cond())
        return T.inter(*items) if len(items) > 1 else items[0]

    def cond(self):
        body = self.prefix()
        if self.tok == "?":
            self.i += 1
            return T.Cond(body, self.prefix())
        return body

    def prefix(self):
        if self.tok == "[":
            self.i += 1
            name = self.tok
            self.i += 1
            self.eat("]")
            topo = T.TopoSym(name) if name in T.TOPOLOGIES else T.TopoVar(name)
            return T.Coll(topo, self.prefix())
        return self.atom()

    def atom(self):
        t = self.tok
        if t == "(":
            self.i += 1
            inner = self.arrow()
            self.eat(")")
            return inner
        self.i += 1
        if t == "0":
            return T.ZERO
        if t == "1":
            return T.ONE
        if t in T.BASE_TYPES:
            return T.Base(t)
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", t or "-"):
            return T.TVar(t)
        raise SyntaxError_(f"unexpected {t!r} in type", 1, self.i)

    def scheme(self):
        q = []
        if self.tok == "forall":
            self.i += 1
            while self.tok not in (".", ""):
                if self.tok != ",":
                    q.append(self.tok)
                self.i += 1
            self.eat(".")
        body = self.arrow()
        cons = []
        if self.tok == "where":
            self.i += 1
            self.eat("{")
            while self.tok != "}":
                lhs = self.arrow()
                self.eat("<=")
                cons.append(T.Constraint(lhs, self.arrow(), "source"))
                if self.tok == ",":
                    self.i += 1
            self.eat("}")
        topo_names = set()
        for v in T.free_vars(body) | {x for c in cons for x in T.free_vars(c)}:
            if isinstance(v, T.TopoVar):
                topo_names.add(v.name)
        quantified = tuple(T.TopoVar(n) if n in topo_names else T.TVar(n) for n in q)
        return T.TypeScheme(quantified, body, tuple(cons))


def parse_type(src: str) -> T.Type:
    p = _TypeParser(src)
    t = p.arrow()
    if p.tok != "":
        raise SyntaxError_(f"trailing input in type: {p.tok!r}", 1, p.i + 1)
    return t


def parse_scheme(src: str) -> T.TypeScheme:
    p = _TypeParser(src)
    s = p.scheme()
    if p.tok != "":
        raise SyntaxError_(f"trailing input in scheme: {p.tok!r}", 1, p.i + 1)
    return s


def parse_constraints(src: str) -> list:
    """Parse ``lhs <= rhs`` (or ``lhs = rhs``) items separated by commas or newlines."""
    out = []
    for part in re.split(r"[,\n]", src):
        part = part.strip()
        if not part:
            continue
        if "<=" in part:
            l, r = part.split("<=", 1)
            out.append(T.Constraint(parse_type(l), parse_type(r), "source"))
        elif "=" in part:
            l, r = part.split("=", 1)
            lt, rt = parse_type(l), parse_type(r)
            out += [T.Constraint(lt, rt, "source"), T.Constraint(rt, lt, "source")]
        else:
            raise SyntaxError_(f"expected a constraint, found {part!r}")
    return out


# -- JSON AST dump ----------------------------------------------------------------

def to_json(e) -> dict:
    if isinstance(e, Var):
        return {"kind": "var", "name": e.name}
    if isinstance(e, Const):
        return {"kind": "const", "name": e.name}
    if isinstance(e, Lambda):
        return {"kind": "lambda", "param": e.param, "body": to_json(e.body)}
    if isinstance(e, App):
        return {"kind": "app", "fn": to_json(e.fn), "arg": to_json(e.arg)}
    if isinstance(e, Let):
        return {"kind": "let", "name": e.name, "bound": to_json(e.bound), "body": to_json(e.body)}
    if isinstance(e, Trans):
        return {"kind": "trans", "rules": [to_json(r) for r in e.rules]}
    if isinstance(e, Rule):
        return {"kind": "rule", "pattern": to_json(e.pattern), "replacement": to_json(e.replacement)}
    if isinstance(e, Pattern):
        return {"kind": "pattern", "elements": [to_json(x) for x in e.elements], "guard": to_json(e.guard)}
    if isinstance(e, Elem):
        return {"kind": "elem", "var": e.var, "base": e.base, "star": e.star, "direction": e.direction}
    raise TypeError(f"cannot serialise {e!r}")


def from_json(d: dict):
    k = d["kind"]
    if k == "var":
        return Var(d["name"])
    if k == "const":
        return Const(d["name"])
    if k == "lambda":
        return Lambda(d["param"], from_json(d["body"]))
    if k == "app":
        return App(from_json(d["fn"]), from_json(d["arg"]))
    if k == "let":
        return Let(d["name"], from_json(d["bound"]), from_json(d["body"]))
    if k == "trans":
        return Trans(tuple(from_json(r) for r in d["rules"]))
    if k == "rule":
        return Rule(from_json(d["pattern"]), from_json(d["replacement"]))
    if k == "pattern":
        return Pattern(tuple(from_json(x) for x in d["elements"]), from_json(d["guard"]))
    if k == "elem":
        return Elem(d["var"], d.get("base"), d.get("star", False), d.get("direction"))
    raise ValueError(f"unknown node kind {k!r}")


def dumps(e) -> str:
    return json.dumps(to_json(e), indent=2)
