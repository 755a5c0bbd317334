"""End-to-end check of one closed program: type it, run it, and test that a
first-order result inhabits its inferred scheme."""

from __future__ import annotations

import itertools
import random
import re
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import runtime as R
from . import solver as V
from . import syntax as S
from .constraints import typecheck_soft_expr
from .infer_strong import infer_scheme
from .types import (FiniteUniverse, Substitution, TVar, TopoSym, TopoVar,
                    TypeScheme, TOPOLOGIES, contains_closure, member)
from .values import show_value

_EXPECT = re.compile(r"^\s*//\s*expect:\s*(.+?)\s*$", re.MULTILINE)
_FIX = re.compile(r"^\s*//\s*fix\s*$", re.MULTILINE)


@dataclass
class ProgramReport:
    name: str
    dialect: str
    scheme: str = ""
    outcome: str = ""
    member: Optional[bool] = None   # None: result is a function or an error outcome
    expected_ok: Optional[bool] = None
    error: str = ""
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return (not self.error and self.outcome != str(R.Err.WRONG)
                and self.member is not False and self.expected_ok is not False)


def instances(sc: TypeScheme, u: FiniteUniverse, rng: random.Random, limit: int = 40):
    """Ground instances of ``sc`` whose constraints hold, sampled from the lattice."""
    tvs = [v.name for v in sc.quantified if isinstance(v, TVar)]
    rvs = [v.name for v in sc.quantified if isinstance(v, TopoVar)]
    lattice = u.ground_types(1)
    combos = list(itertools.product(lattice, repeat=len(tvs)))
    if len(combos) > limit:
        combos = rng.sample(combos, limit)
    out = []
    for combo in combos:
        s = Substitution(dict(zip(tvs, combo)),
                         {r: TopoSym(rng.choice(TOPOLOGIES)) for r in rvs})
        if V.check_solution(sc.constraints, s, u):
            out.append(s)
    return out


def result_in_scheme(v, sc: TypeScheme, u: Optional[FiniteUniverse] = None,
                     seed: int = 0) -> Optional[bool]:
    """Membership of ``v`` in every sampled instance of ``sc``; None for functions."""
    if contains_closure(v):
        return None
    u = u or FiniteUniverse()
    if not sc.quantified:
        return member(v, sc.body, Substitution(), u)
    rng = random.Random(seed)
    return all(member(v, sc.body, s, u) for s in instances(sc, u, rng))


def typecheck(e: S.Expr, dialect: str, refine_catch_all: bool = False) -> TypeScheme:
    if dialect == "strong":
        return infer_scheme(e)
    return typecheck_soft_expr(e, refine_catch_all).scheme


def check_program(source: str, dialect: str, name: str = "<program>",
                  fuel: Optional[int] = None) -> ProgramReport:
    rep = ProgramReport(name, dialect)
    t0 = time.perf_counter()
    try:
        e = S.parse(source, dialect)
        sc = typecheck(e, dialect)
    except Exception as err:  # a corpus program that fails to type is a failure
        rep.error = f"{type(err).__name__}: {err}"
        rep.seconds = time.perf_counter() - t0
        return rep
    rep.scheme = str(sc)
    res = R.run(e, fuel=fuel, fix=bool(_FIX.search(source)))
    if isinstance(res, R.Err):
        rep.outcome = str(res)
    else:
        rep.outcome = show_value(res)
        rep.member = result_in_scheme(res, sc)
    m = _EXPECT.search(source)
    if m:
        rep.expected_ok = m.group(1) == rep.outcome
    rep.seconds = time.perf_counter() - t0
    return rep


def corpus_files(root: Path):
    """Yields (path, dialect) for ``root/strong/*`` and ``root/soft/*``, or for
    ``root`` itself when it is named after a dialect."""
    root = Path(root)
    if root.name in ("strong", "soft"):
        for p in sorted(root.glob("*.mgs")):
            yield p, root.name
        return
    for d in ("strong", "soft"):
        for p in sorted((root / d).glob("*.mgs")):
            yield p, d


def check_corpus(root, fuel: Optional[int] = None) -> list:
    return [check_program(p.read_text(encoding="utf-8"), d, p.name, fuel)
            for p, d in corpus_files(root)]
