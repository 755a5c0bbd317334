import json
import subprocess
import sys
from pathlib import Path

import pytest

from topocheck import syntax as S
from topocheck.cli import main
from topocheck.types import (alpha_equivalent, constraint_from_json, constraint_to_json,
                             type_from_json)

ROOT = Path(__file__).parents[1] / "corpus"


@pytest.fixture
def prog(tmp_path):
    def write(text, name="p.mgs"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_typecheck_strong_sort(capsys, prog):
    f = prog("{ x,y / x>y => [x, y, (x-y)] ; x => [x] }", "sort.mgs")
    assert run(capsys, "typecheck", "--strong", f) == (0, "forall t. [t] int -> [t] int\n", "")


def test_typecheck_soft_boolify(capsys, prog):
    f = prog("{ x:int => [true] }", "boolify.mgs")
    code, out, _ = run(capsys, "typecheck", "--soft", f)
    assert code == 0
    assert alpha_equivalent(S.parse_scheme(out.strip()),
                            S.parse_scheme("forall a,t. [t] a -> [t] (a | bool ? (a & int))"))


def test_refine_flag(capsys, prog):
    f = prog("fun f -> { x => [f x] }")
    assert run(capsys, "typecheck", "--soft", "--refine-catchall", f)[1].strip() == \
        "forall a,b,t. (a -> b) -> [t] a -> [t] b"


def test_run_sort_fix(capsys, prog):
    f = prog("{ x, y / x > y => [y, x] ; x => [x] } [3, 2, 4, 2]", "sort.mgs")
    assert run(capsys, "run", "--fix", f) == (0, "[2, 2, 3, 4]\n", "")


@pytest.mark.parametrize("src,code,shown", [
    ("true + 1", 1, "Wrong"),
    ("{ x => [x, x] } (1 :: empty_grid)", 2, "ShapeErr"),
])
def test_run_error_exit_codes(capsys, prog, src, code, shown):
    assert run(capsys, "run", prog(src))[:2] == (code, shown + "\n")


def test_run_out_of_fuel(capsys, prog):
    f = prog("{ x, y / x > y => [y, x] ; x => [x] } (1 est 2 :: empty_grid)")
    assert run(capsys, "run", "--fix", "--fuel", "2000", f)[:2] == (3, "OutOfFuel\n")


def test_fuel_from_environment(capsys, prog, monkeypatch):
    monkeypatch.setenv("TOPOCHECK_FUEL", "50")
    f = prog("{ x, y / x > y => [y, x] ; x => [x] } (1 est 2 :: empty_grid)")
    assert run(capsys, "run", "--fix", f)[0] == 3


def test_type_error_goes_to_stderr(capsys, prog):
    code, out, err = run(capsys, "typecheck", "--strong", prog("1 + true"))
    assert code == 1 and out == "" and "type error" in err
    code, _, err = run(capsys, "typecheck", "--strong", prog("{ x:int => [x] }"))
    assert code == 1 and "strong" in err


def test_typecheck_json_round_trip(capsys, prog):
    f = prog("{ x:int => [true] }")
    code, out, _ = run(capsys, "typecheck", "--soft", "--json", f)
    data = json.loads(out)
    assert code == 0
    sc = type_from_json(data["scheme"])
    assert str(sc) == run(capsys, "typecheck", "--soft", f)[1].strip()


def test_trace(capsys, prog):
    f = prog("{ x => [x] }")
    code, out, _ = run(capsys, "typecheck", "--strong", "--trace", "--json", f)
    steps = json.loads(out)["trace"]
    assert steps[-1]["rule"] == "trans"


def test_constraints_then_solve(capsys, prog, tmp_path):
    f = prog("{ x:int => [true] }")
    code, out, _ = run(capsys, "constraints", "--json", f)
    data = json.loads(out)
    cs = [constraint_from_json(c) for c in data["constraints"]]
    assert [constraint_to_json(c) for c in cs] == data["constraints"]
    dump = tmp_path / "cs.json"
    dump.write_text(out)
    code, out, _ = run(capsys, "solve", str(dump))
    assert code == 0 and "least solution" in out
    assert out.strip().splitlines()[-1].startswith("type: [")


def test_solve_unsolvable(capsys, tmp_path):
    cs = S.parse_constraints("[set] int <= [grid] int")
    f = tmp_path / "bad.json"
    f.write_text(json.dumps([constraint_to_json(c) for c in cs]))
    code, out, _ = run(capsys, "solve", str(f))
    assert code == 1 and out.startswith("unsolvable")


def test_constraints_text(capsys, prog):
    code, out, _ = run(capsys, "constraints", prog("{ x => [x] }"))
    assert code == 0 and out.startswith("type: [")


def test_optimize(capsys, prog):
    f = prog("{ x:int => [x]; x:float => [x] }")
    code, out, _ = run(capsys, "optimize", "--content-type", "int", f)
    assert code == 0
    assert out.splitlines()[0] == "{x => [x]}"
    code, _, err = run(capsys, "optimize", "--content-type", "int", prog("1"))
    assert code == 1 and err


def test_check_corpus(capsys):
    code, out, _ = run(capsys, "check-corpus", str(ROOT))
    assert code == 0
    assert out.strip().endswith("68/68 passed")


def test_console_script_is_deterministic(prog):
    f = prog("{ x, y / x > y => [y, x] ; x => [x] } [3, 1, 2]")
    runs = [subprocess.run([sys.executable, "-m", "topocheck.cli", "run", "--fix", f],
                           capture_output=True, text=True) for _ in range(2)]
    assert runs[0].returncode == runs[1].returncode == 0
    assert runs[0].stdout == runs[1].stdout == "[1, 2, 3]\n"
