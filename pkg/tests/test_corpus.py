from pathlib import Path

import pytest

from topocheck import runtime as R
from topocheck.corpus import check_program, corpus_files, result_in_scheme
from topocheck import syntax as S
from topocheck.values import Collection

ROOT = Path(__file__).parents[1] / "corpus"
FILES = list(corpus_files(ROOT))


@pytest.mark.parametrize("path,dialect", FILES, ids=lambda x: getattr(x, "stem", x))
def test_program(path, dialect):
    rep = check_program(path.read_text(), dialect, path.name)
    assert not rep.error
    assert rep.outcome != str(R.Err.WRONG)
    assert rep.member is not False, (rep.scheme, rep.outcome)
    assert rep.expected_ok is True, rep.outcome


def test_corpus_size():
    assert sum(d == "strong" for _, d in FILES) >= 30
    assert sum(d == "soft" for _, d in FILES) >= 30


def test_result_in_scheme():
    sc = S.parse_scheme("[set] (int | bool)")
    assert result_in_scheme(Collection.from_values("set", [1, True]), sc)
    assert not result_in_scheme(Collection.from_values("seq", [1]), sc)
    poly = S.parse_scheme("forall a. [seq] a")
    assert result_in_scheme(Collection.empty("seq"), poly)
    assert not result_in_scheme(Collection.from_values("seq", [1]), poly)


def test_missing_expectation_is_reported():
    rep = check_program("// expect: 3\n1 + 1", "soft")
    assert rep.expected_ok is False and not rep.passed


def test_ill_typed_program_is_an_error():
    rep = check_program("1 + true", "strong")
    assert rep.error and not rep.passed
