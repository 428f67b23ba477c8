import pytest

from fareyrank.sequence import generate_sequence
from fareyrank.table import DirectionTable, build_table

_SEQ = {}
_TAB = {}


def seq_of(n):
    if n not in _SEQ:
        _SEQ[n] = generate_sequence(n)
    return _SEQ[n]


def table_of(n):
    if n not in _TAB:
        _TAB[n] = build_table(seq_of(n))
    return _TAB[n]


def directions_of(n):
    return DirectionTable(table_of(n), seq_of(n))


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("FAREYRANK_CACHE_DIR", str(tmp_path / "cache"))
