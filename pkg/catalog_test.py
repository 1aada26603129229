import pytest

from catalog import (
    CATALOG_PATH,
    DELETED_LABELS,
    FactorBase,
    H21_THREE_LABELS,
    Pi1Label,
    canonical,
    entries_by_label,
    load_catalog,
    parse_case_notation,
    parse_catalog,
    parse_triple,
    relabel_factors,
)
from errors import CatalogError

LINE_01 = "0-1 | (0+,0-,0-) (0-,0+,0-) | - | 51 3 | 0"


@pytest.fixture(scope="module")
def entries():
    return load_catalog()


def test_catalog_has_35_unique_rows(entries):
    labels = [e.label for e in entries]
    assert len(labels) == 35
    assert len(set(labels)) == 35
    assert not set(DELETED_LABELS) & set(labels)
    assert set(H21_THREE_LABELS) <= set(labels)


def test_every_line_round_trips():
    lines = [line.strip() for line in CATALOG_PATH.read_text(encoding="utf-8").splitlines()
             if line.strip() and not line.startswith("#")]
    for line in lines:
        assert canonical(line) == line


def test_parse_first_row():
    entry = parse_case_notation(LINE_01)
    assert entry.label == "0-1"
    assert entry.rank == 0 and entry.index == 1
    assert entry.expected_hodge == (51, 3)
    assert entry.expected_pi1 == Pi1Label.ZERO
    assert entry.twist_gens[0][0].base == FactorBase.ZERO
    assert entry.shift_gens == ()


def test_whitespace_is_normalized():
    assert canonical("0-1|(0+,0-,0-)   (0-,0+,0-)|-|51 3|0") == LINE_01


def test_shift_triple():
    triple = parse_triple("(1t,t,0)")
    assert [s.shift for s in triple] == [(1, 1), (0, 1), (0, 0)]
    assert all(s.sign is None for s in triple)


@pytest.mark.parametrize("line, message", [
    ("0-1 | (0+,0-,0-) (0-,0+,0x) | - | 51 3 | 0", "malformed symbol '0x'"),
    ("0-1 | (0+,0-,0-) (0-,0+,2-) | - | 51 3 | 0", "malformed symbol '2-'"),
    ("0-1 | (0+,0+,0-) (0-,0+,0-) | - | 51 3 | 0", "odd number of minus signs"),
    ("0-1 | (0+,0-,0-) | - | 51 3 | 0", "expected 2 twist generators"),
    ("1-1 | (0+,0-,0-) (0-,0+,0-) | - | 27 3 | C", "declares r=1"),
    ("1-1 | (0+,0-,0-) (0-,0+,0-) | (t+,t,t) | 27 3 | C", "must not carry signs"),
    ("0-1 | (0+,0-,0-) (0-,0+,0-) | - | 51 3 | E", "cannot parse"),
])
def test_malformed_lines(line, message):
    with pytest.raises(CatalogError, match=message):
        parse_case_notation(line)


def test_errors_carry_line_numbers():
    text = "# header\n" + LINE_01 + "\n0-2 | (0+,0-,0-) (0-,0+,1+) | - | 19 19 | 0\n"
    with pytest.raises(CatalogError) as info:
        parse_catalog(text)
    assert info.value.line_number == 3
    assert str(info.value).startswith("line 3:")


def test_deleted_case_is_rejected():
    text = LINE_01 + "\n3-2 | (0+,0-,0-) (0-,0+,0-) | (0,1,1);(1,0,1);(1,1,0) | 27 3 | 0\n"
    with pytest.raises(CatalogError, match=r"deleted case present: \(3-2\)"):
        parse_catalog(text)


def test_duplicate_and_count():
    with pytest.raises(CatalogError, match="duplicate label 0-1"):
        parse_catalog(LINE_01 + "\n" + LINE_01)
    with pytest.raises(CatalogError, match="entry count 1"):
        parse_catalog(LINE_01)


def test_relabel_factors(entries):
    entry = entries_by_label(entries)["0-2"]
    assert relabel_factors(entry, (0, 1, 2)) == entry
    swapped = relabel_factors(entry, (1, 0, 2))
    assert swapped.twist_gens[0][1].render() == "0+"
    assert swapped.twist_gens[1][2].render() == "1-"
    assert relabel_factors(swapped, (1, 0, 2)) == entry
