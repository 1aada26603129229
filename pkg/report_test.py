import json

from catalog import H21_THREE_LABELS
from report import (
    KNOWN_DEVIATIONS,
    TABLE1_EXPECTED,
    TABLE2_EXPECTED,
    CaseReport,
    MatchState,
    Pi1Fragment,
    Report,
    markdown_cells,
    match_state,
    summarize,
    to_json,
)


def test_golden_tables_cover_the_h21_three_cases():
    assert set(TABLE1_EXPECTED) == set(H21_THREE_LABELS)
    assert tuple(TABLE2_EXPECTED[label] for label in H21_THREE_LABELS) == (0, 1, 1, 1, 2, 1, 1, 3, 1, 1)


def test_match_state():
    assert match_state("table2", "0-1", 0, 0) == MatchState.YES
    assert match_state("table2", "2-12", 1, 3) == MatchState.DEVIATION
    assert match_state("table2", "0-4", 2, 1) == MatchState.NO
    assert match_state("table1", "1-2", "raw[4]", None) == MatchState.UNLISTED
    assert all(table in ("table1", "table2", "kernel") for table, _ in KNOWN_DEVIATIONS)


def _pi1_case(label, computed, expected):
    fragment = Pi1Fragment(label=label, pi1=computed, n_rank=6, quotient_order=1, expected=expected,
                           match=match_state("pi1", label, computed, expected))
    return CaseReport(label=label, pi1=fragment)


def test_summary_separates_mismatches():
    summary = summarize([_pi1_case("0-1", "0", "0"), _pi1_case("1-1", "0", "C")])
    assert summary.mismatches == ["pi1 (1-1)"]
    assert not summary.passed


def test_json_is_sorted_and_formatted():
    report = Report(config={"tol": 1e-15, "seed": 4 ** 64}, cases=[_pi1_case("0-1", "0", "0")],
                    summary=summarize([]))
    text = to_json(report)
    data = json.loads(text)
    assert data["schema"] == "cy3lab/1"
    assert data["config"]["tol"] == "1.000000e-15"
    assert data["config"]["seed"] == str(4 ** 64)
    assert "normalizer" not in data["cases"][0]
    assert text == to_json(report)
    assert list(data) == sorted(data)


def test_markdown_cells():
    text = "## T\n\n| a   | b |\n|-----|---|\n| 1   | x |\n"
    assert markdown_cells(text) == [["a", "b"], ["1", "x"]]
