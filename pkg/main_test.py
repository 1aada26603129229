import json

import pytest
from click.testing import CliRunner

from catalog import CATALOG_PATH, entries_by_label, load_catalog
from main import EXIT_MISMATCH, EXIT_PASS, EXIT_USAGE, RunConfig, cli, oracle_case, resolve_cases
from errors import UsageError
from report import GOLDEN_TABLE2, Task, markdown_cells


@pytest.fixture
def runner():
    return CliRunner()


def test_unknown_label_is_a_usage_error(runner):
    result = runner.invoke(cli, ["report", "--cases", "9-9"])
    assert result.exit_code == EXIT_USAGE
    assert "unknown case label" in result.output


def test_picard_needs_h21_three(runner):
    result = runner.invoke(cli, ["report", "--cases", "1-2", "--tasks", "picard"])
    assert result.exit_code == EXIT_USAGE


@pytest.mark.parametrize("args", [["--tol", "0"], ["--tasks", "plotting"], ["--samples", "0"]])
def test_invalid_options(runner, args):
    assert runner.invoke(cli, ["report", "--cases", "0-1", *args]).exit_code == EXIT_USAGE


def test_resolve_cases_keeps_catalog_order():
    config = RunConfig(cases="4-1,0-1", tasks=[Task.HODGE])
    assert [e.label for e in resolve_cases(config, load_catalog())] == ["0-1", "4-1"]
    with pytest.raises(UsageError):
        resolve_cases(RunConfig(cases="3-2"), load_catalog())


def test_report_for_case_0_1(runner, tmp_path):
    outputs = []
    for workers in ("1", "3"):
        out = tmp_path / f"report{workers}.json"
        result = runner.invoke(cli, ["--quiet", "report", "--cases", "0-1", "--tasks", "normalizer,picard,hodge,pi1",
                                     "--workers", workers, "--out", str(out)])
        assert result.exit_code == EXIT_PASS, result.output
        outputs.append(out.read_text(encoding="utf-8"))
    assert outputs[0] == outputs[1]

    report = json.loads(outputs[0])
    assert report["schema"] == "cy3lab/1"
    (case,) = report["cases"]
    assert case["normalizer"]["l0Name"] == "S^3⋊S_3"
    assert case["normalizer"]["lOrder"] == 1296
    assert case["picard"]["rankQ"] == 0
    assert case["hodge"]["h11"] == 51 and case["hodge"]["h21"] == 3
    assert case["hodge"]["resolutionChoicesUpperBound"] == "340282366920938463463374607431768211456"
    assert case["pi1"]["pi1"] == "0"
    assert report["summary"]["passed"] is True


def test_toric_report(runner, tmp_path):
    out = tmp_path / "toric.json"
    result = runner.invoke(cli, ["--quiet", "report", "--tasks", "toric", "--out", str(out)])
    assert result.exit_code == EXIT_PASS
    toric = json.loads(out.read_text(encoding="utf-8"))["toric"]
    assert toric["flopGraph"] == [[0, 1], [0, 2], [0, 3]]
    assert toric["relation"] == "abc = d^2"
    assert [t["isCentral"] for t in toric["triangulations"]] == [True, False, False, False]


def test_modular_report_formats_floats(runner, tmp_path):
    out = tmp_path / "modular.json"
    result = runner.invoke(cli, ["--quiet", "report", "--tasks", "modular", "--samples", "3", "--out", str(out)])
    assert result.exit_code == EXIT_PASS
    modular = json.loads(out.read_text(encoding="utf-8"))["modular"]
    assert modular["passed"] is True
    assert modular["samples"] == 3
    assert "e" in modular["maxDeltaResidual"]


def test_table2_markdown_matches_golden(runner, tmp_path):
    out = tmp_path / "table2.md"
    result = runner.invoke(cli, ["--quiet", "report", "--tasks", "picard", "--format", "markdown", "--out", str(out)])
    assert result.exit_code == EXIT_PASS
    golden = (CATALOG_PATH.parent / GOLDEN_TABLE2).read_text(encoding="utf-8")
    text = out.read_text(encoding="utf-8")
    assert text.splitlines()[0] == golden.splitlines()[0] == "## Table 2: Picard ranks"
    assert markdown_cells(text) == markdown_cells(golden)
    assert len(markdown_cells(text)) == 11


def test_tampered_catalog_fails_hodge(runner, tmp_path):
    tampered = tmp_path / "catalog.txt"
    text = CATALOG_PATH.read_text(encoding="utf-8")
    tampered.write_text(text.replace("| - | 51 3 | 0", "| - | 50 3 | 0"), encoding="utf-8")
    result = runner.invoke(cli, ["--quiet", "verify", "--criteria", "hodge", "--catalog", str(tampered)])
    assert result.exit_code == EXIT_MISMATCH
    assert "[FAIL] hodge" in result.output
    assert "(0-1)" in result.output


def test_verify_selected_criteria(runner):
    result = runner.invoke(cli, ["--quiet", "verify", "--criteria", "toric,properties"])
    assert result.exit_code == EXIT_PASS, result.output
    assert "[PASS] toric" in result.output
    assert "[PASS] properties" in result.output


def test_unknown_criterion(runner):
    assert runner.invoke(cli, ["verify", "--criteria", "speed"]).exit_code == EXIT_USAGE


@pytest.mark.parametrize("label", ["1-11", "4-1"])
def test_oracle_case_includes_generators_of_L(label):
    entry = entries_by_label(load_catalog())[label]
    report = oracle_case(entry, seed=5, samples=20)
    assert report.checked > 20
    assert report.agreed == report.checked
