import json
import shutil
from importlib import resources
from pathlib import Path

import pytest

from e7paving.cli import main
from e7paving.report import ConfigError, OutputWriter, RunConfig, resolve_params


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def golden_dir() -> Path:
    return Path(str(resources.files("e7paving.golden")))


@pytest.mark.parametrize("argv", [
    ["analyze", "--primes", "4,5"],
    ["analyze", "--primes", "5,5,7"],
    ["analyze", "--primes", "5,7", "--holdout", "7"],
    ["analyze", "--case", "E8"],
    ["analyze", "--trials", "0"],
    ["analyze", "--jobs", "0"],
    ["analyze", "--golden", "/nonexistent/golden"],
    ["analyze", "--out", "/proc/e7paving-out"],
    ["cells", "00|10|2|3"],
    ["cells", "--case", "E7a4", "01|10|2|3"],
    ["frobnicate"],
])
def test_config_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_unknown_params_list_nearest():
    with pytest.raises(ConfigError, match="nearest valid tuples: .*00\\|10\\|2\\|3"):
        resolve_params("E7a4", "01|10|2|3")


def test_run_config_defaults():
    cfg = RunConfig()
    assert cfg.cases == ("E7a4", "E7a5") and cfg.primes == (2, 3, 5, 7, 11, 13, 17)
    assert cfg.to_dict()["holdouts"] == [19]


def test_list_cases(capsys):
    code, out, _ = run(capsys, "list-cases")
    assert code == 0
    assert "E7a4" in out and "flag dim 5" in out and "stabilizer rank 17 OK" in out
    assert "flag dim 7" in out and "stabilizer rank 21 OK" in out
    code, out, _ = run(capsys, "list-cases", "--format", "json")
    doc = json.loads(out)
    assert doc["schema_version"] == 1 and [c["stabilizer_rank"] for c in doc["cases"]] == [17, 21]


def test_graph_outputs(capsys):
    code, out, _ = run(capsys, "graph", "--case", "E7a5")
    assert code == 0 and out.count("subgraph cluster_") == 3
    code, out, _ = run(capsys, "graph", "--case", "E7a4", "--format", "json")
    doc = json.loads(out)
    assert doc["components"][1] == ["10|21|2|2"]


def test_cells_report(capsys):
    code, out, _ = run(capsys, "cells", "--case", "E7a4", "0,0|1,0|2|3")
    assert code == 0
    assert len([line for line in out.splitlines() if line.startswith("a=")]) == 24
    code, out, _ = run(capsys, "cells", "--case", "E7a4", "00|10|2|3", "--format", "json")
    assert len(json.loads(out)["cells"]) == 24


def test_blowup_subcommand(capsys, tmp_path):
    code, out, _ = run(capsys, "blowup")
    assert code == 0 and "identity" in out
    code, _, _ = run(capsys, "blowup", "--format", "json", "--out", str(tmp_path))
    doc = json.loads((tmp_path / "E7a5" / "blowup.json").read_text())
    assert doc["ok"] and doc["identity_ok"] and doc["cells_ok"]


def test_analyze_is_deterministic_and_matches_goldens(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(capsys, "analyze", "--case", "E7a4", "--out", str(a))[0] == 0
    assert run(capsys, "analyze", "--case", "E7a4", "--out", str(b))[0] == 0
    files = sorted(p.relative_to(a) for p in a.rglob("*") if p.is_file())
    assert Path("E7a4/report.json") in files and Path("E7a4/graph.dot") in files
    assert not [p for p in a.iterdir() if p.name.startswith(".partial-")]
    for rel in files:
        assert (a / rel).read_bytes() == (b / rel).read_bytes(), rel
    for name in ("table1_e7a4_component1.csv", "table2_e7a4_component2.csv"):
        assert (a / "E7a4" / name).read_text() == (golden_dir() / name).read_text()
    report = json.loads((a / "E7a4" / "report.json").read_text())
    assert report["schema_version"] == 1 and report["passed"] and report["discrepancies"] == []


def test_tampered_golden_exits_1_and_bless_restores(capsys, tmp_path):
    gold = tmp_path / "golden"
    shutil.copytree(golden_dir(), gold, ignore=shutil.ignore_patterns("*.py", "__pycache__"))
    table = gold / "table1_e7a4_component1.csv"
    original = table.read_text()
    table.write_text(original.replace('00|10,2,"4,3"', '00|10,2,"4,2"'))
    code, out, _ = run(capsys, "analyze", "--case", "E7a4", "--golden", str(gold))
    assert code == 1 and "expected 4,2, got 4,3" in out
    code, out, _ = run(capsys, "analyze", "--case", "E7a4", "--golden", str(gold), "--bless")
    assert code == 0 and table.read_text() == original


def test_output_writer_stages_until_commit(tmp_path):
    w = OutputWriter(tmp_path)
    w.add({"x/report.json": "{}\n"})
    assert (w.staging / "x" / "report.json").exists() and not (tmp_path / "x").exists()
    w.commit()
    assert (tmp_path / "x" / "report.json").read_text() == "{}\n" and not w.staging.exists()
