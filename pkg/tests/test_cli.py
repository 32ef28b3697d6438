import copy
import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

from chiralbrst.cli import (
    EXIT_AUDIT,
    EXIT_INPUT,
    EXIT_OK,
    bundled_scenarios,
    load_document,
    main,
    scenario_hash,
)
from chiralbrst.dglie_ce import sl2

ROOT = Path(__file__).resolve().parents[1]
G = sl2()


def _write(tmp_path, doc, name="scenario.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_list_scenarios(capsys):
    assert main(["list-scenarios"]) == EXIT_OK
    out = capsys.readouterr().out
    for name in ("sl2_classical_brst", "sl2_c2", "sl2_glue"):
        assert name in out


def test_describe_prints_resolved_objects(capsys):
    assert main(["describe", "sl2_classical_brst"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "sha256=" in out and "sl2" in out


def test_run_writes_hashed_tables(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["run", "sl2_classical_brst", "--out", str(out)]) == EXIT_OK
    digest = scenario_hash(load_document("sl2_classical_brst"))
    tables = sorted(out.glob("*.csv"))
    assert tables
    for t in tables:
        assert t.read_text().splitlines()[0] == f"# scenario_sha256,{digest}"
    report = json.loads((out / "report.json").read_text())
    assert report["scenario_sha256"] == digest
    assert all(c["ok"] for c in report["computations"])
    brst = (out / "01_classical_brst_cohomology.csv").read_text()
    assert "0,0,1" in brst and "3,0,1" in brst


def test_tables_are_byte_identical_across_runs(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["run", "sl2_c2", "--out", str(a)]) == EXIT_OK
    assert main(["run", "sl2_c2", "--out", str(b)]) == EXIT_OK
    for t in sorted(a.glob("*.csv")):
        assert t.read_bytes() == (b / t.name).read_bytes()


def test_cache_reuses_results(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("CHIRALBRST_CACHE_DIR", str(tmp_path / "cache"))
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["run", "sl2_classical_brst", "--out", str(a)]) == EXIT_OK
    assert list((tmp_path / "cache").glob("*.json"))
    assert main(["run", "sl2_classical_brst", "--out", str(b)]) == EXIT_OK
    for t in sorted(a.glob("*.csv")):
        assert t.read_bytes() == (b / t.name).read_bytes()


def test_malformed_json_exits_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert main(["run", str(p)]) == EXIT_INPUT


def test_schema_violation_exits_2(tmp_path, capsys):
    doc = load_document("sl2_classical_brst")
    del doc["computations"]
    assert main(["run", _write(tmp_path, doc)]) == EXIT_INPUT
    assert "error" in capsys.readouterr().err


def test_unknown_reference_exits_2(tmp_path, capsys):
    doc = copy.deepcopy(load_document("sl2_classical_brst"))
    doc["computations"][1]["momentum"] = "missing"
    assert main(["run", _write(tmp_path, doc)]) == EXIT_INPUT


def test_unknown_basis_name_exits_2(tmp_path, capsys):
    doc = copy.deepcopy(load_document("sl2_classical_brst"))
    doc["lie_algebras"]["sl2"]["structure_constants"][0][2] = "z"
    assert main(["describe", _write(tmp_path, doc)]) == EXIT_INPUT


def test_failing_audit_exits_1(tmp_path, capsys):
    doc = copy.deepcopy(load_document("sl2_classical_brst"))
    doc["lie_algebras"]["sl2"]["structure_constants"][1][3] = "3"
    assert main(["run", _write(tmp_path, doc)]) == EXIT_AUDIT


@pytest.mark.parametrize("suite", ["koszul-signs", "jacobi", "nilpotency", "gr-compat-sl2"])
def test_verify_suites_pass(suite, capsys):
    assert main(["verify", suite]) == EXIT_OK
    assert "FAIL" not in capsys.readouterr().out


@pytest.mark.parametrize("seed", [0, 1, 7])
def test_wrong_constant_is_named(seed, capsys):
    assert main(["verify", "wrong-constant", "--seed", str(seed)]) == EXIT_AUDIT
    out = capsys.readouterr().out
    m = re.search(r"injected constant \[(\w), (\w)\] on (\w) = ", out)
    assert out.startswith("FAIL") and m
    x, y, z = m.groups()
    names = G.names
    true = G.brackets.get((names.index(x), names.index(y)), {}).get(names.index(z), 0)
    # the repair list restores the injected constant to its true value
    assert f"[{x}, {y}] on {z} := {true}" in out


def test_docs_schema_matches_package_schema():
    docs = (ROOT / "docs" / "scenario.schema.json").read_text()
    pkg = (ROOT / "src" / "chiralbrst" / "scenarios" / "scenario.schema.json").read_text()
    assert json.loads(docs) == json.loads(pkg)


def test_bundled_scenarios_validate():
    for name in bundled_scenarios():
        assert load_document(name)["computations"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "chiralbrst", "list-scenarios"], capture_output=True, text=True)
    assert proc.returncode == 0 and "sl2_glue" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "chiralbrst", "run", "no_such_scenario"], capture_output=True, text=True)
    assert proc.returncode == 2
