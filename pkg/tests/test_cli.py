import json
import shutil
import subprocess
import sys

import jsonschema
import pytest

from oredim import cli, harness
from oredim.fixtures import bundled_dir
from oredim.report import SCHEMA_ID, body_bytes, make_report, render_text

from conftest import DATA

ROOT = bundled_dir().parents[2]


def fx(name):
    return str(bundled_dir() / f"{name}.json")


def report_schema():
    return json.loads((bundled_dir().parent / "schemas" / "report.schema.json").read_text())


def run(argv, tmp_path=None):
    args = list(argv)
    path = None
    if tmp_path is not None:
        path = tmp_path / "r.json"
        args += ["--report", str(path)]
    code = cli.main(args)
    return code, (json.loads(path.read_text()) if path else None)


def test_verify_ok(tmp_path, capsys):
    code, rep = run(["verify", fx("jordan4")], tmp_path)
    assert code == cli.EXIT_OK
    assert rep["schema"] == SCHEMA_ID and rep["body"]["command"] == "verify"
    assert rep["body"]["compat"]["completely_compatible"] is True
    jsonschema.validate(rep, report_schema())
    assert "status: pass" in capsys.readouterr().out


def test_verify_incompatible_still_passes(tmp_path):
    code, rep = run(["verify", fx("swap")], tmp_path)
    assert code == cli.EXIT_OK
    assert rep["body"]["compat"]["witnesses"]["sigma"] == {"m": 1, "r": 1, "N": [0]}


@pytest.mark.parametrize("name", ["bad_assoc", "bad_sigma", "bad_delta"])
def test_verify_rejects_corrupted(name, capsys):
    assert cli.main(["verify", str(DATA / f"{name}.json")]) == cli.EXIT_INPUT
    err = capsys.readouterr().err
    assert "rejected" in err and "first witness" in err


def test_dim_examples(tmp_path):
    code, rep = run(["dim", "--kind", "rudim", fx("zmod4")], tmp_path)
    assert code == 0 and rep["body"]["result"]["value"] == 1
    code, rep = run(["dim", "--kind", "corank", fx("f2sq")], tmp_path)
    assert code == 0 and rep["body"]["result"]["value"] == rep["body"]["result"]["check_value"] == 2
    code, rep = run(["dim", "--kind", "corank", "--depth", "2", fx("f2sq")], tmp_path)
    assert rep["body"]["result"]["value"] == 2 and rep["body"]["object"] == "M[x^-1]<=2"
    jsonschema.validate(rep, report_schema())


def test_check_command(tmp_path, capsys):
    code, rep = run(["check", "--theorem", "corank", "--depth", "2", fx("zmod4")], tmp_path)
    assert code == 0
    run_ = rep["body"]["run"]
    assert run_["depths"] == [1, 2] and run_["status"] == "pass"
    assert harness.SCOPE_NOTE in capsys.readouterr().out
    jsonschema.validate(rep, report_schema())


def test_check_skip_is_exit_zero(capsys):
    assert cli.main(["check", "--theorem", "rudim", "--depth", "1", fx("swap")]) == 0
    assert "compatible" in capsys.readouterr().out


def test_suite_bundled(tmp_path, capsys):
    code, rep = run(["suite", "--depth", "1"], tmp_path)
    assert code == 0
    body = rep["body"]
    assert [f["id"] for f in body["fixtures"]] == sorted(f["id"] for f in body["fixtures"])
    assert body["run_counts"]["fail"] == 0
    jsonschema.validate(rep, report_schema())
    out = capsys.readouterr().out
    assert "runs:" in out and not any(line != line.rstrip() for line in out.splitlines())


def test_suite_empty_corpus(tmp_path):
    corpus = tmp_path / "empty"
    corpus.mkdir()
    code, rep = run(["suite", "--corpus", str(corpus)], tmp_path)
    assert code == 0 and rep["body"]["fixtures"] == []
    jsonschema.validate(rep, report_schema())


def test_suite_custom_corpus(tmp_path):
    corpus = tmp_path / "c"
    corpus.mkdir()
    shutil.copy(DATA / "weyl3.json", corpus)
    shutil.copy(DATA / "zmod4-residue.json", corpus)
    code, rep = run(["suite", "--depth", "1", "--corpus", str(corpus)], tmp_path)
    assert code == 0 and len(rep["body"]["fixtures"]) == 2


def test_usage_errors(capsys):
    for argv in ([], ["bogus"], ["dim", fx("zmod4")], ["check", "--theorem", "nope", fx("zmod4")],
                 ["suite", "--depth", "-1"], ["verify", "/does/not/exist.json"],
                 ["suite", "--corpus", "/does/not/exist"]):
        with pytest.raises(SystemExit) as exc:
            sys.exit(cli.main(argv))
        assert exc.value.code == cli.EXIT_INPUT, argv


def test_cap_error_is_input_error(capsys):
    assert cli.main(["dim", "--kind", "rudim", "--depth", "2", "--cap", "16", fx("zmod4")]) == cli.EXIT_INPUT
    assert "cap" in capsys.readouterr().err


def test_failed_assertion_exits_one(monkeypatch, tmp_path):
    real = harness.check_lemma_hollow

    def broken(inst, depths):
        r = real(inst, depths)
        r.verdicts.append({"depth": 0, "status": harness.FAIL})
        return r

    monkeypatch.setitem(harness.THEOREMS, "hollow", broken)
    code, rep = run(["check", "--theorem", "hollow", "--depth", "1", fx("zmod4")], tmp_path)
    assert code == cli.EXIT_FAIL and rep["body"]["status"] == "fail"


def test_report_body_is_deterministic():
    a = make_report("suite", harness.run_suite([], 2))
    b = make_report("suite", harness.run_suite([], 2))
    assert body_bytes(a) == body_bytes(b)
    assert render_text(a).endswith("status: pass\n")


def test_docs_schemas_match_package():
    pkg = bundled_dir().parent / "schemas"
    docs = ROOT / "docs" / "schemas"
    if not docs.is_dir():
        pytest.skip("docs/ not present in this installation")
    for name in ("fixture.schema.json", "report.schema.json"):
        assert (pkg / name).read_text() == (docs / name).read_text()


def test_console_script():
    exe = shutil.which("oredim")
    cmd = [exe] if exe else [sys.executable, "-m", "oredim.cli"]
    res = subprocess.run(cmd + ["dim", "--kind", "rudim", fx("f2sq")], capture_output=True, text=True)
    assert res.returncode == 0 and "rudim(M) = 2" in res.stdout
