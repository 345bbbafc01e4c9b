import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

import fiblab
from fiblab import cli
from fiblab.cli import Report, main

BUNDLED = Path(fiblab.__file__).parent / "data" / "registry.txt"


class Tty(io.StringIO):
    def isatty(self):
        return True


def run(*argv, stdout=None):
    out = stdout or io.StringIO()
    code = main(list(argv), stdout=out)
    return code, out.getvalue()


@pytest.fixture
def bad_registry(tmp_path):
    text = BUNDLED.read_text("utf-8").replace("pi_6(S^3) | - | 0 | 12", "pi_6(S^3) | - | zz | 12")
    path = tmp_path / "bad.txt"
    path.write_text(text, "utf-8")
    return path


def test_classify_json():
    code, out = run("classify", "--k", "2", "--n", "5", "--a", "4", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["result"]["realizable"] is True
    assert rep["result"]["hopf_witness"] == {"u": 1, "h": -1, "sign": -1, "lifted_lambda": 4}
    assert rep["citations"] and rep["tool_version"] == fiblab.__version__


def test_classify_not_realizable():
    code, out = run("classify", "--k", "2", "--n", "5", "--a", "2", "--json")
    assert code == 0 and json.loads(out)["result"]["realizable"] is False


def test_classify_with_gamma():
    code, out = run("classify", "--k", "3", "--n", "6", "--a", "1", "--gamma", "1",
                    "--gamma-group", "2", "--json")
    assert code == 0 and json.loads(out)["params"]["gamma"] == [1]
    code, _ = run("classify", "--k", "3", "--n", "6", "--a", "1", "--gamma", "1,1",
                  "--gamma-group", "2")
    assert code == 2


def test_classify_inconsistency_exit_code(monkeypatch):
    monkeypatch.setattr(cli, "normalize_hopf", lambda k, n, lam: None)
    code, _ = run("classify", "--k", "2", "--n", "5", "--a", "1")
    assert code == 3


def test_gtable_csv():
    code, out = run("gtable", "--k", "3", "--n-min", "2", "--n-max", "9", "--csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["count"] for r in rows] == ["1", "2", "1", "2", "1", "2", "2", "2"]


def test_gtable_uncovered_cell():
    code, out = run("gtable", "--k", "2", "--n", "8", "--json")
    row = json.loads(out)["result"]["rows"][0]
    assert code == 0 and row["count"] == "uncovered" and row["uncovered"] is True


def test_table_on_tty_and_json_when_piped():
    _, out = run("star", "--n-max", "6", stdout=Tty())
    assert out.splitlines()[0].split() == ["n", "star"]
    _, out = run("star", "--n-max", "6")
    assert json.loads(out)["command"] == "star"


def test_fiber_and_pages():
    code, out = run("fiber", "--k", "2", "--lambda", "1", "--json")
    assert code == 0 and json.loads(out)["result"]["homology_sphere"] is True
    code, out = run("ss-page", "--k", "2", "--n", "3", "--lambda", "2", "--page", "e2", "--json")
    assert code == 0 and json.loads(out)["result"]["r"] == 2


def test_count_realizable():
    code, out = run("count-realizable", "--k", "3", "--n", "13", "--json")
    assert code == 0 and json.loads(out)["result"]["count"] == 12


def test_bundlecmp_range():
    code, out = run("bundlecmp", "--k", "5", "--json")
    assert code == 0 and json.loads(out)["result"]["verdict"] == "NotEpiByRankObstruction"
    code, _ = run("bundlecmp", "--k", "7")
    assert code == 2


def test_usage_errors():
    assert run("gtable", "--k", "9")[0] == 2
    assert run("classify", "--k", "2", "--n", "0", "--a", "1")[0] == 2
    assert run("nonsense")[0] == 2


def test_selfcheck_zero_budget_warns(capsys):
    code, out = run("selfcheck", "--budget", "0", "--json")
    assert code == 0 and json.loads(out)["result"]["status"] == "skipped"
    assert "warning" in capsys.readouterr().err


def test_selfcheck_bad_registry_flag(bad_registry, capsys):
    code, out = run("selfcheck", "--budget", "5", "--registry", str(bad_registry), "--json")
    assert code == 1
    assert "pi_6(S^3)" in out and "pi_6(S^3)" in capsys.readouterr().err


def test_registry_from_environment(bad_registry, monkeypatch):
    monkeypatch.setenv("FIBLAB_REGISTRY", str(bad_registry))
    assert run("star", "--n", "5")[0] == 2
    # the flag wins over the environment
    assert run("star", "--n", "5", "--registry", str(BUNDLED))[0] == 0


def test_selfcheck_small_budget_passes():
    code, out = run("selfcheck", "--budget", "3", "--json")
    rows = json.loads(out)["result"]["rows"]
    assert code == 0 and all(r["status"] == "PASS" for r in rows)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fiblab", "star", "--n", "10", "--csv"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines() == ["n,star", "10,true"]


@given(st.text(max_size=20), st.dictionaries(st.text(max_size=5), st.integers(), max_size=3),
       st.lists(st.text(max_size=10), max_size=3))
def test_report_json_roundtrip(command, params, citations):
    rep = Report(command, params, {"rows": [params]}, citations)
    assert Report.from_json(rep.to_json()) == rep


def test_reports_follow_documented_envelope():
    schema = json.loads((Path(__file__).parents[1] / "docs" / "report_schema.json").read_text())
    for argv in (["star", "--n", "5"], ["bundlecmp", "--k", "3"], ["gtable", "--k", "2", "--n", "4"]):
        rep = json.loads(run(*argv, "--json")[1])
        assert set(rep) == set(schema["required"])
        assert rep["command"] in schema["properties"]["command"]["enum"]
