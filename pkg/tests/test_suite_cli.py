import csv
import json
import subprocess
import sys

import pytest

from pierce_lab.cli import main
from pierce_lab.errors import InvalidParameters
from pierce_lab.generators import triangle_fixture
from pierce_lab.serialize import save_dinterval, save_instance
from pierce_lab.dinterval import triangle_2interval
from pierce_lab.suite import CSV_HEADER, EXIT_THEOREM, RunConfig, read_csv_rows, run_suite
from pierce_lab.trace import Instance
from pierce_lab.geom import Rect


def test_empty_campaign_writes_header_only(tmp_path):
    rep = run_suite(RunConfig("pierce8", 0, out_dir=str(tmp_path)))
    assert rep.exit_code == 0
    assert rep.csv_path.read_text() == ",".join(CSV_HEADER) + "\n"
    summary = json.loads(rep.summary_path.read_text())
    assert summary["instances"] == 0 and summary["max_tau_exact"] is None


@pytest.mark.parametrize("campaign", ["pierce8", "pairwise-p", "quadrant-p", "composite", "halman", "kaiser", "pt-verify"])
def test_each_campaign_runs(tmp_path, campaign):
    rep = run_suite(RunConfig(campaign, 12, seed=5, p=3 if campaign == "composite" else 2, out_dir=str(tmp_path)))
    assert rep.exit_code == 0, rep.failures
    with rep.csv_path.open() as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == CSV_HEADER and len(rows) == 13
    assert [int(r[0]) for r in rows[1:]] == list(range(12))
    records = [json.loads(line) for line in rep.jsonl_path.read_text().splitlines()]
    assert all(r["config"]["campaign"] == campaign for r in records)


def test_worker_pool_keeps_order_and_rows(tmp_path):
    a = run_suite(RunConfig("pierce8", 24, seed=2, out_dir=str(tmp_path / "a"), workers=3))
    b = run_suite(RunConfig("pierce8", 24, seed=2, out_dir=str(tmp_path / "b")))
    assert read_csv_rows(a.csv_path) == read_csv_rows(b.csv_path)


def test_violation_halts_with_counterexample(tmp_path, monkeypatch):
    import importlib

    sm = importlib.import_module("pierce_lab.suite")
    real = sm._run_kaiser
    calls = []

    def flaky(cfg, seed):
        calls.append(seed)
        row = real(cfg, seed)
        if len(calls) == 3:
            row.verdict = "fail"
            row.violation = triangle_fixture()
        return row

    monkeypatch.setitem(sm._RUNNERS, "kaiser", flaky)
    rep = run_suite(RunConfig("kaiser", 10, out_dir=str(tmp_path)))
    assert rep.exit_code == EXIT_THEOREM
    assert len(rep.records) == 3 and rep.counterexample.exists()


def test_config_validation():
    with pytest.raises(InvalidParameters):
        RunConfig("nope", 1)
    with pytest.raises(InvalidParameters):
        RunConfig("pierce8", -1)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_cli_tau_nu_pierce(tmp_path, capsys):
    path = save_instance(triangle_fixture(), tmp_path / "t.json")
    code, out = run_cli(capsys, "tau", "--in", str(path))
    assert code == 0 and json.loads(out)["tau"] == 2
    code, out = run_cli(capsys, "nu", "--in", str(path))
    assert code == 0 and json.loads(out)["nu"] == 1
    code, out = run_cli(capsys, "pierce8", "--in", str(path))
    assert code == 0 and json.loads(out)["size"] == 3
    code, out = run_cli(capsys, "pierce-p", "--in", str(path), "--p", "2")
    assert code == 0 and json.loads(out)["size"] == 2
    code, out = run_cli(capsys, "pierce-composite", "--in", str(path), "--p", "2")
    assert code == 0 and json.loads(out)["geometric_tau"] == 1


def test_cli_exit_codes(tmp_path, capsys):
    tri = save_instance(triangle_fixture(), tmp_path / "t.json")
    code, _ = run_cli(capsys, "verify-halman", "--in", str(tri))
    assert code == 2
    code, out = run_cli(capsys, "check-pq", "--in", str(tri), "--p", "3", "--q", "3")
    assert code == 2 and json.loads(out)["witness"] == [0, 1, 2]
    apart = save_instance(Instance.build([(0, 0), (9, 9)], [Rect(-1, 1, -1, 1), Rect(8, 10, 8, 10)]),
                          tmp_path / "apart.json")
    code, _ = run_cli(capsys, "pierce8", "--in", str(apart))
    assert code == 2
    code, _ = run_cli(capsys, "tau", "--in", str(tmp_path / "missing.json"))
    assert code == 1


def test_cli_budget_exit(tmp_path, capsys):
    from pierce_lab.generators import gen_set_system
    from pierce_lab.dinterval import DIntervalFamily

    # a wide 2-interval family with a tiny budget
    ss = gen_set_system(3, 40, 30)
    members = tuple(((min(s), max(s)), None) for s in ss.sets if s)
    path = save_dinterval(DIntervalFamily(2, (40, 1), members), tmp_path / "f.json")
    code, _ = run_cli(capsys, "tau", "--in", str(path), "--budget", "0")
    assert code == 4


def test_cli_dinterval_and_lower_bound_verifiers(tmp_path, capsys):
    path = save_dinterval(triangle_2interval(), tmp_path / "tri2.json")
    code, out = run_cli(capsys, "verify-kaiser", "--in", str(path))
    rep = json.loads(out)
    assert code == 0 and (rep["tau"], rep["nu"], rep["bound"]) == (2, 1, 2)
    code, out = run_cli(capsys, "verify-pt", "--d", "2")
    assert code == 0 and json.loads(out)["verdict"] == "pass"


def test_cli_gen_and_quadrant(tmp_path, capsys):
    out = tmp_path / "q.json"
    assert main(["gen", "--kind", "quadrant", "--seed", "3", "--p", "2", "--out", str(out)]) == 0
    code, text = run_cli(capsys, "pierce-quadrant-p", "--in", str(out), "--p", "2")
    assert code == 0 and json.loads(text)["size"] <= 4
    assert main(["gen", "--kind", "pairwise", "--count", "3", "--out", str(tmp_path / "many")]) == 0
    assert len(list((tmp_path / "many").glob("*.json"))) == 3


def test_cli_run_suite(tmp_path, capsys):
    code, text = run_cli(capsys, "run-suite", "--campaign", "kaiser", "--count", "5", "--out", str(tmp_path))
    assert code == 0 and json.loads(text)["instances"] == 5


def test_module_entry_point(tmp_path):
    path = save_instance(triangle_fixture(), tmp_path / "t.json")
    proc = subprocess.run([sys.executable, "-m", "pierce_lab", "tau", "--in", str(path)],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["tau"] == 2
