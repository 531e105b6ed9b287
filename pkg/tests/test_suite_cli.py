import csv
import json

import numpy as np
import pytest

from oracles import pauli
from tracegym import DenseTensor, Shape, SuiteConfig, SuiteResult, emit_report, run_suite
from tracegym.cli import main
from tracegym.errors import ConfigError
from tracegym.random_tensors import RandomTensorModel, model_to_json
from tracegym.suite import SCHEMA, canonical_digest, load_result, result_json
from tracegym.tensor import tensor_to_json


def test_two_tensor_batch():
    res = run_suite(SuiteConfig("two-tensor", n_instances=50, seed=7))
    names = [r.name for r in res.reports]
    assert names.count("gt_two") == 50 and names.count("alt_two") == 50
    assert res.summary["fail"] == 0 and res.exit_code == 0


def test_multivariate_commuting_family():
    res = run_suite(SuiteConfig("multivariate", n_instances=12, seed=3, family="commuting"))
    assert res.summary["fail"] == 0 and not res.errors
    assert all(r.verdict == "equality" for r in res.reports)


def test_tails_two_point_models():
    res = run_suite(SuiteConfig("tails", n_instances=2, seed=1))
    assert len(res.reports) == 2 * 11
    two = [r for r in res.reports if r.params["n"] == 2]
    assert two and all(r.ok for r in two)


def test_determinism_and_threads():
    a = run_suite(SuiteConfig("pinching", n_instances=6, seed=5))
    b = run_suite(SuiteConfig("pinching", n_instances=6, seed=5, threads=3))
    assert canonical_digest(a) == canonical_digest(b)
    c = run_suite(SuiteConfig("pinching", n_instances=6, seed=6))
    assert canonical_digest(a) != canonical_digest(c)


def test_json_round_trip_and_csv(tmp_path):
    out = tmp_path / "res.json"
    res = run_suite(SuiteConfig("entropy", n_instances=5, seed=2, output_path=str(out)))
    loaded = load_result(out)
    assert loaded["schema"] == SCHEMA
    assert [r.to_dict() for r in loaded["reports"]] == [r.to_dict() for r in res.reports]
    rows = list(csv.reader(out.with_suffix(".csv").open()))
    assert rows[0][:3] == ["name", "theta", "p"]
    assert len(rows) - 1 == res.summary["total"]


def test_empty_result(tmp_path):
    empty = SuiteResult(SuiteConfig("algebra").to_dict(), [], [], 0.0, "0")
    path = emit_report(empty, "json", tmp_path / "empty.json")
    d = json.loads(path.read_text())
    assert d["summary"]["total"] == 0 and d["reports"] == []
    rows = list(csv.reader(emit_report(empty, "csv", tmp_path / "empty.csv").open()))
    assert len(rows) == 1


def test_config_validation():
    for cfg in (SuiteConfig("nope"), SuiteConfig("algebra", n_instances=0),
                SuiteConfig("algebra", shape=Shape.parse("2;3")),
                SuiteConfig("multivariate", theta_list=(1.5,)),
                SuiteConfig("log-trace", q_list=(2.0,)),
                SuiteConfig("tails", shape=Shape.parse("2,3"))):
        with pytest.raises(ConfigError):
            run_suite(cfg)


def test_threads_env(monkeypatch):
    monkeypatch.setenv("TRACEGYM_THREADS", "x")
    with pytest.raises(ConfigError):
        run_suite(SuiteConfig("lie", n_instances=1))


def test_cli_suite_exit_zero(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["algebra", "--n", "3", "--seed", "1", "--out", str(out)])
    assert code == 0
    assert json.loads(out.read_text())["summary"]["total"] == 18
    assert "algebra: 18 checks" in capsys.readouterr().err


def test_cli_stdout_json(capsys):
    assert main(["lie", "--n", "2", "--shape", "2,2"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["config"]["shape"] == "2,2;2,2"


def test_cli_bad_config(capsys):
    assert main(["multivariate", "--theta", "2"]) == 2
    assert main(["tails", "--shape", "2,3"]) == 2
    with pytest.raises(SystemExit):
        main(["algebra", "--shape", "x"])


def test_cli_check(tmp_path, capsys):
    X, _, Z = pauli()
    f = tmp_path / "t.json"
    f.write_text(json.dumps({"tensors": [tensor_to_json(DenseTensor.from_matrix(X)),
                                         tensor_to_json(DenseTensor.from_matrix(Z))]}))
    assert main(["check", "gt-two", str(f)]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["verdict"] == "pass"
    assert main(["check", "gt-multi", str(f), "--p", "1"]) == 0
    capsys.readouterr()
    assert main(["check", "alt-two", str(tmp_path / "missing.json")]) == 2


def test_cli_check_exit_codes(tmp_path):
    f = tmp_path / "t.json"
    f.write_text(json.dumps({"tensors": [tensor_to_json(DenseTensor.from_matrix(np.diag([1.0, -1.0]))),
                                         tensor_to_json(DenseTensor.from_matrix(np.eye(2)))]}))
    # a non-PSD input is a domain violation of the inputs
    assert main(["check", "alt-two", str(f)]) == 2
    bad = tensor_to_json(DenseTensor.from_matrix(np.eye(2)))
    bad["re"][0] = float("nan")
    f.write_text(json.dumps({"tensors": [bad, bad]}))
    assert main(["check", "gt-two", str(f)]) == 3


def test_cli_tail(tmp_path, capsys):
    Z = DenseTensor.from_matrix(pauli()[2])
    f = tmp_path / "m.json"
    f.write_text(json.dumps({"models": [model_to_json(RandomTensorModel.rademacher(Z))] * 2}))
    assert main(["tail", str(f), "--zeta", "0,1,2"]) == 0
    reps = json.loads(capsys.readouterr().out)
    assert [r["zeta"] for r in reps] == [0.0, 1.0, 2.0]
    assert reps[2]["empirical_tail"] == 0.5


def test_cli_tail_reports_unsound(tmp_path, capsys):
    one = DenseTensor.from_matrix([[1.0]])
    f = tmp_path / "m.json"
    f.write_text(json.dumps({"models": [model_to_json(RandomTensorModel.rademacher(one))] * 3}))
    assert main(["tail", str(f), "--zeta", "3"]) == 1
    assert main(["tail", str(f), "--zeta", "3", "--coupling", "joint"]) == 0


def test_result_json_sorted():
    res = run_suite(SuiteConfig("lie", n_instances=1))
    text = result_json(res)
    assert json.loads(text)["version"] == res.version
    assert list(json.loads(text)) == sorted(json.loads(text))
