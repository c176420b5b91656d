import csv
import io
import json

import numpy as np
import pytest

from qalloc import ConfigError, SAParams, measure_pauli
from qalloc.cli import main
from qalloc.experiments import (
    COLUMNS,
    ExperimentConfig,
    run_experiment,
    run_graphstate_verify,
    run_memory_compare,
    run_resilience,
    run_static_eval,
    summarize,
    write_outputs,
)
from qalloc.graphstate import MeasurementOutcomeGraph
from qalloc.presets import PRESETS, STATIC_LATTICES, preset

FAST = {"iterations": 300}


def cfg(**kw):
    kw.setdefault("sa_params", FAST)
    return ExperimentConfig.from_dict(kw)


def parse(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestConfig:
    @pytest.mark.parametrize("doc,field", [
        ({"experiment": "bogus"}, "experiment"),
        ({"experiment": "static-eval", "lattice_list": [[2, 3]], "node_count": 20}, "lattice_list"),
        ({"experiment": "static-eval", "lattice_list": [[3, 3]], "node_count": 2}, "lattice_list"),
        ({"experiment": "static-eval", "trials": 0}, "trials"),
        ({"experiment": "static-eval", "strategies": ["greedy"]}, "strategies"),
        ({"experiment": "resilience", "lattice_list": [[4, 4]], "node_count": 8}, "failures_max"),
        ({"experiment": "resilience", "lattice_list": [[4, 4]], "node_count": 8, "failures_max": 8}, "failures_max"),
        ({"experiment": "static-eval", "sa_params": {"cooling_rate": 2}}, "sa_params"),
        ({"experiment": "static-eval", "colour": 1}, "colour"),
        ({"experiment": "graphstate-verify", "max_qubits": 13}, "max_qubits"),
    ])
    def test_offending_field(self, doc, field):
        with pytest.raises(ConfigError) as exc:
            ExperimentConfig.from_dict(doc)
        assert exc.value.field == field

    def test_uneven_lattice_allowed_without_optimized(self):
        cfg(experiment="static-eval", lattice_list=[[3, 3]], node_count=2, strategies=["random"])

    def test_uneven_lattice_allowed_for_resilience(self):
        cfg(experiment="resilience", lattice_list=[[3, 3]], node_count=2, failures_max=1)

    def test_round_trip(self):
        c = cfg(experiment="static-eval", lattice_list=[[2, 10]])
        assert ExperimentConfig.from_dict(c.to_dict()) == c

    def test_presets_validate(self):
        for name in PRESETS:
            ExperimentConfig.from_dict(preset(name))
        assert len(STATIC_LATTICES) == 23
        assert all((m * n) % 20 == 0 for m, n in STATIC_LATTICES)


class TestStaticEval:
    def test_bijection_lattices(self):
        c = cfg(experiment="static-eval", lattice_list=[[1, 20], [2, 10], [4, 5]],
                strategies=["optimized"], trials=3)
        summary = run_static_eval(c, workers=1).summary
        assert [(r["objective_mean"], r["objective_std"]) for r in summary] == [(19, 0), (10, 0), (7, 0)]

    def test_single_trial_std_zero(self):
        c = cfg(experiment="static-eval", lattice_list=[[2, 10]], strategies=["random"], trials=1)
        assert run_static_eval(c, workers=1).summary[0]["objective_std"] == 0.0

    def test_seeds_follow_trial_index(self):
        c = cfg(experiment="static-eval", lattice_list=[[2, 10]], strategies=["random"], trials=4, seed=17)
        assert [r["seed"] for r in run_static_eval(c, workers=1).rows] == [17, 18, 19, 20]

    def test_summary_recomputable(self):
        c = cfg(experiment="static-eval", lattice_list=[[2, 10], [4, 10]], trials=5)
        table = run_static_eval(c, workers=1)
        rows = parse(table.to_csv())
        for rec in table.summary:
            sel = [r for r in rows if (r["M"], r["N"], r["strategy"]) ==
                   (str(rec["M"]), str(rec["N"]), rec["strategy"])]
            for metric in ("objective", "kappa"):
                vals = np.array([float(r[metric]) for r in sel])
                assert len(vals) == rec["trials"]
                assert rec[f"{metric}_mean"] == pytest.approx(vals.mean(), abs=1e-9)
                assert rec[f"{metric}_std"] == pytest.approx(vals.std(ddof=1), abs=1e-9)

    def test_wrong_runner(self):
        with pytest.raises(ConfigError):
            run_static_eval(cfg(experiment="graphstate-verify"))


class TestMemoryCompare:
    def test_plotted_points(self):
        c = cfg(experiment="memory-compare", node_sweep=[2, 10, 20], occupancies=[1, 4], trials=1)
        rows = run_memory_compare(c, workers=1).rows
        got = {(r["nodes"], r["strategy"], (r["qubits_total"] // (3 * r["nodes"])) if r["M"] else 0):
               r["qubits_total"] for r in rows}
        assert got[(2, "all-to-all", 0)] == 6 and got[(2, "optimized", 1)] == 6
        assert got[(20, "all-to-all", 0)] == 1140 and got[(20, "optimized", 1)] == 60
        assert got[(10, "optimized", 4)] == 120


class TestResilience:
    def test_zero_failures_equal_static(self):
        res = cfg(experiment="resilience", node_count=4, lattice_list=[[4, 4]], failures_max=0,
                  trials=3, strategies=["random", "clustered"])
        sta = cfg(experiment="static-eval", node_count=4, lattice_list=[[4, 4]], trials=3,
                  strategies=["random", "clustered"])
        r_rows = run_resilience(res, workers=1).rows
        s_rows = run_static_eval(sta, workers=1).rows
        assert [(r["kappa"], r["d"]) for r in r_rows] == [(s["kappa"], s["objective"]) for s in s_rows]

    def test_all_but_one_failed(self):
        c = cfg(experiment="resilience", node_count=4, lattice_list=[[4, 4]], failures_max=3, trials=3,
                decorated=True)
        for r in run_resilience(c, workers=1).rows:
            if r["failures"] == 3:
                assert r["kappa"] == 0.0 and r["excluded"] >= 1

    def test_rows_per_failure_count(self):
        c = cfg(experiment="resilience", node_count=4, lattice_list=[[4, 4]], failures_max=2, trials=2,
                strategies=["clustered"])
        assert [r["failures"] for r in run_resilience(c, workers=1).rows] == [0, 1, 2, 0, 1, 2]


class TestVerify:
    def test_default_rule_passes(self):
        t = run_graphstate_verify(cfg(experiment="graphstate-verify", trials=15), workers=1)
        assert t.summary[-1]["failed"] == 0 and t.summary[-1]["checks"] > 0

    def test_corrupted_rule_reported(self):
        def broken(state, a, basis, b0=None):
            out = measure_pauli(state, a, basis, b0)
            if basis == "Y":  # pretend Y behaves like Z
                out = measure_pauli(state, a, "Z")
                return MeasurementOutcomeGraph(out.result_graph, "Y", a)
            return out

        t = run_graphstate_verify(cfg(experiment="graphstate-verify", trials=15), workers=2, rule=broken)
        failed = [r for r in t.rows if not r["passed"]]
        assert failed and all(r["basis"] == "Y" for r in failed)
        assert all(r["edges"] and r["qubits"] >= 3 for r in failed)
        assert {r["qubit"] for r in failed} <= set(range(8))

    def test_single_qubit(self):
        t = run_graphstate_verify(cfg(experiment="graphstate-verify", trials=3, max_qubits=1), workers=1)
        assert {r["qubits"] for r in t.rows} == {1}
        assert all(r["passed"] for r in t.rows)


class TestDeterminism:
    @pytest.mark.parametrize("doc", [
        {"experiment": "static-eval", "lattice_list": [[2, 10], [4, 5]], "trials": 4},
        {"experiment": "resilience", "node_count": 4, "lattice_list": [[4, 5]], "failures_max": 3,
         "trials": 3, "decorated": True},
        {"experiment": "optimize", "node_count": 5, "lattice_list": [[2, 5]], "trials": 3},
    ])
    def test_pool_matches_serial(self, doc):
        c = cfg(**doc)
        a = run_experiment(c, workers=1).to_csv(drop=("wall_time",))
        b = run_experiment(c, workers=3).to_csv(drop=("wall_time",))
        assert a == b
        assert a.splitlines()[0] == ",".join(col for col in COLUMNS if col != "wall_time")


class TestCli:
    def test_writes_outputs(self, tmp_path, capsys):
        out = tmp_path / "run.csv"
        rc = main(["static-eval", "--lattice", "2x10", "--trials", "2", "--seed", "5",
                   "--out", str(out), "--workers", "1"])
        assert rc == 0
        rows = parse(out.read_text())
        assert [r["seed"] for r in rows] == ["5", "6"] * 3
        meta = json.loads((tmp_path / "run.csv.meta.json").read_text())
        assert meta["config"]["seed"] == 5 and meta["version"]
        assert (tmp_path / "run.summary.csv").exists()

    def test_config_file_and_flags(self, tmp_path, capsys):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"experiment": "static-eval", "node_count": 4,
                                    "lattice_list": [[2, 2]], "strategies": ["clustered"], "trials": 3}))
        assert main(["static-eval", "--config", str(path), "--trials", "1"]) == 0
        rows = parse(capsys.readouterr().out)
        assert len(rows) == 1 and rows[0]["objective"] == "2"

    def test_config_error_exit(self, tmp_path, capsys):
        assert main(["static-eval", "--nodes", "7", "--lattice", "2x10"]) == 2
        assert "lattice_list" in capsys.readouterr().err
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"experiment": "resilience"}))
        assert main(["static-eval", "--config", str(path)]) == 2
        assert main(["static-eval", "--config", str(tmp_path / "missing.json")]) == 2

    def test_runtime_error_exit(self, tmp_path, capsys):
        out = tmp_path / "no" / "such" / "dir.csv"
        assert main(["static-eval", "--lattice", "2x10", "--trials", "1", "--out", str(out)]) == 3

    def test_preset_override(self, capsys):
        rc = main(["graphstate-verify", "--preset", "verify", "--trials", "2", "--summary"])
        assert rc == 0
        assert capsys.readouterr().out.startswith("basis,checks,passed,failed")

    def test_bad_flag(self):
        with pytest.raises(SystemExit) as exc:
            main(["static-eval", "--lattice", "banana"])
        assert exc.value.code == 2

    def test_optimize_topologies(self, tmp_path):
        out = tmp_path / "opt.csv"
        assert main(["optimize", "--nodes", "4", "--lattice", "2x4", "--trials", "2", "--out", str(out)]) == 0
        lines = (tmp_path / "opt.topologies.jsonl").read_text().splitlines()
        docs = [json.loads(line) for line in lines]
        assert [d["seed"] for d in docs] == [0, 1]
        assert sorted(docs[0]["topology"]["coloring"]) == [0, 0, 1, 1, 2, 2, 3, 3]


def test_summarize_groups():
    rows = [{"experiment": "x", "nodes": 1, "M": 1, "N": 1, "strategy": "s", "failures": -1,
             "objective": v, "kappa": None, "d": None, "excluded": 0, "qubits_total": 1} for v in (1, 3)]
    _, out = summarize(rows)
    assert out[0]["objective_mean"] == 2.0 and out[0]["objective_std"] == pytest.approx(np.sqrt(2))
    assert out[0]["kappa_mean"] is None
