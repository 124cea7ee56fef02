"""CLI contracts: CSV/JSON schemas, exit codes, determinism, round trips."""

import json
import math

import numpy as np
import pytest

from hullwalk import cli
from hullwalk.cli import RunConfig, main


def _strip_timestamp(text: str) -> str:
    return "\n".join(l for l in text.splitlines() if not l.startswith("# timestamp"))


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def test_simulate_writes_csv(tmp_path):
    out = tmp_path / "r.csv"
    code = main(
        ["simulate", "--model", "pr:0.2,0", "--steps", "500", "--replicates", "50",
         "--seed", "42", "--out", str(out)]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    header = [l for l in lines if not l.startswith("#")][0]
    assert header == cli.CSV_COLUMNS
    rows = [l for l in lines if not l.startswith("#")][1:]
    assert len(rows) >= 2
    # checkpoints ascend and every value parses as a float
    ns = [int(r.split(",")[0]) for r in rows]
    assert ns == sorted(ns) and ns[-1] == 500
    for r in rows:
        assert len(r.split(",")) == 10
        [float(v) for v in r.split(",")]
    assert any(l.startswith("# model: pr:0.2,0") for l in lines)


def test_simulate_deterministic_modulo_timestamp(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["simulate", "--model", "lattice", "--steps", "300", "--replicates", "64", "--seed", "7"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert _strip_timestamp(a.read_text()) == _strip_timestamp(b.read_text())


def test_simulate_heavy_tail_flag(tmp_path):
    out = tmp_path / "p.csv"
    assert main(["simulate", "--model", "pareto:1.5", "--steps", "200", "--replicates", "32",
                 "--seed", "1", "--out", str(out)]) == 0
    assert "# heavy_tail: true" in out.read_text()


def test_simulate_rejects_bad_covariance(capsys):
    assert main(["simulate", "--model", "gauss:1,0,-1", "--steps", "10", "--replicates", "10"]) == 1
    assert "positive semidefinite" in capsys.readouterr().err


def test_simulate_budget_guard(tmp_path):
    args = ["simulate", "--model", "lattice", "--steps", "10**5", "--replicates", "10"]
    assert main(["simulate", "--model", "lattice", "--steps", "1000000", "--replicates", "100000",
                 "--out", str(tmp_path / "x.csv")]) == 1
    small = ["simulate", "--model", "lattice", "--steps", "100", "--replicates", "10",
             "--budget", "500", "--out", str(tmp_path / "y.csv")]
    assert main(small) == 1
    assert main(small + ["--force"]) == 0


def test_numeric_failure_exit_code(monkeypatch, tmp_path):
    import hullwalk.montecarlo as mc

    def bad_estimate(model, n, sched, replicates, seed):
        return [mc.MonteCarloEstimate(n, s, float("nan"), 0.0, replicates)
                for s in ("meanL", "varL", "meanA", "varA", "meanR")]

    monkeypatch.setattr(cli.montecarlo, "estimate", bad_estimate)
    code = main(["simulate", "--model", "lattice", "--steps", "10", "--replicates", "10",
                 "--out", str(tmp_path / "z.csv")])
    assert code == 2


# ---------------------------------------------------------------------------
# limits
# ---------------------------------------------------------------------------


def test_limits_json_drift(tmp_path):
    out = tmp_path / "l.json"
    assert main(["limits", "--model", "pr:0.2,0", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["4sigma2_mu"] == 2.0
    assert math.isclose(data["2norm_mu"], 0.4)


def test_limits_json_zero_drift(tmp_path):
    out = tmp_path / "l0.json"
    assert main(["limits", "--model", "pr", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert abs(data["pi_over_2_sqrt_det"] - math.pi / 4) < 1e-12


def test_limits_heavy_tail_gate(tmp_path, capsys):
    assert main(["limits", "--model", "pareto:1.5"]) == 1
    assert main(["limits", "--model", "pareto:1.5", "--allow-heavy", "--out",
                 str(tmp_path / "h.json")]) == 0
    data = json.loads((tmp_path / "h.json").read_text())
    assert data["heavy_tail"] is True


# ---------------------------------------------------------------------------
# clt
# ---------------------------------------------------------------------------


def test_clt_degenerate_and_zero_drift_exit_one(capsys):
    assert main(["clt", "--model", "st-binary", "--steps", "50", "--replicates", "50"]) == 1
    assert "orthogonal" in capsys.readouterr().err
    assert main(["clt", "--model", "pr", "--steps", "50", "--replicates", "50"]) == 1


def test_clt_pass_and_histogram(tmp_path):
    hist = tmp_path / "h.csv"
    out = tmp_path / "v.json"
    code = main(["clt", "--model", "pr:0.2,0", "--steps", "1000", "--replicates", "1000",
                 "--seed", "3", "--hist-out", str(hist), "--out", str(out)])
    assert code == 0
    verdict = json.loads(out.read_text())
    assert set(verdict) >= {"D", "threshold", "pass"}
    assert verdict["pass"] is True
    rows = hist.read_text().splitlines()
    assert rows[0] == "bin_left,bin_right,count"
    assert len(rows) == 65  # 64 bins on [-4, 4]
    lefts = [float(r.split(",")[0]) for r in rows[1:]]
    assert math.isclose(lefts[0], -4.0) and len(lefts) == 64


# ---------------------------------------------------------------------------
# exact / constants
# ---------------------------------------------------------------------------


def test_exact_lattice(tmp_path):
    out = tmp_path / "e.json"
    assert main(["exact", "--model", "lattice", "--steps", "2", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert abs(data["EL"] - 3.2071) < 1e-4
    assert data["EA"] == 0.25
    assert data["mdiff_check"] == "ok"


def test_exact_rejects_continuous_support(capsys):
    assert main(["exact", "--model", "pr", "--steps", "2"]) == 1


def test_constants_small_run(tmp_path):
    out = tmp_path / "c.json"
    assert main(["constants", "--grid", "4096", "--replicates", "48", "--seed", "9",
                 "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert abs(data["estimates"]["E_l1"]["value"] - math.sqrt(8 * math.pi)) < 0.5
    verdicts = {r["quantity"]: r["verdict"] for r in data["report"]}
    assert set(verdicts.values()) <= {"consistent", "violated", "untested"}


# ---------------------------------------------------------------------------
# report pipeline
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("model", ["pr:0.2,0", "pr"])
def test_report_pipeline(tmp_path, model):
    csv_p, lim_p, rep_p = tmp_path / "r.csv", tmp_path / "l.json", tmp_path / "rep.json"
    assert main(["simulate", "--model", model, "--steps", "4000", "--replicates", "300",
                 "--seed", "2", "--out", str(csv_p)]) == 0
    assert main(["limits", "--model", model, "--out", str(lim_p)]) == 0
    assert main(["report", "--in", str(csv_p), "--limits", str(lim_p), "--out", str(rep_p)]) == 0
    rep = json.loads(rep_p.read_text())
    assert rep["n"] == 4000
    for row in rep["report"]:
        assert row["verdict"] in ("consistent", "violated", "untested")
    # the big-picture check: nothing contradicts the theory on a healthy run
    assert all(row["verdict"] != "violated" for row in rep["report"])


def test_csv_round_trip_parse(tmp_path):
    csv_p = tmp_path / "r.csv"
    main(["simulate", "--model", "hex6", "--steps", "200", "--replicates", "40",
          "--seed", "5", "--out", str(csv_p)])
    meta, rows = cli._read_simulate_csv(str(csv_p))
    assert meta["model"] == "hex6"
    assert int(meta["replicates"]) == 40
    assert rows[-1]["n"] == 200.0


def test_runconfig_round_trip():
    cfg = RunConfig(model="pr:0.2,0", steps=100, replicates=10, seed=1,
                    schedule="geometric:10,1.25")
    assert RunConfig.from_dict(cfg.to_dict()) == cfg
    model, sched = cfg.validate()
    from hullwalk.walkgen import format_model

    assert format_model(model) == cfg.model
    assert sched.spec_string() == cfg.schedule


def test_unknown_subcommand_is_config_error():
    assert main(["frobnicate"]) == 1
