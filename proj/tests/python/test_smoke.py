import csv
import json
import math

import numpy as np
import pytest

import bairdlab as bl


def theta0():
    t = np.ones(8)
    t[6] = 10.0
    return t


def test_features_and_model():
    np.testing.assert_array_equal(bl.feature_vector(7), [0, 0, 0, 0, 0, 0, 1, 2])
    m = bl.exact_model(0.9)
    assert m.A.shape == (8, 8)
    assert np.all(m.b == 0)
    assert bl.numerical_rank(m.A) == 7
    assert bl.numerical_rank(m.C) == 7
    np.testing.assert_allclose(m.mu, np.full(7, 1 / 7), atol=1e-12)
    with pytest.raises(ValueError):
        bl.feature_vector(0)


def test_step_functions_match_hand_values():
    tr = bl.make_transition(7, bl.Action.solid, 7)
    assert tr.rho == pytest.approx(7.0)
    st = bl.LearnerState(theta0())
    nxt = bl.td0_step(st, tr, bl.StepSizes(alpha=0.005), 0.9)
    assert nxt.theta[6] == pytest.approx(9.958)
    assert nxt.theta[7] == pytest.approx(0.916)
    dashed = bl.make_transition(3, bl.Action.dashed, 5)
    for fn in (bl.td0_step, bl.tdc_step, bl.gtd_step, bl.gtd2_step, bl.rg_step):
        out = fn(st, dashed, bl.StepSizes(alpha=0.1, beta=0.1), 0.9)
        np.testing.assert_array_equal(out.theta, st.theta)


def test_diagnostics():
    m = bl.exact_model(0.9)
    assert bl.rmsve(theta0()) == pytest.approx(math.sqrt(198 / 7))
    np.testing.assert_allclose(bl.per_state_td_errors(theta0()), [7.8] * 6 + [-1.2])
    rate, contracting = bl.contraction_rate(0.005, 0.9, bl.feature_vector(7))
    assert rate == pytest.approx(0.99975, abs=1e-12)
    assert contracting
    assert bl.mspbe(np.zeros(8), m) == 0.0
    rec = bl.snapshot(theta0(), np.zeros(8), 0, m)
    assert rec.neu == pytest.approx(bl.neu(theta0(), m))


def test_run_and_aggregate(tmp_path):
    cfg = bl.ExperimentConfig()
    cfg.algo = bl.Algorithm.tdc
    cfg.steps = 200
    cfg.runs = 3
    cfg.log_every = 50
    logs = bl.run_experiment(cfg)
    assert [log.run_id for log in logs] == [0, 1, 2]
    assert [r.step for r in logs[0].records] == [0, 50, 100, 150, 200]
    again = bl.run_experiment(cfg)
    assert logs[1].series("rmsve") == again[1].series("rmsve")

    curve = bl.aggregate(logs)
    assert curve.steps == [0, 50, 100, 150, 200]
    assert len(curve["rmsve"].mean) == 5
    assert curve.divergence_fraction == 0.0

    path = tmp_path / "metrics.csv"
    bl.write_metrics_csv(logs, path)
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    assert rows[0] == bl.metrics_csv_columns()
    assert rows[0][:4] == ["run_id", "seed", "step", "rmsve"]
    assert rows[0][-1] == "diverged"
    assert len(rows) == 1 + 3 * 5


def test_sweep():
    cfg = bl.ExperimentConfig()
    cfg.steps = 100
    cfg.runs = 2
    cells = bl.run_sweep(cfg, [0.005, 0.01], [0.05])
    assert [(c.alpha, c.beta) for c in cells] == [(0.005, 0.05), (0.01, 0.05)]
    assert all(c.error is None for c in cells)


def test_config_round_trip(tmp_path):
    cfg = bl.ExperimentConfig()
    cfg.algo = bl.Algorithm.impression_gtd
    cfg.alpha = 0.001
    cfg.buffer_capacity = 64
    assert bl.ExperimentConfig.from_json(cfg.to_json()) == cfg
    path = tmp_path / "cfg.json"
    bl.write_config(cfg, path)
    assert bl.read_config(path) == cfg
    assert json.loads(path.read_text())["algo"] == "impression_gtd"
    with pytest.raises(ValueError, match="alpah"):
        bl.ExperimentConfig.from_json('{"alpah": 1}')
    with pytest.raises(OSError):
        bl.read_config(tmp_path / "missing.json")


def test_model_json_and_selfcheck():
    doc = json.loads(bl.model_json(0.9))
    assert doc["rank_A"] == 7
    results = bl.selfcheck()
    assert results and all(passed for _, passed, _ in results)
