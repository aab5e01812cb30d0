"""Pipeline wiring: seed fan-out, artifact layout, metric structure."""

import numpy as np
import pytest

from ionrc import experiments as ex
from ionrc import serialize as sz
from ionrc.config import parse_config
from ionrc.errors import ConfigError


# --- seed fan-out --------------------------------------------------------------

def test_component_seed_is_stable_and_disjoint():
    a = ex.component_seed(42, "weights", index=3, variant=1)
    b = ex.component_seed(42, "weights", index=3, variant=1)
    assert a.entropy == b.entropy
    others = [
        ex.component_seed(42, "timescales", index=3, variant=1),
        ex.component_seed(42, "weights", index=4, variant=1),
        ex.component_seed(42, "weights", index=3, variant=0),
        ex.component_seed(43, "weights", index=3, variant=1),
    ]
    for other in others:
        assert other.entropy != a.entropy
    with pytest.raises(KeyError):
        ex.component_seed(42, "not_a_component")


def test_component_seed_streams_differ():
    x = np.random.default_rng(ex.component_seed(1, "weights")).uniform(size=8)
    y = np.random.default_rng(ex.component_seed(1, "timescales")).uniform(size=8)
    assert not np.allclose(x, y)


# --- weight construction -------------------------------------------------------

def test_build_weights_uniform_and_banded(tiny_mg_payload, tiny_vent_payload):
    mg = parse_config(tiny_mg_payload)
    w_uniform = ex.build_weights(mg, variant_index=0, seed_index=0)
    assert np.all(w_uniform.timescales == 2.0)

    vent = parse_config(tiny_vent_payload)
    w_banded = ex.build_weights(vent, variant_index=0, seed_index=0)
    assert np.unique(w_banded.timescales).size > 1
    assert w_banded.timescales.min() >= 0.27 / 5.0 - 1e-15


def test_build_weights_is_seeded(tiny_mg_payload):
    config = parse_config(tiny_mg_payload)
    a = ex.build_weights(config, 0, 0)
    b = ex.build_weights(config, 0, 0)
    c = ex.build_weights(config, 0, 1)
    assert np.array_equal(a.w, b.w) and np.array_equal(a.w_in, b.w_in)
    assert not np.array_equal(a.w, c.w)


# --- harmonic run ----------------------------------------------------------------

@pytest.fixture(scope="module")
def harmonic_run(tmp_path_factory, tiny_harmonic_payload_module):
    out = tmp_path_factory.mktemp("harmonic_run")
    config = parse_config(tiny_harmonic_payload_module)
    metrics = ex.run_experiment(config, out, render=True)
    return config, out, metrics


def test_harmonic_artifacts_on_disk(harmonic_run):
    _, out, _ = harmonic_run
    for name in ("metrics.json", "per_seed.csv", "trace_harmonic.csv",
                 "trace_harmonic.png"):
        assert (out / name).exists(), name


def test_harmonic_metric_structure(harmonic_run):
    _, _, metrics = harmonic_run
    assert metrics["task"] == "harmonic"
    assert metrics["master_seed"] == 7 and metrics["n_seeds"] == 2
    assert set(metrics["variants"]) == {"esn", "bpn"}
    for block in metrics["variants"].values():
        assert len(block["rmse_per_seed"]) == 2
        assert block["diverged_seeds"] == 0
        assert "spectral_radius_m" in block["esp_seed0"]
    ratio = metrics["comparison"]["rmse_ratio_esn_over_bpn"]
    assert ratio == pytest.approx(
        metrics["variants"]["esn"]["rmse_mean"] / metrics["variants"]["bpn"]["rmse_mean"]
    )
    assert metrics["objective"] == metrics["variants"]["bpn"]["rmse_mean"]


def test_harmonic_per_seed_table(harmonic_run):
    _, out, metrics = harmonic_run
    table = sz.read_table_csv(out / "per_seed.csv")
    assert list(table) == ["variant", "seed_index", "metric", "value"]
    esn_rows = table["value"][(table["variant"] == "esn")]
    assert np.allclose(sorted(esn_rows),
                       sorted(metrics["variants"]["esn"]["rmse_per_seed"]))


def test_harmonic_trace_covers_both_phases(harmonic_run):
    _, out, _ = harmonic_run
    table = sz.read_table_csv(out / "trace_harmonic.csv")
    assert set(table["phase"]) == {"washout", "free"}
    assert "esn_prediction" in table and "bpn_prediction" in table


def test_run_experiment_is_deterministic_in_memory(tmp_path, tiny_harmonic_payload):
    config = parse_config(tiny_harmonic_payload)
    m1 = ex.run_experiment(config, tmp_path / "a", render=False)
    m2 = ex.run_experiment(config, tmp_path / "b", render=False)
    assert sz.canonical_json(m1) == sz.canonical_json(m2)


# --- chaotic-series run -----------------------------------------------------------

def test_mg_run_structure(tmp_path, tiny_mg_payload):
    config = parse_config(tiny_mg_payload)
    metrics = ex.run_experiment(config, tmp_path, render=False)
    block = metrics["variants"]["esn"]
    assert metrics["task"] == "mackey_glass"
    assert metrics["horizon_steps"] == 5
    for key in ("nrmse_84", "nrmse_84_mean", "nrmse_84_median", "nrmse_84_per_seed",
                "rmse_84", "sigma2_input", "diverged_seeds", "esp_seed0"):
        assert key in block, key
    assert metrics["objective"] == block["nrmse_84_mean"]
    table = sz.read_table_csv(tmp_path / "trace_forecast.csv")
    assert list(table) == ["t", "truth", "prediction", "phase"]
    assert set(table["phase"]) == {"washout", "free"}
    # free window length follows the config
    assert int(np.sum(table["phase"] == "free")) == 12


# --- ventilator run ----------------------------------------------------------------

def test_vent_run_structure(tmp_path, tiny_vent_payload):
    config = parse_config(tiny_vent_payload)
    metrics = ex.run_experiment(config, tmp_path, render=False)
    assert metrics["task"] == "ventilator"
    assert metrics["data_source"] == "synthetic"
    assert metrics["prediction_horizon_steps"] == 3
    classify = metrics["variants"]["classify"]
    predict = metrics["variants"]["predict"]
    assert 0.0 <= classify["accuracy_mean"] <= 1.0
    assert predict["rmse_mbar_mean"] >= 0.0
    for key in ("ar5_accuracy", "ar5_subsampled_accuracy", "ar8_rmse_mbar"):
        assert key in metrics["baselines"], key
    assert metrics["objective"] == predict["rmse_mbar_mean"]
    for name in ("trace_pressure_current", "trace_valve", "trace_prediction"):
        assert (tmp_path / f"{name}.csv").exists(), name


# --- sweep ---------------------------------------------------------------------------

def test_sweep_trials_are_independent_of_n_trials(tmp_path, tiny_harmonic_payload):
    r3 = ex.sweep(tiny_harmonic_payload, n_trials=3, seed=5,
                  output_dir=tmp_path / "t3")
    r2 = ex.sweep(tiny_harmonic_payload, n_trials=2, seed=5,
                  output_dir=tmp_path / "t2")
    for i in range(2):
        assert r3["trials"][i]["params"] == r2["trials"][i]["params"]
    assert r3["seed"] == 5


def test_sweep_requires_a_space(tiny_harmonic_payload, tmp_path):
    payload = tiny_harmonic_payload
    payload["sweep"]["space"] = {}
    with pytest.raises(ConfigError, match="space is empty"):
        ex.sweep(payload, n_trials=1, seed=0, output_dir=tmp_path)


def test_sweep_ranking_is_ascending(tmp_path, tiny_harmonic_payload):
    report = ex.sweep(tiny_harmonic_payload, n_trials=3, seed=5,
                      output_dir=tmp_path)
    objectives = {t["trial"]: t["objective"] for t in report["trials"]
                  if t["status"] == "ok"}
    ranked = [objectives[i] for i in report["ranking"]]
    assert ranked == sorted(ranked)
    assert report["best"]["objective"] == ranked[0]


# --- plotdata ----------------------------------------------------------------------

def test_emit_plotdata_rejects_unknown_selector(tmp_path, tiny_harmonic_payload):
    config = parse_config(tiny_harmonic_payload)
    with pytest.raises(ConfigError, match="unknown plotdata"):
        ex.emit_plotdata(config, "fig9", tmp_path)


def test_emit_plotdata_fig3b_pair(tmp_path, tiny_vent_payload):
    config = parse_config(tiny_vent_payload)
    ex.run_experiment(config, tmp_path, render=False)
    written = ex.emit_plotdata(config, "fig3b", tmp_path, render=False)
    names = [p.name for p in written]
    assert names == ["fig3b_top.csv", "fig3b_bottom.csv"]
    top = sz.read_table_csv(written[0])
    assert {"t_s", "pressure_mbar", "valve_truth", "valve_prediction"} <= set(top)
    bottom = sz.read_table_csv(written[1])
    assert {"t_s", "truth_mbar", "prediction_mbar"} <= set(bottom)
