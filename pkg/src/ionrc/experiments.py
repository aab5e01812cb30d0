"""Seeded experiment pipelines, random-search sweeps, and plot-data export.

Seed fan-out: every random component draws from
``SeedSequence([master_seed, component_code, seed_index, variant_index])``
so any single component is reproducible in isolation. Component codes:

    1  recurrent/input weight draw     (per seed, per variant)
    2  timescale draw                  (per seed, per variant)
    3  training-series generation      (per seed)
    4  test-series generation          (per seed)
    5  dataset synthesis               (shared: seed_index 0)
    6  sweep parameter sampling        (per trial)

Runs write, into the output directory: ``metrics.json`` (canonical form,
byte-identical for identical config and master seed), ``per_seed.csv``, and
trace tables for the first seed; each table gets a rendered PNG companion.
Aggregates are reported over the seeds whose free run stayed bounded, with
the diverged count alongside; a run where every seed diverges raises.
"""

from __future__ import annotations

import copy
from pathlib import Path

import numpy as np

from . import figures, readout, serialize, tasks
from .config import ExperimentConfig, parse_config, set_payload_path
from .errors import ConfigError, ConstructionError, DivergenceError, IngestionError, IonrcError
from .memristor import ActivationProfile, build_activation_profile
from .readout import ReadoutModel
from .reservoir import ReservoirWeights, esp_check, generate_weights, run, sample_timescales
from .tasks import LabeledSeries, MackeyGlassParams

SEED_COMPONENTS = {
    "weights": 1,
    "timescales": 2,
    "train_series": 3,
    "test_series": 4,
    "dataset": 5,
    "sweep": 6,
}


def component_seed(
    master_seed: int, component: str, index: int = 0, variant: int = 0
) -> np.random.SeedSequence:
    return np.random.SeedSequence(
        [master_seed, SEED_COMPONENTS[component], index, variant]
    )


def build_activation(config: ExperimentConfig) -> ActivationProfile:
    a = config.activation
    return build_activation_profile(
        config.channel,
        v_min=a.v_min_V,
        v_max=a.v_max_V,
        n_points=a.n_points,
        panels=a.panels,
    )


def build_weights(config: ExperimentConfig, variant_index: int, seed_index: int) -> ReservoirWeights:
    rc = config.variants[variant_index].reservoir
    master = config.run.master_seed
    if rc.uniform_timescale:
        timescales = np.full(rc.n_nodes, rc.timescale_s)
    else:
        timescales = sample_timescales(
            rc.n_nodes,
            rc.timescale_mean_s,
            rc.timescale_std_s,
            seed=component_seed(master, "timescales", seed_index, variant_index),
        )
    return generate_weights(
        n=rc.n_nodes,
        k=1,
        sparsity=rc.sparsity,
        target_radius=rc.target_radius,
        leak_rate=rc.leak_rate,
        stepsize=rc.stepsize_s,
        timescales=timescales,
        input_scale=rc.input_scale,
        sign_flip_fraction=rc.sign_flip_fraction,
        seed=component_seed(master, "weights", seed_index, variant_index),
        radius_mode=rc.radius_mode,
    )


def _fit(
    weights: ReservoirWeights,
    series_u: np.ndarray,
    series_y: np.ndarray,
    ridge_lambda: float,
    washout_steps: int,
    activation,
) -> ReadoutModel:
    states = run(np.zeros(weights.n), weights, series_u, activation)
    return readout.train_ridge(states, series_y, ridge_lambda, washout_steps)


def _aggregate(per_seed: list) -> tuple[list[float], int]:
    ok = [v for v in per_seed if v is not None]
    return ok, len(per_seed) - len(ok)


def _summary(per_seed: list) -> dict:
    ok, diverged = _aggregate(per_seed)
    if not ok:
        raise DivergenceError("every seed diverged before it could be scored")
    return {
        "mean": float(np.mean(ok)),
        "median": float(np.median(ok)),
        "per_seed": per_seed,
        "diverged_seeds": diverged,
    }


# ---------------------------------------------------------------------------
# task runners


def _run_mackey_glass(config: ExperimentConfig, activation) -> tuple[dict, dict]:
    task = config.mackey_glass
    master = config.run.master_seed
    teacher = task.test_teacher_steps
    horizon = task.horizon_steps
    variants_out: dict[str, dict] = {}
    traces: dict[str, dict] = {}
    for vi, variant in enumerate(config.variants):
        nrmse_seeds: list = []
        errors: list[float] = []
        sigma2s: list[float] = []
        esp_report = None
        for i in range(config.run.n_seeds):
            train = tasks.mackey_glass(
                MackeyGlassParams(seed=component_seed(master, "train_series", i)),
                length=task.train_steps,
                washout_steps=variant.training.washout_steps,
            )
            weights = build_weights(config, vi, i)
            if i == 0:
                esp_report = esp_check(weights)
            model = _fit(
                weights,
                train.u,
                train.y,
                variant.training.ridge_lambda,
                variant.training.washout_steps,
                activation,
            )
            test = tasks.mackey_glass(
                MackeyGlassParams(seed=component_seed(master, "test_series", i)),
                length=teacher + task.trace_free_steps + 1,
            )
            forced, states = readout.predict_teacher_forced(
                model, np.zeros(weights.n), weights, test.u[:teacher], activation
            )
            free = readout.predict_free_running(
                model, states[-1], weights, task.trace_free_steps, activation
            )
            sigma2 = float(np.var(test.u))
            if free.diverged_at is not None and free.diverged_at < horizon:
                nrmse_seeds.append(None)
            else:
                err = float(free.outputs[horizon, 0] - test.u[teacher + horizon, 0])
                errors.append(err)
                sigma2s.append(sigma2)
                nrmse_seeds.append(abs(err) / np.sqrt(sigma2))
            if i == 0:
                n_free = free.outputs.shape[0]
                t = np.arange(1, teacher + n_free)
                prediction = np.concatenate([forced[:-1, 0], free.outputs[:, 0]])
                traces["trace_forecast"] = {
                    "t": t.astype(float),
                    "truth": test.u[1 : teacher + n_free, 0],
                    "prediction": prediction,
                    "phase": np.where(t < teacher, "washout", "free"),
                }
        summary = _summary(nrmse_seeds)
        sigma2 = float(np.mean(sigma2s))
        truths = np.zeros(len(errors))
        aggregate = readout.nrmse_horizon(np.array(errors), truths, sigma2)
        variants_out[variant.name] = {
            "nrmse_84": aggregate,
            "nrmse_84_mean": summary["mean"],
            "nrmse_84_median": summary["median"],
            "nrmse_84_per_seed": summary["per_seed"],
            "rmse_84": float(np.sqrt(np.mean(np.array(errors) ** 2))),
            "sigma2_input": sigma2,
            "diverged_seeds": summary["diverged_seeds"],
            "esp_seed0": {
                "spectral_radius_m": esp_report.spectral_radius_m,
                "satisfied": esp_report.satisfied,
            },
        }
    metrics = {
        "task": "mackey_glass",
        "horizon_steps": horizon,
        "variants": variants_out,
        "objective": variants_out[config.variants[0].name]["nrmse_84_mean"],
    }
    return metrics, traces


def _run_harmonic(config: ExperimentConfig, activation) -> tuple[dict, dict]:
    task = config.harmonic
    master = config.run.master_seed
    teacher = task.eval_teacher_steps
    eval_series = tasks.harmonic(teacher + task.eval_free_steps)
    truth_free = eval_series.u[teacher:, 0]
    variants_out: dict[str, dict] = {}
    trace: dict[str, np.ndarray] = {
        "t": eval_series.t[1:],
        "truth": eval_series.u[1:, 0],
        "phase": np.where(np.arange(1, eval_series.length) < teacher, "washout", "free"),
    }
    for vi, variant in enumerate(config.variants):
        rmse_seeds: list = []
        esp_report = None
        for i in range(config.run.n_seeds):
            train = tasks.harmonic(
                task.train_steps, washout_steps=variant.training.washout_steps
            )
            weights = build_weights(config, vi, i)
            if i == 0:
                esp_report = esp_check(weights)
            model = _fit(
                weights,
                train.u,
                train.y,
                variant.training.ridge_lambda,
                variant.training.washout_steps,
                activation,
            )
            forced, states = readout.predict_teacher_forced(
                model, np.zeros(weights.n), weights, eval_series.u[:teacher], activation
            )
            free = readout.predict_free_running(
                model, states[-1], weights, task.eval_free_steps, activation
            )
            if free.diverged_at is not None:
                rmse_seeds.append(None)
            else:
                rmse_seeds.append(readout.rmse(free.outputs[:, 0], truth_free))
            if i == 0:
                n_free = free.outputs.shape[0]
                prediction = np.full(eval_series.length - 1, np.nan)
                prediction[: teacher - 1] = forced[:-1, 0]
                prediction[teacher - 1 : teacher - 1 + n_free] = free.outputs[:, 0]
                trace[f"{variant.name}_prediction"] = prediction
        summary = _summary(rmse_seeds)
        variants_out[variant.name] = {
            "rmse_mean": summary["mean"],
            "rmse_median": summary["median"],
            "rmse_per_seed": summary["per_seed"],
            "diverged_seeds": summary["diverged_seeds"],
            "esp_seed0": {
                "spectral_radius_m": esp_report.spectral_radius_m,
                "satisfied": esp_report.satisfied,
            },
        }
    metrics = {
        "task": "harmonic",
        "eval_window_steps": [teacher, teacher + task.eval_free_steps],
        "variants": variants_out,
    }
    if "esn" in variants_out and "bpn" in variants_out:
        metrics["comparison"] = {
            "rmse_ratio_esn_over_bpn": variants_out["esn"]["rmse_mean"]
            / variants_out["bpn"]["rmse_mean"]
        }
    objective_variant = "bpn" if "bpn" in variants_out else config.variants[0].name
    metrics["objective"] = variants_out[objective_variant]["rmse_mean"]
    return metrics, {"trace_harmonic": trace}


def _ventilator_data(config: ExperimentConfig) -> tuple[LabeledSeries, LabeledSeries, str]:
    vt = config.ventilator
    if vt.csv_path is not None:
        train, test = tasks.load_ventilator(
            vt.csv_path,
            split=vt.split,
            stepsize_tolerance=vt.stepsize_tolerance_s,
        )
        return train, test, "file"
    full = tasks.synth_ventilator(
        seed=component_seed(config.run.master_seed, "dataset", 0),
        n_breaths=vt.synthetic_breaths,
    )
    n_train, n_test = vt.split
    if full.length < n_train + n_test:
        raise ConstructionError(
            f"synthetic_breaths={vt.synthetic_breaths} yields {full.length} samples, "
            f"fewer than the {n_train}+{n_test} split"
        )

    def segment(a: int, b: int, label: str) -> LabeledSeries:
        return LabeledSeries(
            t=np.arange(b - a) * full.stepsize,
            u=full.u[a:b],
            y=full.y[a:b],
            stepsize=full.stepsize,
            washout_steps=full.washout_steps,
            metadata={**full.metadata, "segment": label},
        )

    return segment(0, n_train, "train"), segment(n_train, n_train + n_test, "test"), "synthetic"


def _run_ventilator(config: ExperimentConfig, activation) -> tuple[dict, dict]:
    vt = config.ventilator
    master = config.run.master_seed
    horizon = vt.prediction_horizon
    train_raw, test_raw, source = _ventilator_data(config)
    train_drive = tasks.pressure_to_input(train_raw, config.pressure_channel)
    test_drive = tasks.pressure_to_input(test_raw, config.pressure_channel)

    variants_out: dict[str, dict] = {}
    traces: dict[str, dict] = {}
    window = slice(
        min(train_raw.washout_steps, test_raw.length // 2),
        min(train_raw.washout_steps + 2000, test_raw.length),
    )
    traces["trace_pressure_current"] = {
        "t_s": test_raw.t[window],
        "pressure_mbar": test_raw.u[window, 0],
        "current_nA": test_drive.u[window, 0],
    }

    for vi, variant in enumerate(config.variants):
        washout = variant.training.washout_steps
        if variant.target == "valve":
            train_u, train_y = train_drive.u, train_raw.y
            test_u, test_y = test_drive.u, test_raw.y
        else:
            train_u = train_drive.u[: train_raw.length - horizon]
            train_y = train_raw.u[horizon:, 0:1]
            test_u = test_drive.u[: test_raw.length - horizon]
            test_y = test_raw.u[horizon:, 0:1]
        if washout >= test_u.shape[0] or washout >= train_u.shape[0]:
            raise ConfigError(
                f"washout {washout} swallows the whole split",
                f"variants.{variant.name}.training.washout_steps",
            )
        metric_seeds: list = []
        esp_report = None
        for i in range(config.run.n_seeds):
            weights = build_weights(config, vi, i)
            if i == 0:
                esp_report = esp_check(weights)
            model = _fit(
                weights, train_u, train_y, variant.training.ridge_lambda, washout, activation
            )
            states = run(np.zeros(weights.n), weights, test_u, activation)
            outputs = states @ model.w_out.T
            if variant.target == "valve":
                labels = readout.classify(outputs[washout:, 0])
                metric_seeds.append(readout.accuracy(labels, test_y[washout:, 0]))
            else:
                metric_seeds.append(readout.rmse(outputs[washout:, 0], test_y[washout:, 0]))
            if i == 0:
                t = test_raw.t[window]
                if variant.target == "valve":
                    traces["trace_valve"] = {
                        "t_s": t,
                        "pressure_mbar": test_raw.u[window, 0],
                        "valve_truth": test_raw.y[window, 0],
                        "valve_prediction": readout.classify(outputs[window, 0]).astype(float),
                    }
                else:
                    stop = min(window.stop, test_u.shape[0])
                    traces["trace_prediction"] = {
                        "t_s": test_raw.t[window.start : stop],
                        "truth_mbar": test_y[window.start : stop, 0],
                        "prediction_mbar": outputs[window.start : stop, 0],
                    }
        summary = _summary(metric_seeds)
        key = "accuracy" if variant.target == "valve" else "rmse_mbar"
        variants_out[variant.name] = {
            f"{key}_mean": summary["mean"],
            f"{key}_median": summary["median"],
            f"{key}_per_seed": summary["per_seed"],
            "diverged_seeds": summary["diverged_seeds"],
            "esp_seed0": {
                "spectral_radius_m": esp_report.spectral_radius_m,
                "satisfied": esp_report.satisfied,
            },
        }

    baselines = _ventilator_baselines(config, train_raw, test_raw)
    metrics = {
        "task": "ventilator",
        "data_source": source,
        "prediction_horizon_steps": horizon,
        "variants": variants_out,
        "baselines": baselines,
    }
    predict_names = [v.name for v in config.variants if v.target == "pressure_ahead"]
    if predict_names:
        metrics["objective"] = variants_out[predict_names[0]]["rmse_mbar_mean"]
    else:
        classify_name = config.variants[0].name
        metrics["objective"] = 1.0 - variants_out[classify_name]["accuracy_mean"]
    return metrics, traces


def _ventilator_baselines(
    config: ExperimentConfig, train_raw: LabeledSeries, test_raw: LabeledSeries
) -> dict:
    """Autoregressive reference models, fit once (they are seed-free)."""
    vt = config.ventilator
    out: dict[str, float] = {}
    train_p = train_raw.u[:, 0]
    test_p = test_raw.u[:, 0]
    washout = max(train_raw.washout_steps, 1)

    for variant in config.variants:
        order = variant.reservoir.n_nodes
        if variant.target == "valve":
            plain = readout.fit_ar(train_p, train_raw.y[:, 0], order, washout_steps=washout)
            sub = readout.fit_ar(
                train_p,
                train_raw.y[:, 0],
                order,
                subsample_stride=vt.ar_subsample_stride,
                washout_steps=washout,
            )
            for tag, model in (("", plain), ("_subsampled", sub)):
                preds = model.predict(test_p)[washout:]
                labels = readout.classify(preds)
                acc = readout.accuracy(labels, test_raw.y[washout:, 0])
                out[f"ar{order}{tag}_accuracy"] = acc
        else:
            h = vt.prediction_horizon
            model = readout.fit_ar(
                train_p[:-h], train_p[h:], order, washout_steps=washout
            )
            preds = model.predict(test_p[:-h])[washout:]
            out[f"ar{order}_rmse_mbar"] = readout.rmse(preds, test_p[h:][washout:])
    return out


# ---------------------------------------------------------------------------
# entry points


_RUNNERS = {
    "mackey_glass": _run_mackey_glass,
    "harmonic": _run_harmonic,
    "ventilator": _run_ventilator,
}


def run_experiment(
    config: ExperimentConfig, output_dir: str | Path, render: bool = True
) -> dict:
    """Execute every variant over the seed list; write and return the report."""
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    activation = build_activation(config)
    metrics, traces = _RUNNERS[config.task](config, activation)
    metrics = {
        "master_seed": config.run.master_seed,
        "n_seeds": config.run.n_seeds,
        "config": config.payload,
        **metrics,
    }
    serialize.write_metrics_json(out / "metrics.json", metrics)
    _write_per_seed_table(out / "per_seed.csv", metrics)
    for name, table in traces.items():
        csv_path = serialize.write_table_csv(out / f"{name}.csv", table)
        if render:
            _render_trace(csv_path, name, table)
    return metrics


def _write_per_seed_table(path: Path, metrics: dict):
    rows: dict[str, list] = {"variant": [], "seed_index": [], "metric": [], "value": []}
    for vname, block in metrics["variants"].items():
        for key, values in block.items():
            if not key.endswith("_per_seed"):
                continue
            for i, v in enumerate(values):
                rows["variant"].append(vname)
                rows["seed_index"].append(float(i))
                rows["metric"].append(key[: -len("_per_seed")])
                rows["value"].append(float("nan") if v is None else float(v))
    serialize.write_table_csv(
        path,
        {
            "variant": np.array(rows["variant"]),
            "seed_index": np.array(rows["seed_index"]),
            "metric": np.array(rows["metric"]),
            "value": np.array(rows["value"]),
        },
    )


def _render_trace(csv_path: Path, name: str, table: dict):
    png = csv_path.with_suffix(".png")
    if name == "trace_forecast":
        boundary = float(table["t"][table["phase"] == "free"][0])
        figures.line_figure(
            png,
            table["t"],
            [("truth", table["truth"]), ("prediction", table["prediction"])],
            xlabel="t (s)",
            ylabel="signal",
            title="next-step then free-running forecast",
            vline_x=boundary,
        )
    elif name == "trace_harmonic":
        curves = [("truth", table["truth"])]
        for key in table:
            if key.endswith("_prediction"):
                curves.append((key.replace("_", " "), table[key]))
        boundary = float(table["t"][table["phase"] == "free"][0])
        figures.line_figure(
            png, table["t"], curves, xlabel="t (s)", ylabel="signal", vline_x=boundary
        )
    elif name == "trace_pressure_current":
        figures.dual_axis_figure(
            png,
            table["t_s"],
            ("pressure", table["pressure_mbar"]),
            ("streaming current", table["current_nA"]),
            xlabel="t (s)",
            left_label="pressure (mbar)",
            right_label="current (nA)",
        )
    elif name == "trace_valve":
        figures.line_figure(
            png,
            table["t_s"],
            [
                ("pressure / 10", table["pressure_mbar"] / 10.0),
                ("valve truth", table["valve_truth"], {"drawstyle": "steps-post"}),
                ("valve prediction", table["valve_prediction"], {"drawstyle": "steps-post", "alpha": 0.7}),
            ],
            xlabel="t (s)",
            ylabel="flag / scaled pressure",
        )
    elif name == "trace_prediction":
        figures.line_figure(
            png,
            table["t_s"],
            [("truth", table["truth_mbar"]), ("prediction", table["prediction_mbar"])],
            xlabel="t (s)",
            ylabel="pressure (mbar)",
        )


def sweep(
    payload: dict,
    n_trials: int | None = None,
    seed: int | None = None,
    output_dir: str | Path = "sweep_out",
    render: bool = False,
) -> dict:
    """Seeded uniform random search over the config's declared sweep space.

    Trial i depends only on (seed, i). Failed trials are recorded and the
    sweep continues; ranking is ascending by objective (lower is better).
    """
    base = parse_config(payload)
    space = base.sweep.space
    if not space:
        raise ConfigError("sweep.space is empty; declare parameter bounds", "sweep.space")
    n_trials = base.sweep.n_trials if n_trials is None else n_trials
    if n_trials < 1:
        raise ConfigError(f"n_trials must be >= 1, got {n_trials!r}", "sweep.n_trials")
    seed = base.run.master_seed if seed is None else seed
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    trials = []
    for i in range(n_trials):
        rng = np.random.default_rng(component_seed(seed, "sweep", i))
        trial_payload = copy.deepcopy(base.payload)
        params = {}
        for path in sorted(space):
            lo, hi = space[path]
            value = float(rng.uniform(lo, hi))
            set_payload_path(trial_payload, path, value)
            params[path] = value
        record: dict = {"trial": i, "params": params}
        try:
            config = parse_config(trial_payload)
            metrics = run_experiment(config, out / f"trial_{i:03d}", render=render)
            record["status"] = "ok"
            record["objective"] = metrics["objective"]
        except IonrcError as exc:
            record["status"] = "error"
            record["error"] = str(exc)
        trials.append(record)
    ranked = sorted(
        (t for t in trials if t["status"] == "ok"), key=lambda t: (t["objective"], t["trial"])
    )
    report = {
        "seed": seed,
        "n_trials": n_trials,
        "space": {k: list(v) for k, v in space.items()},
        "trials": trials,
        "ranking": [t["trial"] for t in ranked],
        "best": ranked[0] if ranked else None,
    }
    serialize.write_metrics_json(out / "sweep.json", report)
    columns: dict[str, list] = {"trial": [], "status": [], "objective": []}
    for path in sorted(space):
        columns[path] = []
    for t in trials:
        columns["trial"].append(float(t["trial"]))
        columns["status"].append(t["status"])
        columns["objective"].append(t.get("objective", float("nan")))
        for path in sorted(space):
            columns[path].append(t["params"][path])
    serialize.write_table_csv(
        out / "sweep.csv", {k: np.array(v) for k, v in columns.items()}
    )
    return report


# ---------------------------------------------------------------------------
# plot-data export

_PLOTDATA_SOURCES = {
    "fig2a": ["trace_forecast.csv"],
    "fig2b": ["trace_harmonic.csv"],
    "fig3a": ["trace_pressure_current.csv"],
    "fig3b": ["trace_valve.csv", "trace_prediction.csv"],
}


def emit_plotdata(
    config: ExperimentConfig,
    which: str,
    run_dir: str | Path,
    out_dir: str | Path | None = None,
    render: bool = True,
) -> list[Path]:
    """Reshape run artifacts into figure-ready CSVs (plus rendered PNGs)."""
    run_dir = Path(run_dir)
    out = Path(out_dir) if out_dir is not None else run_dir / "plots"
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    if which == "activation":
        from .memristor import dump_activation

        pairs = dump_activation(config.channel, panels=config.activation.panels)
        table = {
            "voltage_V": pairs[:, 0],
            "activation": pairs[:, 1],
            "tanh_V": np.tanh(pairs[:, 0]),
        }
        path = serialize.write_table_csv(out / "fig_activation.csv", table)
        written.append(path)
        if render:
            figures.line_figure(
                path.with_suffix(".png"),
                table["voltage_V"],
                [("steady-state response", table["activation"]), ("tanh", table["tanh_V"])],
                xlabel="V (V)",
                ylabel="dimensionless activation",
            )
        return written

    if which not in _PLOTDATA_SOURCES:
        raise ConfigError(
            f"unknown plotdata selector {which!r}; choose one of "
            f"{sorted([*_PLOTDATA_SOURCES, 'activation'])}"
        )
    sources = []
    for filename in _PLOTDATA_SOURCES[which]:
        path = run_dir / filename
        if not path.exists():
            raise IngestionError(
                f"missing run artifact {path}; run the matching experiment first"
            )
        sources.append(serialize.read_table_csv(path))

    if which == "fig2a":
        table = sources[0]
        path = serialize.write_table_csv(out / "fig2a.csv", table)
        written.append(path)
        if render:
            _render_trace(path, "trace_forecast", table)
    elif which == "fig2b":
        table = sources[0]
        path = serialize.write_table_csv(out / "fig2b.csv", table)
        written.append(path)
        if render:
            _render_trace(path, "trace_harmonic", table)
    elif which == "fig3a":
        table = sources[0]
        path = serialize.write_table_csv(out / "fig3a.csv", table)
        written.append(path)
        if render:
            _render_trace(path, "trace_pressure_current", table)
    else:
        top, bottom = sources
        path = serialize.write_table_csv(out / "fig3b_top.csv", top)
        written.append(path)
        if render:
            _render_trace(path, "trace_valve", top)
        path = serialize.write_table_csv(out / "fig3b_bottom.csv", bottom)
        written.append(path)
        if render:
            _render_trace(path, "trace_prediction", bottom)
    return written
