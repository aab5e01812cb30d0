"""Experiment configuration: JSON schema, strict validation, bundled presets.

A config is a single JSON document. Keys carry explicit unit suffixes in the
units the quantities are usually quoted in (s, V, nm, um, mV, mM, mbar); they
are converted to SI exactly once, here. Validation is fail-fast: every field
is checked against the invariants of the module that will consume it before
any computation starts, and errors name the offending key by dotted path.
Unknown keys are rejected so typos cannot silently fall back to defaults.

The bundled presets reproduce the three reference experiments:

* ``mg400``   - chaotic-series forecasting, one 400-node uniform-timescale
                reservoir, 84-step free-running horizon.
* ``harmonic12`` - 12-node uniform-timescale vs banded-timescale pair on the
                two-tone harmonic signal.
* ``vent``    - ventilator pressure: 7-node valve classification and 200-node
                3-step-ahead prediction, with autoregressive baselines.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .circuit import PressureChannelParams
from .errors import ConfigError, ConstructionError
from .memristor import ChannelParams

VALID_TASKS = ("mackey_glass", "harmonic", "ventilator")
VALID_TARGETS = ("next_step", "valve", "pressure_ahead")
VALID_RADIUS_MODES = ("esp", "raw")

_INPUT_SCALE_KEYS = ("input_scale_V", "input_scale_V_per_nA", "input_scale")


class _Node:
    """Dict view that tracks its dotted path and every key it hands out."""

    def __init__(self, data: dict, path: str = ""):
        if not isinstance(data, dict):
            raise ConfigError(f"expected an object, got {type(data).__name__}", path or None)
        self.data = data
        self.path = path
        self.seen: set[str] = set()

    def _at(self, key: str) -> str:
        return f"{self.path}.{key}" if self.path else key

    def has(self, key: str) -> bool:
        return key in self.data

    def raw(self, key: str, default=None, required: bool = False):
        if key not in self.data:
            if required:
                raise ConfigError("required key is missing", self._at(key))
            return default
        self.seen.add(key)
        return self.data[key]

    def child(self, key: str, required: bool = False) -> "_Node | None":
        value = self.raw(key, required=required)
        if value is None:
            return None
        return _Node(value, self._at(key))

    def number(
        self,
        key: str,
        default=None,
        required: bool = False,
        minimum: float | None = None,
        maximum: float | None = None,
        exclusive_minimum: float | None = None,
    ) -> float | None:
        value = self.raw(key, default=default, required=required)
        if value is None:
            return None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"expected a number, got {value!r}", self._at(key))
        value = float(value)
        if not math.isfinite(value):
            raise ConfigError(f"must be finite, got {value!r}", self._at(key))
        if minimum is not None and value < minimum:
            raise ConfigError(f"must be >= {minimum}, got {value!r}", self._at(key))
        if exclusive_minimum is not None and value <= exclusive_minimum:
            raise ConfigError(f"must be > {exclusive_minimum}, got {value!r}", self._at(key))
        if maximum is not None and value > maximum:
            raise ConfigError(f"must be <= {maximum}, got {value!r}", self._at(key))
        return value

    def integer(
        self,
        key: str,
        default=None,
        required: bool = False,
        minimum: int | None = None,
        maximum: int | None = None,
    ) -> int | None:
        value = self.raw(key, default=default, required=required)
        if value is None:
            return None
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"expected an integer, got {value!r}", self._at(key))
        if minimum is not None and value < minimum:
            raise ConfigError(f"must be >= {minimum}, got {value!r}", self._at(key))
        if maximum is not None and value > maximum:
            raise ConfigError(f"must be <= {maximum}, got {value!r}", self._at(key))
        return value

    def string(self, key: str, default=None, required: bool = False, choices=None) -> str | None:
        value = self.raw(key, default=default, required=required)
        if value is None:
            return None
        if not isinstance(value, str):
            raise ConfigError(f"expected a string, got {value!r}", self._at(key))
        if choices is not None and value not in choices:
            raise ConfigError(f"must be one of {list(choices)}, got {value!r}", self._at(key))
        return value

    def finish(self):
        unknown = sorted(set(self.data) - self.seen)
        if unknown:
            raise ConfigError(f"unknown keys {unknown}", self.path or None)


# ---------------------------------------------------------------------------
# config dataclasses


@dataclass(frozen=True)
class ReservoirConfig:
    n_nodes: int
    sparsity: float
    target_radius: float
    leak_rate: float
    stepsize_s: float
    input_scale: float
    radius_mode: str = "esp"
    sign_flip_fraction: float = 0.5
    timescale_s: float | None = None
    timescale_mean_s: float | None = None
    timescale_std_s: float | None = None

    @property
    def uniform_timescale(self) -> bool:
        return self.timescale_s is not None

    @property
    def min_timescale_s(self) -> float:
        """Smallest timescale any draw can produce (the clamp floor for banded)."""
        if self.uniform_timescale:
            return self.timescale_s
        return self.timescale_mean_s / 5.0


@dataclass(frozen=True)
class TrainingConfig:
    ridge_lambda: float
    washout_steps: int


@dataclass(frozen=True)
class VariantConfig:
    name: str
    reservoir: ReservoirConfig
    training: TrainingConfig
    target: str = "next_step"


@dataclass(frozen=True)
class RunConfig:
    master_seed: int
    n_seeds: int


@dataclass(frozen=True)
class ActivationConfig:
    v_min_V: float = -2.0
    v_max_V: float = 2.0
    n_points: int = 2001
    panels: int = 1024


@dataclass(frozen=True)
class MackeyGlassTaskConfig:
    train_steps: int = 3000
    test_teacher_steps: int = 1000
    horizon_steps: int = 84
    trace_free_steps: int = 301


@dataclass(frozen=True)
class HarmonicTaskConfig:
    train_steps: int = 800
    eval_teacher_steps: int = 200
    eval_free_steps: int = 200


@dataclass(frozen=True)
class VentilatorTaskConfig:
    csv_path: str | None = None
    split: tuple[int, int] = (80_000, 20_000)
    synthetic_breaths: int = 1250
    prediction_horizon: int = 3
    ar_subsample_stride: int = 8
    stepsize_tolerance_s: float = 1e-6


@dataclass(frozen=True)
class SweepConfig:
    n_trials: int = 10
    space: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ExperimentConfig:
    task: str
    run: RunConfig
    variants: tuple[VariantConfig, ...]
    channel: ChannelParams
    activation: ActivationConfig
    pressure_channel: PressureChannelParams | None = None
    mackey_glass: MackeyGlassTaskConfig | None = None
    harmonic: HarmonicTaskConfig | None = None
    ventilator: VentilatorTaskConfig | None = None
    sweep: SweepConfig = field(default_factory=SweepConfig)
    payload: dict = field(default_factory=dict, repr=False)

    def variant(self, name: str) -> VariantConfig:
        for v in self.variants:
            if v.name == name:
                return v
        raise ConfigError(f"no variant named {name!r}", "variants")


# ---------------------------------------------------------------------------
# block parsers


def _parse_reservoir(node: _Node) -> ReservoirConfig:
    n_nodes = node.integer("n_nodes", required=True, minimum=1)
    sparsity = node.number("sparsity", required=True, minimum=0.0)
    if sparsity >= 1.0:
        raise ConfigError(f"sparsity must be < 1, got {sparsity!r}", node._at("sparsity"))
    radius_mode = node.string("radius_mode", default="esp", choices=VALID_RADIUS_MODES)
    target_radius = node.number("target_radius", required=True, exclusive_minimum=0.0)
    if radius_mode == "esp" and target_radius >= 1.0:
        raise ConfigError(
            f"certificate-targeted radius must be < 1, got {target_radius!r}",
            node._at("target_radius"),
        )
    leak_rate = node.number("leak_rate", required=True, exclusive_minimum=0.0, maximum=1.0)
    stepsize = node.number("stepsize_s", required=True, exclusive_minimum=0.0)

    uniform = node.number("timescale_s", exclusive_minimum=0.0)
    mean = node.number("timescale_mean_s", exclusive_minimum=0.0)
    std = node.number("timescale_std_s", minimum=0.0)
    if uniform is not None and (mean is not None or std is not None):
        raise ConfigError(
            "give either timescale_s or the timescale_mean_s/timescale_std_s pair, not both",
            node.path,
        )
    if uniform is None and (mean is None or std is None):
        raise ConfigError(
            "need timescale_s or both of timescale_mean_s and timescale_std_s",
            node.path,
        )
    min_c = uniform if uniform is not None else mean / 5.0
    if leak_rate * stepsize > min_c * (1.0 + 1e-12):
        raise ConfigError(
            f"leak_rate*stepsize_s = {leak_rate * stepsize!r} exceeds the smallest "
            f"possible timescale {min_c!r}; the per-step decay would be negative",
            node.path,
        )
    if radius_mode == "esp":
        identity_part = 1.0 - leak_rate * stepsize / min_c
        if target_radius <= identity_part:
            raise ConfigError(
                f"target_radius {target_radius!r} is unreachable: the leak term alone "
                f"contributes {identity_part!r}; raise the radius or use radius_mode "
                f"'raw'",
                node._at("target_radius"),
            )

    scale_keys = [k for k in _INPUT_SCALE_KEYS if node.has(k)]
    if len(scale_keys) != 1:
        raise ConfigError(
            f"exactly one of {list(_INPUT_SCALE_KEYS)} is required, found {scale_keys}",
            node.path,
        )
    input_scale = node.number(scale_keys[0], required=True, minimum=0.0)
    sign_flip = node.number("sign_flip_fraction", default=0.5, minimum=0.0, maximum=1.0)
    node.finish()
    return ReservoirConfig(
        n_nodes=n_nodes,
        sparsity=sparsity,
        target_radius=target_radius,
        leak_rate=leak_rate,
        stepsize_s=stepsize,
        input_scale=input_scale,
        radius_mode=radius_mode,
        sign_flip_fraction=sign_flip,
        timescale_s=uniform,
        timescale_mean_s=mean,
        timescale_std_s=std,
    )


def _parse_training(node: _Node) -> TrainingConfig:
    out = TrainingConfig(
        ridge_lambda=node.number("ridge_lambda", required=True, minimum=0.0),
        washout_steps=node.integer("washout_steps", required=True, minimum=0),
    )
    node.finish()
    return out


def _parse_variant(node: _Node, task: str) -> VariantConfig:
    name = node.string("name", required=True)
    target = node.string("target", default="next_step", choices=VALID_TARGETS)
    if task in ("mackey_glass", "harmonic") and target != "next_step":
        raise ConfigError(
            f"task {task!r} only supports target 'next_step', got {target!r}",
            node._at("target"),
        )
    if task == "ventilator" and target == "next_step":
        raise ConfigError(
            "ventilator variants must target 'valve' or 'pressure_ahead'",
            node._at("target"),
        )
    reservoir = _parse_reservoir(node.child("reservoir", required=True))
    training = _parse_training(node.child("training", required=True))
    node.finish()
    return VariantConfig(name=name, reservoir=reservoir, training=training, target=target)


def _parse_channel(node: _Node | None) -> ChannelParams:
    if node is None:
        return ChannelParams.from_lab_units()
    kwargs = {}
    for key in (
        "base_radius_nm",
        "tip_radius_nm",
        "length_um",
        "surface_charge_e_per_nm2",
        "surface_potential_mV",
        "concentration_mM",
        "diffusion_um2_per_ms",
        "viscosity_mPa_s",
        "permittivity_nF_per_m",
        "temperature_K",
    ):
        value = node.number(key)
        if value is not None:
            kwargs[key] = value
    node.finish()
    try:
        return ChannelParams.from_lab_units(**kwargs)
    except ConstructionError as exc:
        raise ConfigError(str(exc), node.path) from exc


def _parse_pressure_channel(node: _Node | None) -> PressureChannelParams:
    if node is None:
        return PressureChannelParams.from_lab_units()
    kwargs = {}
    for key in (
        "radius_um",
        "length_um",
        "surface_potential_mV",
        "viscosity_mPa_s",
        "permittivity_nF_per_m",
    ):
        value = node.number(key)
        if value is not None:
            kwargs[key] = value
    node.finish()
    try:
        return PressureChannelParams.from_lab_units(**kwargs)
    except ConstructionError as exc:
        raise ConfigError(str(exc), node.path) from exc


def _parse_activation(node: _Node | None) -> ActivationConfig:
    if node is None:
        return ActivationConfig()
    out = ActivationConfig(
        v_min_V=node.number("v_min_V", default=-2.0, maximum=0.0),
        v_max_V=node.number("v_max_V", default=2.0, exclusive_minimum=0.0),
        n_points=node.integer("n_points", default=2001, minimum=64),
        panels=node.integer("panels", default=1024, minimum=1),
    )
    if out.v_min_V >= 0.0:
        raise ConfigError("v_min_V must be negative", node._at("v_min_V"))
    node.finish()
    return out


def _parse_sweep(node: _Node | None, payload: dict) -> SweepConfig:
    if node is None:
        return SweepConfig()
    n_trials = node.integer("n_trials", default=10, minimum=1)
    space_raw = node.raw("space", default={})
    if not isinstance(space_raw, dict):
        raise ConfigError("space must be an object of path -> [low, high]", node._at("space"))
    space: dict[str, tuple[float, float]] = {}
    for path, bounds in space_raw.items():
        at = f"{node._at('space')}.{path}"
        if (
            not isinstance(bounds, (list, tuple))
            or len(bounds) != 2
            or any(isinstance(b, bool) or not isinstance(b, (int, float)) for b in bounds)
        ):
            raise ConfigError(f"bounds must be [low, high], got {bounds!r}", at)
        lo, hi = float(bounds[0]), float(bounds[1])
        if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
            raise ConfigError(f"bounds must be finite with low <= high, got {bounds!r}", at)
        resolve_payload_path(payload, path, at)
        space[path] = (lo, hi)
    node.finish()
    return SweepConfig(n_trials=n_trials, space=space)


def resolve_payload_path(payload: dict, path: str, error_path: str | None = None):
    """Follow a dotted sweep path; variants are addressed by name."""
    error_path = error_path or path
    parts = path.split(".")
    here = payload
    for i, part in enumerate(parts):
        if isinstance(here, list):
            matches = [v for v in here if isinstance(v, dict) and v.get("name") == part]
            if len(matches) != 1:
                raise ConfigError(f"no unique list entry named {part!r}", error_path)
            here = matches[0]
            continue
        if not isinstance(here, dict) or part not in here:
            raise ConfigError(f"path segment {part!r} not found", error_path)
        if i == len(parts) - 1:
            value = here[part]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"path must point at a number, found {value!r}", error_path)
            return
        here = here[part]
    # A path whose final segment lands on a list entry is not a number.
    raise ConfigError("path must point at a number", error_path)


def set_payload_path(payload: dict, path: str, value: float):
    parts = path.split(".")
    here = payload
    for part in parts[:-1]:
        if isinstance(here, list):
            here = next(v for v in here if isinstance(v, dict) and v.get("name") == part)
        else:
            here = here[part]
    if isinstance(here, list):
        raise ConfigError(f"path {path!r} ends on a list", path)
    here[parts[-1]] = value


def _parse_mackey_glass(node: _Node | None) -> MackeyGlassTaskConfig:
    if node is None:
        return MackeyGlassTaskConfig()
    out = MackeyGlassTaskConfig(
        train_steps=node.integer("train_steps", default=3000, minimum=100),
        test_teacher_steps=node.integer("test_teacher_steps", default=1000, minimum=18),
        horizon_steps=node.integer("horizon_steps", default=84, minimum=1),
        trace_free_steps=node.integer("trace_free_steps", default=301, minimum=1),
    )
    if out.trace_free_steps < out.horizon_steps + 1:
        raise ConfigError(
            f"trace_free_steps must cover the horizon ({out.horizon_steps + 1} steps)",
            node._at("trace_free_steps"),
        )
    node.finish()
    return out


def _parse_harmonic(node: _Node | None) -> HarmonicTaskConfig:
    if node is None:
        return HarmonicTaskConfig()
    out = HarmonicTaskConfig(
        train_steps=node.integer("train_steps", default=800, minimum=10),
        eval_teacher_steps=node.integer("eval_teacher_steps", default=200, minimum=1),
        eval_free_steps=node.integer("eval_free_steps", default=200, minimum=1),
    )
    node.finish()
    return out


def _parse_ventilator(node: _Node | None) -> VentilatorTaskConfig:
    if node is None:
        return VentilatorTaskConfig()
    csv_path = node.string("csv_path")
    split_raw = node.raw("split", default=[80_000, 20_000])
    if (
        not isinstance(split_raw, (list, tuple))
        or len(split_raw) != 2
        or any(isinstance(v, bool) or not isinstance(v, int) or v < 1 for v in split_raw)
    ):
        raise ConfigError(
            f"split must be [train_rows, test_rows] with positive integers, got {split_raw!r}",
            node._at("split"),
        )
    out = VentilatorTaskConfig(
        csv_path=csv_path,
        split=(int(split_raw[0]), int(split_raw[1])),
        synthetic_breaths=node.integer("synthetic_breaths", default=1250, minimum=2),
        prediction_horizon=node.integer("prediction_horizon", default=3, minimum=1),
        ar_subsample_stride=node.integer("ar_subsample_stride", default=8, minimum=1),
        stepsize_tolerance_s=node.number(
            "stepsize_tolerance_s", default=1e-6, exclusive_minimum=0.0
        ),
    )
    node.finish()
    return out


def parse_config(payload: dict) -> ExperimentConfig:
    """Validate a raw key-tree into an ExperimentConfig (fail-fast)."""
    if not isinstance(payload, dict):
        raise ConfigError(f"config root must be an object, got {type(payload).__name__}")
    payload = copy.deepcopy(payload)
    root = _Node(payload)
    task = root.string("task", required=True, choices=VALID_TASKS)

    run_node = root.child("run", required=True)
    run = RunConfig(
        master_seed=run_node.integer("master_seed", required=True, minimum=0),
        n_seeds=run_node.integer("n_seeds", required=True, minimum=1),
    )
    run_node.finish()

    variants_raw = root.raw("variants", required=True)
    if not isinstance(variants_raw, list) or not variants_raw:
        raise ConfigError("variants must be a nonempty list", "variants")
    variants = tuple(
        _parse_variant(_Node(v, f"variants[{i}]"), task) for i, v in enumerate(variants_raw)
    )
    names = [v.name for v in variants]
    if len(set(names)) != len(names):
        raise ConfigError(f"variant names must be unique, got {names}", "variants")

    channel = _parse_channel(root.child("channel"))
    activation = _parse_activation(root.child("activation"))
    pressure_channel = None
    mg = hm = vent = None
    if task == "mackey_glass":
        mg = _parse_mackey_glass(root.child("mackey_glass"))
    elif task == "harmonic":
        hm = _parse_harmonic(root.child("harmonic"))
    else:
        vent = _parse_ventilator(root.child("ventilator"))
        pressure_channel = _parse_pressure_channel(root.child("pressure_channel"))

    sweep = _parse_sweep(root.child("sweep"), payload)
    root.finish()
    return ExperimentConfig(
        task=task,
        run=run,
        variants=variants,
        channel=channel,
        activation=activation,
        pressure_channel=pressure_channel,
        mackey_glass=mg,
        harmonic=hm,
        ventilator=vent,
        sweep=sweep,
        payload=payload,
    )


def load_payload(path: str | Path) -> dict:
    """Read a config file into its raw key-tree, without validating it."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}", str(path)) from exc
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}", str(path)) from exc
    if not isinstance(payload, dict):
        raise ConfigError(
            f"config root must be an object, got {type(payload).__name__}", str(path)
        )
    return payload


def load_config(path: str | Path) -> ExperimentConfig:
    return parse_config(load_payload(path))


# ---------------------------------------------------------------------------
# presets

PRESETS: dict[str, dict] = {
    "mg400": {
        "task": "mackey_glass",
        "run": {"master_seed": 31416, "n_seeds": 20},
        "variants": [
            {
                "name": "esn",
                "target": "next_step",
                "reservoir": {
                    "n_nodes": 400,
                    "sparsity": 0.75,
                    "target_radius": 0.95,
                    "radius_mode": "raw",
                    "leak_rate": 0.95,
                    "stepsize_s": 1.0,
                    "timescale_s": 2.27,
                    "input_scale_V": 0.45,
                },
                "training": {"ridge_lambda": 1e-7, "washout_steps": 100},
            }
        ],
        "mackey_glass": {
            "train_steps": 3000,
            "test_teacher_steps": 1000,
            "horizon_steps": 84,
            "trace_free_steps": 301,
        },
        "sweep": {
            "n_trials": 10,
            "space": {
                "variants.esn.training.ridge_lambda": [1e-9, 1e-6],
                "variants.esn.reservoir.target_radius": [0.85, 0.99],
            },
        },
    },
    "harmonic12": {
        "task": "harmonic",
        "run": {"master_seed": 27182, "n_seeds": 100},
        "variants": [
            {
                "name": "esn",
                "target": "next_step",
                "reservoir": {
                    "n_nodes": 12,
                    "sparsity": 0.67,
                    "target_radius": 0.32,
                    "radius_mode": "raw",
                    "leak_rate": 0.44,
                    "stepsize_s": 0.3141592653589793,
                    "timescale_s": 1.87,
                    "input_scale_V": 0.26,
                },
                "training": {"ridge_lambda": 4e-5, "washout_steps": 200},
            },
            {
                "name": "bpn",
                "target": "next_step",
                "reservoir": {
                    "n_nodes": 12,
                    "sparsity": 0.35,
                    "target_radius": 0.76,
                    "radius_mode": "esp",
                    "sign_flip_fraction": 0.7,
                    "leak_rate": 0.86,
                    "stepsize_s": 0.3141592653589793,
                    "timescale_mean_s": 2.79,
                    "timescale_std_s": 9.9,
                    "input_scale_V": 0.21,
                },
                "training": {"ridge_lambda": 1e-6, "washout_steps": 200},
            },
        ],
        "harmonic": {"train_steps": 800, "eval_teacher_steps": 200, "eval_free_steps": 200},
        "sweep": {
            "n_trials": 10,
            "space": {
                "variants.bpn.reservoir.target_radius": [0.4, 0.95],
                "variants.bpn.training.ridge_lambda": [1e-7, 1e-4],
            },
        },
    },
    "vent": {
        "task": "ventilator",
        "run": {"master_seed": 16180, "n_seeds": 20},
        "variants": [
            {
                "name": "classify",
                "target": "valve",
                "reservoir": {
                    "n_nodes": 7,
                    "sparsity": 0.017,
                    "target_radius": 0.9,
                    "radius_mode": "raw",
                    "leak_rate": 0.98,
                    "stepsize_s": 0.034035,
                    "timescale_mean_s": 0.27,
                    "timescale_std_s": 1.89,
                    "input_scale_V_per_nA": 0.11,
                },
                "training": {"ridge_lambda": 1.69e-6, "washout_steps": 1000},
            },
            {
                "name": "predict",
                "target": "pressure_ahead",
                "reservoir": {
                    "n_nodes": 200,
                    "sparsity": 0.017,
                    "target_radius": 0.9,
                    "radius_mode": "raw",
                    "leak_rate": 0.98,
                    "stepsize_s": 0.034035,
                    "timescale_mean_s": 0.27,
                    "timescale_std_s": 1.89,
                    "input_scale_V_per_nA": 0.11,
                },
                "training": {"ridge_lambda": 1.69e-6, "washout_steps": 1000},
            },
        ],
        "ventilator": {
            "csv_path": None,
            "split": [80_000, 20_000],
            "synthetic_breaths": 1250,
            "prediction_horizon": 3,
            "ar_subsample_stride": 8,
            "stepsize_tolerance_s": 1e-6,
        },
        "pressure_channel": {
            "radius_um": 25.0,
            "length_um": 200.0,
            "surface_potential_mV": -40.0,
            "viscosity_mPa_s": 1.01,
            "permittivity_nF_per_m": 0.71,
        },
        "sweep": {
            "n_trials": 10,
            "space": {
                "variants.classify.reservoir.target_radius": [0.5, 1.2],
                "variants.classify.training.ridge_lambda": [1e-7, 1e-4],
            },
        },
    },
}


def preset_payload(name: str) -> dict:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; available: {sorted(PRESETS)}")
    return copy.deepcopy(PRESETS[name])


def preset(name: str) -> ExperimentConfig:
    return parse_config(preset_payload(name))
