"""Benchmark signal generation and ventilator-pressure ingestion.

Three signal sources feed the pipeline:

* a chaotic delay-differential series (forward Euler at unit step with an
  integer-step delay buffer, then squashed through tanh(P - 1)),
* a two-tone harmonic product sin(t) cos(1.2 t),
* ventilator pressure recordings, either ingested from a CSV export of the
  public dataset or synthesized as piecewise breath waveforms when the real
  data is not available.

Everything is packaged as a LabeledSeries: a uniformly sampled input/target
pair with a washout count and free-form metadata. Targets are the next-step
value for the generated signals; the ventilator tasks derive their targets
from the valve-flag column or by shifting the pressure column.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .circuit import PressureChannelParams, attach_pressure_input
from .errors import ConstructionError, IngestionError

#: Spacing tolerance for the uniform time grid (s).
GRID_TOL = 1e-12

#: Default sample spacing of the ventilator recordings (s).
VENTILATOR_STEPSIZE = 0.034035

#: Default CSV column names for the ventilator dataset.
VENTILATOR_COLUMNS = {
    "breath": "breath_id",
    "time": "time_step",
    "pressure": "pressure",
    "valve": "u_out",
}

MBAR_TO_PA = 100.0
AMPERE_TO_NANOAMPERE = 1e9


@dataclass(frozen=True)
class LabeledSeries:
    """Uniformly sampled input/target pair.

    t is (T,), u is (T, K), y is (T, L); the first ``washout_steps`` samples
    are reserved for reservoir settling and excluded from any fit.
    """

    t: np.ndarray
    u: np.ndarray
    y: np.ndarray
    stepsize: float
    washout_steps: int = 0
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        u = np.atleast_2d(np.asarray(self.u, dtype=float))
        y = np.atleast_2d(np.asarray(self.y, dtype=float))
        if u.shape[0] == 1 and t.shape[0] > 1:
            u = u.T
        if y.shape[0] == 1 and t.shape[0] > 1:
            y = y.T
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "y", y)
        if t.ndim != 1 or t.shape[0] < 1:
            raise ConstructionError(f"time stamps must be a nonempty vector, got {t.shape}")
        if u.shape[0] != t.shape[0] or y.shape[0] != t.shape[0]:
            raise ConstructionError(
                f"t ({t.shape[0]}), u ({u.shape[0]}), y ({y.shape[0]}) row counts differ"
            )
        if self.stepsize <= 0.0:
            raise ConstructionError(f"stepsize must be positive, got {self.stepsize!r}")
        if t.shape[0] > 1:
            drift = np.max(np.abs(np.diff(t) - self.stepsize))
            if drift >= GRID_TOL:
                raise ConstructionError(
                    f"time grid is not uniform at stepsize {self.stepsize!r} "
                    f"(max deviation {drift:.3e} s)"
                )
        if not (0 <= self.washout_steps < t.shape[0]):
            raise ConstructionError(
                f"washout {self.washout_steps!r} must be < length {t.shape[0]}"
            )

    @property
    def length(self) -> int:
        return self.t.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.u.shape[1]

    @property
    def n_targets(self) -> int:
        return self.y.shape[1]


def _time_grid(length: int, stepsize: float) -> np.ndarray:
    return np.arange(length) * stepsize


# ---------------------------------------------------------------------------
# chaotic delay series


@dataclass(frozen=True)
class MackeyGlassParams:
    """Delay-equation rates; the defaults put the series on the chaotic attractor."""

    beta: float = 0.2
    theta: float = 1.0
    gamma: float = 0.1
    exponent: float = 10.0
    delay_steps: int = 17
    seed: int | np.random.SeedSequence | None = None

    def __post_init__(self):
        if self.theta <= 0.0:
            raise ConstructionError(f"theta must be positive, got {self.theta!r}")
        if self.delay_steps < 1:
            raise ConstructionError(f"delay must be >= 1 step, got {self.delay_steps!r}")


def _integrate_delay(raw: np.ndarray, params: MackeyGlassParams):
    beta, theta, gamma, p = params.beta, params.theta, params.gamma, params.exponent
    d = params.delay_steps
    for k in range(d, raw.shape[0]):
        delayed = raw[k - d]
        raw[k] = raw[k - 1] + beta * delayed / (theta + delayed**p) - gamma * raw[k - 1]


def mackey_glass(
    params: MackeyGlassParams,
    length: int,
    stepsize: float = 1.0,
    washout_steps: int = 0,
    history: np.ndarray | None = None,
) -> LabeledSeries:
    """Generate the delay series and package it as a next-step prediction task.

    The raw sequence starts from ``delay_steps`` uniform draws in [-1, 1)
    (or the explicit ``history``), advances by forward Euler with the delayed
    feedback term, and is then mapped through tanh(P - 1). u[k] is the mapped
    value at step k and y[k] the value at step k+1.

    The delay dynamics are odd in P, so the chaotic attractor around P = +1
    has a sign-mirrored twin that roughly half of all random histories fall
    into. Benchmark results (and the rescale, which squashes the mirror into
    tanh's negative tail) assume the positive one, so random histories are
    redrawn until the trajectory settles there. An explicit ``history`` is
    integrated as given.
    """
    d = params.delay_steps
    if length <= d:
        raise ConstructionError(f"length {length!r} must exceed the delay {d}")
    raw = np.empty(length + 1)
    if history is None:
        rng = np.random.default_rng(params.seed)
        for _ in range(64):
            raw[:d] = rng.uniform(-1.0, 1.0, d)
            _integrate_delay(raw, params)
            settle = raw[-min(length, 500) :]
            if np.mean(settle) > 0.0:
                break
        else:
            raise ConstructionError(
                "no draw settled on the positive attractor after 64 attempts"
            )
    else:
        history = np.asarray(history, dtype=float)
        if history.shape != (d,):
            raise ConstructionError(f"history must have shape ({d},), got {history.shape}")
        raw[:d] = history
        _integrate_delay(raw, params)
    series = np.tanh(raw - 1.0)
    return LabeledSeries(
        t=_time_grid(length, stepsize),
        u=series[:length, None],
        y=series[1 : length + 1, None],
        stepsize=stepsize,
        washout_steps=washout_steps,
        metadata={
            "task": "mackey_glass",
            "beta": params.beta,
            "theta": params.theta,
            "gamma": params.gamma,
            "exponent": params.exponent,
            "delay_steps": d,
        },
    )


# ---------------------------------------------------------------------------
# harmonic two-tone signal


def harmonic_signal(t: np.ndarray) -> np.ndarray:
    """sin(t) cos(1.2 t): tones at 0.2 and 2.2 rad/s with incommensurate ratio."""
    t = np.asarray(t, dtype=float)
    return np.sin(t) * np.cos(1.2 * t)


def harmonic(
    length: int,
    stepsize: float = math.pi / 10.0,
    washout_steps: int = 0,
) -> LabeledSeries:
    """Sample the harmonic product as a next-step prediction task."""
    if length < 1:
        raise ConstructionError(f"length must be >= 1, got {length!r}")
    t = _time_grid(length, stepsize)
    return LabeledSeries(
        t=t,
        u=harmonic_signal(t)[:, None],
        y=harmonic_signal(t + stepsize)[:, None],
        stepsize=stepsize,
        washout_steps=washout_steps,
        metadata={"task": "harmonic"},
    )


# ---------------------------------------------------------------------------
# ventilator pressure data


def _parse_float(text: str, row_number: int, column: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise IngestionError(
            f"row {row_number}: column {column!r} is not numeric: {text!r}"
        ) from exc


def load_ventilator(
    path: str | Path,
    split: tuple[int, int] = (80_000, 20_000),
    columns: dict | None = None,
    stepsize_tolerance: float = 1e-6,
    washout_steps: int = 1000,
) -> tuple[LabeledSeries, LabeledSeries]:
    """Ingest a ventilator-pressure CSV into contiguous train/test series.

    The file must carry a header naming (breath id, time within breath,
    pressure in mbar, expiratory-valve flag); ``columns`` overrides the
    default names. The sample spacing is inferred as the median within-breath
    increment and every within-breath increment must match it to
    ``stepsize_tolerance`` seconds. Time is re-stamped onto one global uniform
    grid, so inter-breath clock resets are accepted.

    u is the pressure column, y the valve flag; prediction tasks re-derive
    their targets by shifting (see shift_targets).
    """
    names = dict(VENTILATOR_COLUMNS)
    names.update(columns or {})
    path = Path(path)
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        missing = [names[k] for k in ("breath", "time", "pressure", "valve") if names[k] not in header]
        if missing:
            raise IngestionError(f"{path.name}: missing columns {missing}; header is {header}")
        breaths: list[str] = []
        times: list[float] = []
        pressures: list[float] = []
        valves: list[float] = []
        for i, row in enumerate(reader, start=2):
            breaths.append(row[names["breath"]])
            times.append(_parse_float(row[names["time"]], i, names["time"]))
            pressures.append(_parse_float(row[names["pressure"]], i, names["pressure"]))
            flag = _parse_float(row[names["valve"]], i, names["valve"])
            if flag not in (0.0, 1.0):
                raise IngestionError(f"row {i}: valve flag must be 0 or 1, got {flag!r}")
            valves.append(flag)
    n = len(times)
    if n < 2:
        raise IngestionError(f"{path.name}: needs at least 2 data rows, found {n}")
    t_raw = np.array(times)
    same_breath = np.array([breaths[i] == breaths[i + 1] for i in range(n - 1)])
    diffs = np.diff(t_raw)[same_breath]
    if diffs.size == 0:
        raise IngestionError(f"{path.name}: no two consecutive rows share a breath id")
    dt = float(np.median(diffs))
    if dt <= 0.0:
        raise IngestionError(f"{path.name}: non-increasing time within breaths (median {dt!r})")
    bad = np.flatnonzero(np.abs(diffs - dt) > stepsize_tolerance)
    if bad.size:
        rows = [int(np.flatnonzero(same_breath)[j]) + 3 for j in bad[:10]]
        raise IngestionError(
            f"{path.name}: {bad.size} within-breath increments deviate from "
            f"{dt!r} s by more than {stepsize_tolerance!r} s, e.g. rows {rows}"
        )
    n_train, n_test = split
    if n_train < 1 or n_test < 1:
        raise IngestionError(f"split sizes must be positive, got {split!r}")
    if n < n_train + n_test:
        raise IngestionError(
            f"{path.name}: {n} rows cannot cover a {n_train}+{n_test} split"
        )
    pressure = np.array(pressures)
    valve = np.array(valves)
    meta = {"task": "ventilator", "source": str(path), "stepsize_s": dt}

    def segment(a: int, b: int, label: str) -> LabeledSeries:
        return LabeledSeries(
            t=_time_grid(b - a, dt),
            u=pressure[a:b, None],
            y=valve[a:b, None],
            stepsize=dt,
            washout_steps=washout_steps,
            metadata={**meta, "segment": label, "rows": [a, b]},
        )

    return segment(0, n_train, "train"), segment(n_train, n_train + n_test, "test")


def synth_ventilator(
    seed: int | np.random.SeedSequence | None,
    n_breaths: int,
    steps_per_breath: int = 80,
    stepsize: float = VENTILATOR_STEPSIZE,
    washout_steps: int = 1000,
) -> LabeledSeries:
    """Piecewise stand-in for the ventilator recordings.

    Each breath is rise, plateau, exponential decay, and a hold at PEEP, with
    per-breath randomized amplitude, baseline, phase lengths, and decay rate.
    The valve flag is 1 during the decay and 0 elsewhere, so late decay and
    hold are both flat near PEEP and only longer context separates them.
    This mimics the amplitude and rhythm of real recordings without claiming
    equivalence.
    """
    if n_breaths < 1:
        raise ConstructionError(f"n_breaths must be >= 1, got {n_breaths!r}")
    if steps_per_breath < 30:
        raise ConstructionError(
            f"steps_per_breath must be >= 30 to fit four phases, got {steps_per_breath!r}"
        )
    rng = np.random.default_rng(seed)
    pressure = np.empty(n_breaths * steps_per_breath)
    valve = np.empty(n_breaths * steps_per_breath)
    for b in range(n_breaths):
        amplitude = rng.uniform(8.0, 30.0)
        peep = rng.uniform(4.0, 7.0)
        shape = rng.uniform(0.7, 1.6)
        decay_steps_scale = rng.uniform(3.0, 8.0) * steps_per_breath / 80.0
        # Phase fractions sum to <= 0.93, so the trailing hold keeps >= 2 steps.
        n_rise = int(rng.uniform(0.13, 0.23) * steps_per_breath)
        n_plateau = int(rng.uniform(0.10, 0.28) * steps_per_breath)
        n_decay = int(rng.uniform(0.22, 0.42) * steps_per_breath)
        n_hold = steps_per_breath - n_rise - n_plateau - n_decay
        k = np.arange(steps_per_breath)
        p = np.empty(steps_per_breath)
        p[:n_rise] = peep + (amplitude - peep) * ((k[:n_rise] + 1) / n_rise) ** shape
        p[n_rise : n_rise + n_plateau] = amplitude + rng.normal(0.0, 0.15, n_plateau)
        d = k[: n_decay + n_hold]
        p[n_rise + n_plateau :] = peep + (amplitude - peep) * np.exp(
            -(d + 1) / decay_steps_scale
        )
        v = np.zeros(steps_per_breath)
        v[n_rise + n_plateau : n_rise + n_plateau + n_decay] = 1.0
        lo = b * steps_per_breath
        pressure[lo : lo + steps_per_breath] = p
        valve[lo : lo + steps_per_breath] = v
    pressure += rng.normal(0.0, 0.1, pressure.shape)
    np.clip(pressure, 0.0, 40.0, out=pressure)
    return LabeledSeries(
        t=_time_grid(pressure.shape[0], stepsize),
        u=pressure[:, None],
        y=valve[:, None],
        stepsize=stepsize,
        washout_steps=washout_steps,
        metadata={"task": "ventilator_synthetic", "n_breaths": n_breaths},
    )


def pressure_to_input(
    series: LabeledSeries,
    channel: PressureChannelParams,
    input_scale: float = 1.0,
) -> LabeledSeries:
    """Convert a pressure series (mbar) to streaming-current drive voltages.

    u_new = input_scale * I_p(delta_p) with I_p in nA, so an ``input_scale``
    in V/nA yields volts. Exactly linear and stateless.
    """
    current_na = (
        attach_pressure_input(channel, series.u * MBAR_TO_PA) * AMPERE_TO_NANOAMPERE
    )
    return replace(
        series,
        u=input_scale * current_na,
        metadata={**series.metadata, "input": "streaming_current", "input_scale_V_per_nA": input_scale},
    )


def shift_targets(series: LabeledSeries, horizon: int, channel: int = 0) -> LabeledSeries:
    """Re-target a series to predict its own input ``horizon`` steps ahead.

    y[k] = u[k + horizon, channel]; the last ``horizon`` rows are dropped.
    """
    if horizon < 1:
        raise ConstructionError(f"horizon must be >= 1, got {horizon!r}")
    if not (0 <= channel < series.n_inputs):
        raise ConstructionError(f"channel {channel!r} out of range for K={series.n_inputs}")
    n = series.length - horizon
    if n <= series.washout_steps:
        raise ConstructionError(
            f"horizon {horizon} leaves {n} rows, inside the washout {series.washout_steps}"
        )
    return LabeledSeries(
        t=series.t[:n],
        u=series.u[:n],
        y=series.u[horizon : horizon + n, channel : channel + 1],
        stepsize=series.stepsize,
        washout_steps=series.washout_steps,
        metadata={**series.metadata, "target": f"input+{horizon}"},
    )
