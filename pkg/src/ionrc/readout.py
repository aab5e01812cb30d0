"""Linear readout training, inference, and evaluation metrics.

The readout is a single linear map y = W_out x with no bias column, trained
by ridge regression over the post-washout state history:

    W_out = Y^T X (X^T X + lambda I)^-1

solved through a Cholesky factorization of the symmetric positive-definite
normal matrix. Inference runs either teacher-forced (true inputs supplied
every step) or free-running (the model's own one-step prediction fed back
as the next input).

Linear autoregressive baselines live here too: a plain order-p model uses
the last p input samples, and a subsampled variant spreads the same number
of coefficients over strided lags. Both fit by least squares without an
intercept, so their parameter count matches a width-p readout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import warnings

import numpy as np

from .errors import ConstructionError, NumericalError
from .reservoir import ReservoirWeights

#: Free-running outputs beyond this magnitude are flagged as divergence.
DIVERGENCE_LIMIT = 1e3


@dataclass(frozen=True)
class ReadoutModel:
    """Trained linear readout, W_out with shape (L, N)."""

    w_out: np.ndarray
    ridge_lambda: float

    def __post_init__(self):
        w = np.asarray(self.w_out, dtype=float)
        object.__setattr__(self, "w_out", w)
        if w.ndim != 2:
            raise ConstructionError(f"W_out must be 2-d (L, N), got shape {w.shape}")
        if self.ridge_lambda < 0.0:
            raise ConstructionError(f"ridge lambda must be >= 0, got {self.ridge_lambda!r}")


def train_ridge(
    states: np.ndarray,
    targets: np.ndarray,
    ridge_lambda: float,
    washout_steps: int = 0,
) -> ReadoutModel:
    """Fit W_out on the post-washout rows of a state history.

    ``states`` is (T, N), ``targets`` is (T, L) or (T,). Rows before
    ``washout_steps`` never influence the fit. Warns when the fit is
    underdetermined (fewer usable rows than states).
    """
    states = np.asarray(states, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if targets.ndim == 1:
        targets = targets[:, None]
    if states.ndim != 2 or targets.ndim != 2 or states.shape[0] != targets.shape[0]:
        raise ConstructionError(
            f"states {states.shape} and targets {targets.shape} must share rows"
        )
    if not (0 <= washout_steps < states.shape[0]):
        raise ConstructionError(
            f"washout {washout_steps!r} must leave at least one training row of "
            f"{states.shape[0]}"
        )
    if ridge_lambda < 0.0:
        raise ConstructionError(f"ridge lambda must be >= 0, got {ridge_lambda!r}")
    x = states[washout_steps:]
    y = targets[washout_steps:]
    n = x.shape[1]
    if x.shape[0] < n:
        warnings.warn(
            f"ridge fit is underdetermined: {x.shape[0]} rows for {n} states",
            stacklevel=2,
        )
    gram = x.T @ x + ridge_lambda * np.eye(n)
    try:
        chol = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            "normal matrix is not positive definite (rank-deficient states with "
            "lambda = 0?); increase the ridge regularization"
        ) from exc
    rhs = x.T @ y
    z = np.linalg.solve(chol, rhs)
    w_out_t = np.linalg.solve(chol.T, z)
    return ReadoutModel(w_out=w_out_t.T, ridge_lambda=float(ridge_lambda))


def predict_teacher_forced(
    model: ReadoutModel,
    x0: np.ndarray,
    weights: ReservoirWeights,
    inputs: np.ndarray,
    activation,
) -> tuple[np.ndarray, np.ndarray]:
    """Run the reservoir on true inputs and read out every step.

    Returns (outputs, states): outputs[t] = W_out @ state after inputs[t].
    The per-step arithmetic matches the free-running loop exactly, so
    injecting the teacher signal there reproduces these outputs bit for bit.
    """
    inputs = np.asarray(inputs, dtype=float)
    if inputs.ndim == 1:
        inputs = inputs[:, None]
    x = np.asarray(x0, dtype=float)
    decay = weights.decay()
    gain = weights.gain()
    outputs = np.empty((inputs.shape[0], model.w_out.shape[0]))
    states = np.empty((inputs.shape[0], weights.n))
    for t in range(inputs.shape[0]):
        x = decay * x + gain * activation(weights.w_in @ inputs[t] + weights.w @ x)
        states[t] = x
        outputs[t] = model.w_out @ x
    return outputs, states


@dataclass(frozen=True)
class FreeRunResult:
    """Free-running outputs plus a divergence flag.

    ``diverged_at`` is the output index at which |y| first exceeded the
    divergence limit (None when the run stayed bounded); outputs beyond that
    index are not produced.
    """

    outputs: np.ndarray
    diverged_at: int | None = None


def predict_free_running(
    model: ReadoutModel,
    x0: np.ndarray,
    weights: ReservoirWeights,
    n_steps: int,
    activation,
    teacher: np.ndarray | None = None,
    divergence_limit: float = DIVERGENCE_LIMIT,
) -> FreeRunResult:
    """Iterate the closed prediction loop for ``n_steps`` outputs.

    outputs[0] reads the supplied state before any feedback; afterwards each
    output (or the matching ``teacher`` row, when given) becomes the next
    input. Requires as many inputs as outputs (K == L).
    """
    if model.w_out.shape[0] != weights.k:
        raise ConstructionError(
            f"free running needs K == L, got K = {weights.k}, L = {model.w_out.shape[0]}"
        )
    if n_steps < 1:
        raise ConstructionError(f"need at least one step, got {n_steps!r}")
    if teacher is not None:
        teacher = np.asarray(teacher, dtype=float)
        if teacher.ndim == 1:
            teacher = teacher[:, None]
        if teacher.shape[0] < n_steps - 1:
            raise ConstructionError(
                f"teacher signal has {teacher.shape[0]} rows, need {n_steps - 1}"
            )
    x = np.asarray(x0, dtype=float)
    decay = weights.decay()
    gain = weights.gain()
    outputs = np.empty((n_steps, model.w_out.shape[0]))
    for t in range(n_steps):
        y = model.w_out @ x
        outputs[t] = y
        if not np.all(np.isfinite(y)) or np.any(np.abs(y) > divergence_limit):
            return FreeRunResult(outputs=outputs[: t + 1].copy(), diverged_at=t)
        if t == n_steps - 1:
            break
        u = teacher[t] if teacher is not None else y
        x = decay * x + gain * activation(weights.w_in @ u + weights.w @ x)
    return FreeRunResult(outputs=outputs, diverged_at=None)


def export_readout(model: ReadoutModel) -> dict:
    """JSON-ready form of a trained readout."""
    return {
        "shape": list(model.w_out.shape),
        "data": [float(v) for v in model.w_out.ravel()],
        "ridge_lambda": model.ridge_lambda,
    }


def import_readout(payload: dict) -> ReadoutModel:
    shape = tuple(payload["shape"])
    w = np.array(payload["data"], dtype=float).reshape(shape)
    return ReadoutModel(w_out=w, ridge_lambda=float(payload.get("ridge_lambda", 0.0)))


# ---------------------------------------------------------------------------
# metrics


@dataclass(frozen=True)
class Metrics:
    """Evaluation summary; fields not meaningful for a task stay None."""

    rmse: float | None = None
    nrmse_84: float | None = None
    accuracy: float | None = None
    sigma2_input: float | None = None

    def __post_init__(self):
        for name in ("rmse", "nrmse_84", "sigma2_input"):
            v = getattr(self, name)
            if v is not None and v < 0.0:
                raise ConstructionError(f"{name} must be >= 0, got {v!r}")
        if self.accuracy is not None and not (0.0 <= self.accuracy <= 1.0):
            raise ConstructionError(f"accuracy must lie in [0, 1], got {self.accuracy!r}")

    def as_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


def rmse(predictions: np.ndarray, truths: np.ndarray) -> float:
    """Root-mean-square error over all elements."""
    predictions = np.asarray(predictions, dtype=float)
    truths = np.asarray(truths, dtype=float)
    if predictions.shape != truths.shape:
        raise ConstructionError(
            f"prediction shape {predictions.shape} != truth shape {truths.shape}"
        )
    return float(np.sqrt(np.mean((predictions - truths) ** 2)))


def nrmse_horizon(predictions: np.ndarray, truths: np.ndarray, sigma2: float) -> float:
    """sqrt( sum (p_i - t_i)^2 / (sigma2 T) ) over per-run horizon values."""
    predictions = np.asarray(predictions, dtype=float).ravel()
    truths = np.asarray(truths, dtype=float).ravel()
    if predictions.shape != truths.shape:
        raise ConstructionError("predictions and truths must have equal length")
    if sigma2 <= 0.0:
        raise ConstructionError(f"sigma^2 must be positive, got {sigma2!r}")
    t = predictions.size
    return float(np.sqrt(np.sum((predictions - truths) ** 2) / (sigma2 * t)))


def classify(outputs: np.ndarray, threshold: float = 0.5) -> np.ndarray:
    """Binary labels from real-valued outputs."""
    return (np.asarray(outputs, dtype=float) >= threshold).astype(int)


def accuracy(labels: np.ndarray, truths: np.ndarray) -> float:
    labels = np.asarray(labels).ravel()
    truths = np.asarray(truths).ravel()
    if labels.shape != truths.shape:
        raise ConstructionError("labels and truths must have equal length")
    return float(np.mean(labels == truths))


# ---------------------------------------------------------------------------
# autoregressive baselines


@dataclass(frozen=True)
class ARReadout:
    """Least-squares linear model on lagged input samples, no intercept.

    ``lags`` are offsets into the past relative to the current step; lag 0 is
    the current sample.
    """

    coefficients: np.ndarray
    lags: np.ndarray = field(default_factory=lambda: np.array([0]))

    @property
    def max_lag(self) -> int:
        return int(np.max(self.lags))

    def predict(self, series: np.ndarray) -> np.ndarray:
        """Predictions aligned with the series; the first max_lag entries are NaN."""
        series = np.asarray(series, dtype=float).ravel()
        out = np.full(series.shape[0], np.nan)
        m = self.max_lag
        if series.shape[0] <= m:
            return out
        cols = [series[m - lag : series.shape[0] - lag] for lag in self.lags]
        out[m:] = np.column_stack(cols) @ self.coefficients
        return out


def ar_lags(order: int, subsample_stride: int | None = None) -> np.ndarray:
    """Lag set of the baseline: {0..p-1} plain, {m, 2m, ..., pm} subsampled."""
    if order < 1:
        raise ConstructionError(f"AR order must be >= 1, got {order!r}")
    if subsample_stride is None:
        return np.arange(order)
    if subsample_stride < 1:
        raise ConstructionError(f"subsample stride must be >= 1, got {subsample_stride!r}")
    return subsample_stride * np.arange(1, order + 1)


def fit_ar(
    series: np.ndarray,
    targets: np.ndarray,
    order: int,
    subsample_stride: int | None = None,
    washout_steps: int = 0,
) -> ARReadout:
    """Fit the baseline on (series, targets) pairs aligned by index.

    Rows within the washout or without a full lag window are dropped.
    """
    series = np.asarray(series, dtype=float).ravel()
    targets = np.asarray(targets, dtype=float).ravel()
    if series.shape != targets.shape:
        raise ConstructionError("series and targets must have equal length")
    lags = ar_lags(order, subsample_stride)
    m = int(np.max(lags))
    first = max(m, washout_steps)
    if series.shape[0] - first < order:
        raise ConstructionError(
            f"series too short: {series.shape[0]} samples for max lag {m} "
            f"and washout {washout_steps}"
        )
    design = np.column_stack(
        [series[first - lag : series.shape[0] - lag] for lag in lags]
    )
    y = targets[first:]
    coef, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < lags.size:
        raise NumericalError(
            f"AR design matrix is rank-deficient (rank {rank} of {lags.size})"
        )
    return ARReadout(coefficients=coef, lags=lags)
