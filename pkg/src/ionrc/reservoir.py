"""Leaky-integrator reservoir built from memristive nodes.

State update (elementwise over nodes, timescales may differ per node):

    x(n+1) = (1 - a*delta/c) * x(n) + (delta/c) * f(W_in u(n) + W x(n))

where ``a`` is the leak rate, ``delta`` the network stepsize, ``c`` the node
timescale vector and ``f`` the activation (tanh or a tabulated channel
profile). With a scalar ``c`` this is the classic leaky ESN; with per-node
timescales drawn from a clamped normal it becomes a band-pass network whose
nodes remember over different horizons.

Reservoir state is a plain float64 vector; histories are (T, N) arrays.

Weight construction follows a three-step recipe: draw a nonnegative random
matrix, rescale it so the echo-state matrix M = (delta/c)|W| + (1 - a*delta/c) I
has a requested spectral radius below one, then flip the sign of a random
fraction of the entries (flips leave |W| and hence M untouched). A spectral
radius of M below one certifies the echo-state property. An alternative mode
rescales rho(W) of the signed matrix directly; it matches common ESN practice
but offers no certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstructionError, DivergenceError, NumericalError

#: Tolerance used when validating a*delta/c <= 1.
_LEAK_TOL = 1e-12


@dataclass(frozen=True)
class ReservoirWeights:
    """Connectivity and update constants of one reservoir.

    ``timescales`` always stores one entry per node; a uniform network simply
    repeats the same value. ``input_scale`` is the factor already multiplied
    into ``w_in`` (volts per unit input; volts per nA for current inputs).
    """

    w: np.ndarray
    w_in: np.ndarray
    leak_rate: float
    stepsize: float
    timescales: np.ndarray
    input_scale: float
    sparsity: float

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        w_in = np.asarray(self.w_in, dtype=float)
        c = np.atleast_1d(np.asarray(self.timescales, dtype=float))
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "w_in", w_in)
        object.__setattr__(self, "timescales", c)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ConstructionError(f"W must be square, got shape {w.shape}")
        n = w.shape[0]
        if w_in.ndim != 2 or w_in.shape[0] != n:
            raise ConstructionError(
                f"W_in must be (N, K) with N = {n}, got shape {w_in.shape}"
            )
        if c.shape != (n,):
            raise ConstructionError(
                f"timescales must have one entry per node ({n}), got shape {c.shape}"
            )
        if not (0.0 < self.leak_rate <= 1.0):
            raise ConstructionError(f"leak rate must be in (0, 1], got {self.leak_rate!r}")
        if self.stepsize <= 0.0:
            raise ConstructionError(f"stepsize must be positive, got {self.stepsize!r}")
        if np.any(c <= 0.0):
            raise ConstructionError("all timescales must be positive")
        worst = float(np.max(self.leak_rate * self.stepsize / c))
        if worst > 1.0 + _LEAK_TOL:
            raise ConstructionError(
                f"a*delta/c = {worst:.6g} exceeds 1; decrease the stepsize or the "
                "leak rate, or increase the timescales"
            )

    @property
    def n(self) -> int:
        return self.w.shape[0]

    @property
    def k(self) -> int:
        return self.w_in.shape[1]

    def decay(self) -> np.ndarray:
        """Per-node memory factor (1 - a*delta/c)."""
        return 1.0 - self.leak_rate * self.stepsize / self.timescales

    def gain(self) -> np.ndarray:
        """Per-node drive factor delta/c."""
        return self.stepsize / self.timescales


@dataclass(frozen=True)
class EspReport:
    """Echo-state certificate: spectral radius of M and whether it is < 1."""

    spectral_radius_m: float
    satisfied: bool


def spectral_radius(matrix: np.ndarray) -> float:
    """Largest eigenvalue magnitude, via the dense eigensolver."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ConstructionError(f"spectral radius needs a square matrix, got {matrix.shape}")
    try:
        eigenvalues = np.linalg.eigvals(matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue computation failed: {exc}") from exc
    return float(np.max(np.abs(eigenvalues)))


def esp_matrix(
    w: np.ndarray, leak_rate: float, stepsize: float, timescales: np.ndarray | float
) -> np.ndarray:
    """M = (delta/c_min)|W| + (1 - a*delta/c_min) I.

    For heterogeneous timescales the smallest one is used throughout; it
    maximizes the |W| part, which is the part construction rescales.
    """
    c_min = float(np.min(timescales))
    n = w.shape[0]
    return (stepsize / c_min) * np.abs(w) + (1.0 - leak_rate * stepsize / c_min) * np.eye(n)


def esp_check(weights: ReservoirWeights) -> EspReport:
    """Echo-state certificate for an assembled weight set."""
    rho = spectral_radius(
        esp_matrix(weights.w, weights.leak_rate, weights.stepsize, weights.timescales)
    )
    return EspReport(spectral_radius_m=rho, satisfied=bool(rho < 1.0))


def scale_to_esp_radius(
    w_nonneg: np.ndarray,
    leak_rate: float,
    stepsize: float,
    timescales: np.ndarray | float,
    target_radius: float,
) -> np.ndarray:
    """Rescale a nonnegative matrix so rho(M) equals ``target_radius``.

    The identity part of M contributes 1 - a*delta/c_min on its own, so the
    target must exceed it; and a nilpotent or zero matrix cannot be scaled up
    to reach any target.
    """
    c_min = float(np.min(timescales))
    identity_part = 1.0 - leak_rate * stepsize / c_min
    if not (0.0 < target_radius < 1.0):
        raise ConstructionError(f"target radius must be in (0, 1), got {target_radius!r}")
    if target_radius <= identity_part + 1e-15:
        raise ConstructionError(
            f"target radius {target_radius:.6g} is not reachable: the identity part "
            f"of M alone contributes {identity_part:.6g}; use rho(W) targeting or "
            "change a, delta or c"
        )
    rho_w = spectral_radius(w_nonneg)
    if rho_w <= 0.0:
        raise ConstructionError(
            "cannot rescale: the sparsified matrix has zero spectral radius"
        )
    scale = (target_radius - identity_part) * c_min / (stepsize * rho_w)
    return w_nonneg * scale


def sample_timescales(
    n: int, mean: float, std: float, seed: "int | np.random.SeedSequence | np.random.Generator"
) -> np.ndarray:
    """Per-node timescales: normal(mean, std) clamped from below at mean / 5.

    The clamp keeps every node's timescale positive and bounds a*delta/c; with
    broad std a large fraction of nodes sits exactly at the clamp.
    """
    if n < 1:
        raise ConstructionError(f"need at least one node, got {n!r}")
    if mean <= 0.0 or std < 0.0:
        raise ConstructionError(f"need mean > 0 and std >= 0, got {mean!r}, {std!r}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    draws = rng.normal(mean, std, size=n)
    return np.maximum(draws, mean / 5.0)


def generate_weights(
    n: int,
    k: int,
    sparsity: float,
    target_radius: float,
    leak_rate: float,
    stepsize: float,
    timescales: "float | np.ndarray",
    input_scale: float = 1.0,
    sign_flip_fraction: float = 0.5,
    seed: "int | np.random.SeedSequence | None" = None,
    radius_mode: str = "esp",
) -> ReservoirWeights:
    """Draw a reservoir weight set.

    Steps, in a fixed RNG order so a seed pins the result: (1) nonnegative
    entries uniform in [0, 1) with an exact count of them zeroed to reach
    ``sparsity``; (2) rescaling, either to rho(M) = target (mode "esp",
    certificate guaranteed) or to rho(W) = target on the signed matrix (mode
    "raw", no certificate); (3) each nonzero entry sign-flipped independently
    with probability ``sign_flip_fraction``; (4) input weights uniform in
    [-1, 1] times ``input_scale``.
    """
    if n < 1 or k < 1:
        raise ConstructionError(f"need n >= 1 and k >= 1, got {n!r}, {k!r}")
    if not (0.0 <= sparsity < 1.0):
        raise ConstructionError(f"sparsity must be in [0, 1), got {sparsity!r}")
    if not (0.0 <= sign_flip_fraction <= 1.0):
        raise ConstructionError(
            f"sign flip fraction must be in [0, 1], got {sign_flip_fraction!r}"
        )
    if radius_mode not in ("esp", "raw"):
        raise ConstructionError(f"radius_mode must be 'esp' or 'raw', got {radius_mode!r}")
    c = np.atleast_1d(np.asarray(timescales, dtype=float))
    if c.size == 1:
        c = np.full(n, float(c[0]))
    rng = np.random.default_rng(seed)

    w = rng.uniform(0.0, 1.0, size=(n, n))
    n_zero = int(round(sparsity * n * n))
    if n_zero > 0:
        zero_at = rng.choice(n * n, size=n_zero, replace=False)
        w.flat[zero_at] = 0.0

    flips = rng.uniform(0.0, 1.0, size=(n, n)) < sign_flip_fraction
    flips &= w != 0.0

    if radius_mode == "esp":
        w = scale_to_esp_radius(w, leak_rate, stepsize, c, target_radius)
        w[flips] *= -1.0
    else:
        w[flips] *= -1.0
        if not (0.0 < target_radius):
            raise ConstructionError(f"target radius must be positive, got {target_radius!r}")
        rho_w = spectral_radius(w)
        if rho_w <= 0.0:
            raise ConstructionError(
                "cannot rescale: the signed matrix has zero spectral radius"
            )
        w *= target_radius / rho_w

    w_in = input_scale * rng.uniform(-1.0, 1.0, size=(n, k))

    weights = ReservoirWeights(
        w=w,
        w_in=w_in,
        leak_rate=leak_rate,
        stepsize=stepsize,
        timescales=c,
        input_scale=input_scale,
        sparsity=sparsity,
    )
    if radius_mode == "esp":
        report = esp_check(weights)
        if not report.satisfied:
            raise ConstructionError(
                f"echo-state certificate failed after construction "
                f"(rho(M) = {report.spectral_radius_m!r}); this should not happen"
            )
    return weights


def step(x: np.ndarray, weights: ReservoirWeights, u, activation) -> np.ndarray:
    """One synchronous update of the full network state."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    drive = weights.w_in @ u + weights.w @ x
    return weights.decay() * x + weights.gain() * activation(drive)


def run(
    x0: np.ndarray,
    weights: ReservoirWeights,
    inputs: np.ndarray,
    activation,
) -> np.ndarray:
    """Drive the reservoir over an input sequence, collecting states.

    ``inputs`` is (T, K); the returned array is (T, N) where row ``t`` is the
    state after consuming ``inputs[t]``.
    """
    inputs = np.asarray(inputs, dtype=float)
    if inputs.ndim == 1:
        inputs = inputs[:, None]
    if inputs.shape[1] != weights.k:
        raise ConstructionError(
            f"inputs have {inputs.shape[1]} channels, weights expect {weights.k}"
        )
    x = np.asarray(x0, dtype=float)
    if x.shape != (weights.n,):
        raise ConstructionError(f"state must have shape ({weights.n},), got {x.shape}")
    decay = weights.decay()
    gain = weights.gain()
    w = weights.w
    w_in = weights.w_in
    states = np.empty((inputs.shape[0], weights.n))
    for t in range(inputs.shape[0]):
        x = decay * x + gain * activation(w_in @ inputs[t] + w @ x)
        if not np.all(np.isfinite(x)):
            raise DivergenceError("reservoir state left the finite range", step=t)
        states[t] = x
    return states
