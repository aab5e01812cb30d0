"""Physical-circuit formulation of the memristor reservoir.

Instead of an abstract state vector, every node is a real two-terminal
channel with a dimensional conductance g_i (S). Node i's terminals are
driven by currents measured at the other channels and by the external
input:

    V_i,top    = sum over j with W_ij > 0 of W_ij * (I_j/I_j0 - 1)/a  +  positive-input part
    V_i,bottom = the same sums over the negative weights, with |W_ij|
    V_i        = V_i,top - V_i,bottom

so a current ratio I_j/I_j0 plays the role of the dimensionless node value.
Conductances then relax one Euler step toward g_inf(V_i). With terminals
sampling currents at the end of each step, the dimensionless trajectory
(g - g0) / (a g0) reproduces the matrix-form reservoir update exactly, up
to floating-point rounding. This is the wiring a lab bench would use, and
the equivalence is what certifies the matrix simulation as physical.

The module also provides the pressure-driven input stage: a cylindrical
charged channel converts an applied pressure difference into a streaming
current, which is how mechanical signals enter the network.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConstructionError, IntegrationError, PhysicsDomainError
from .memristor import (
    ChannelParams,
    equilibrium_conductance,
    length_from_timescale,
    timescale_from_length,
)
from .reservoir import ReservoirWeights

#: Terminal voltages smaller than this (in V) are treated as unmeasurable:
#: the current ratio degenerates to 0/0 and the exact conductance ratio is
#: used instead.
VOLTAGE_GUARD = 1e-9


@dataclass(frozen=True)
class PressureChannelParams:
    """Cylindrical streaming-current channel (the pressure input stage)."""

    radius: float
    length: float
    surface_potential: float
    viscosity: float
    permittivity: float

    def __post_init__(self):
        if self.radius <= 0.0 or self.length <= 0.0:
            raise ConstructionError(
                f"radius and length must be positive, got {self.radius!r}, {self.length!r}"
            )
        if self.viscosity <= 0.0 or self.permittivity <= 0.0:
            raise ConstructionError("viscosity and permittivity must be positive")

    @classmethod
    def from_lab_units(
        cls,
        radius_um: float = 25.0,
        length_um: float = 200.0,
        surface_potential_mV: float = -40.0,
        viscosity_mPa_s: float = 1.01,
        permittivity_nF_per_m: float = 0.71,
    ) -> "PressureChannelParams":
        return cls(
            radius=radius_um * 1e-6,
            length=length_um * 1e-6,
            surface_potential=surface_potential_mV * 1e-3,
            viscosity=viscosity_mPa_s * 1e-3,
            permittivity=permittivity_nF_per_m * 1e-9,
        )


def attach_pressure_input(channel: PressureChannelParams, delta_p):
    """Streaming current I_p = pi R^2 (eps psi_0 / eta) dP / L, in A.

    ``delta_p`` is the applied pressure difference in Pa (scalar or array).
    Linear in the pressure; zero pressure gives exactly zero current.
    """
    delta_p = np.asarray(delta_p, dtype=float)
    if not np.all(np.isfinite(delta_p)):
        raise PhysicsDomainError("pressure input contains non-finite values")
    factor = (
        math.pi
        * channel.radius**2
        * channel.permittivity
        * channel.surface_potential
        / (channel.viscosity * channel.length)
    )
    out = factor * delta_p
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ChannelBank:
    """Per-node dimensional constants of the assembled circuit."""

    g0: np.ndarray
    tau: np.ndarray

    def __post_init__(self):
        g0 = np.atleast_1d(np.asarray(self.g0, dtype=float))
        tau = np.atleast_1d(np.asarray(self.tau, dtype=float))
        object.__setattr__(self, "g0", g0)
        object.__setattr__(self, "tau", tau)
        if g0.shape != tau.shape or g0.ndim != 1:
            raise ConstructionError(
                f"bank needs matching 1-d g0/tau, got {g0.shape} and {tau.shape}"
            )
        if np.any(g0 <= 0.0) or np.any(tau <= 0.0):
            raise ConstructionError("equilibrium conductances and timescales must be positive")

    @property
    def n(self) -> int:
        return self.g0.shape[0]

    @classmethod
    def from_reservoir(cls, params: ChannelParams, weights: ReservoirWeights) -> "ChannelBank":
        """Realize reservoir timescales c_i as channel lengths.

        c_i = a * tau_i fixes tau_i, and tau = L^2/(12 D) fixes each node's
        length; the equilibrium conductance then follows from that length.
        """
        tau = weights.timescales / weights.leak_rate
        g0 = np.empty(weights.n)
        for i, tau_i in enumerate(tau):
            length = length_from_timescale(float(tau_i), params.diffusion)
            g0[i] = equilibrium_conductance(params.with_length(length))
        return cls(g0=g0, tau=tau)

    @classmethod
    def uniform(cls, params: ChannelParams, n: int) -> "ChannelBank":
        """n identical channels with the geometry of ``params``."""
        g0 = equilibrium_conductance(params)
        tau = timescale_from_length(params.length, params.diffusion)
        return cls(g0=np.full(n, g0), tau=np.full(n, tau))


@dataclass(frozen=True)
class CircuitState:
    """Snapshot after one step: conductances plus the step's terminal record.

    ``i`` and ``i0`` are the currents sampled at the end of the step, so
    i = g * v and i0 = g0 * v hold exactly at every recorded state, and
    v = v_t - v_b by construction.
    """

    g: np.ndarray
    v: np.ndarray
    i: np.ndarray
    i0: np.ndarray
    v_t: np.ndarray
    v_b: np.ndarray


def initial_circuit_state(bank: ChannelBank) -> CircuitState:
    """All channels at equilibrium, nothing measured yet."""
    zeros = np.zeros(bank.n)
    return CircuitState(
        g=bank.g0.copy(), v=zeros, i=zeros, i0=zeros, v_t=zeros, v_b=zeros
    )


def _node_values(
    g: np.ndarray,
    bank: ChannelBank,
    leak_rate: float,
    mode: str,
    state: "CircuitState | None",
    guard: float,
) -> np.ndarray:
    """Dimensionless node values (ratio - 1)/a from conductances or currents."""
    if mode == "exact":
        ratio = g / bank.g0
    elif mode == "measured":
        ratio = g / bank.g0
        if state is not None:
            measurable = np.abs(state.v) > guard
            with np.errstate(divide="ignore", invalid="ignore"):
                measured = np.where(measurable, state.i / np.where(measurable, state.i0, 1.0), ratio)
            ratio = measured
    else:
        raise ConstructionError(f"mode must be 'exact' or 'measured', got {mode!r}")
    return (ratio - 1.0) / leak_rate


def terminal_voltages(
    g: np.ndarray,
    weights: ReservoirWeights,
    u,
    bank: ChannelBank,
    mode: str = "exact",
    state: "CircuitState | None" = None,
    guard: float = VOLTAGE_GUARD,
) -> tuple[np.ndarray, np.ndarray]:
    """Top and bottom terminal voltages of every node.

    Positive weights wire into the top terminal, negative weights (their
    magnitudes) into the bottom one. In "measured" mode the node values come
    from the recorded currents of ``state`` wherever the previous voltage was
    measurable (|v| above ``guard``), falling back to the exact conductance
    ratio elsewhere; with no prior state everything falls back.
    """
    g = np.asarray(g, dtype=float)
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if not np.all(np.isfinite(g)) or not np.all(np.isfinite(u)):
        raise PhysicsDomainError("terminal voltages need finite conductances and inputs")
    values = _node_values(g, bank, weights.leak_rate, mode, state, guard)
    w = weights.w
    w_in = weights.w_in
    w_pos = np.where(w > 0.0, w, 0.0)
    w_neg = np.where(w < 0.0, -w, 0.0)
    win_pos = np.where(w_in > 0.0, w_in, 0.0)
    win_neg = np.where(w_in < 0.0, -w_in, 0.0)
    v_t = w_pos @ values + win_pos @ u
    v_b = w_neg @ values + win_neg @ u
    return v_t, v_b


def circuit_step(
    state: CircuitState,
    weights: ReservoirWeights,
    bank: ChannelBank,
    u,
    activation,
    mode: str = "exact",
) -> CircuitState:
    """Advance the circuit one network step of length ``weights.stepsize``.

    Terminal voltages are formed from the current node values, each channel
    relaxes one Euler step toward g_inf(V), and the terminals then sample
    the currents through the settled conductances.
    """
    v_t, v_b = terminal_voltages(state.g, weights, u, bank, mode=mode, state=state)
    v = v_t - v_b
    g_target = bank.g0 * (1.0 + activation(v))
    g_new = state.g + weights.stepsize * (g_target - state.g) / bank.tau
    if not np.all(np.isfinite(g_new)):
        raise IntegrationError("circuit conductances left the finite range")
    if np.any(g_new <= 0.0):
        raise IntegrationError(
            "a channel conductance became non-positive; reduce the stepsize"
        )
    return CircuitState(g=g_new, v=v, i=g_new * v, i0=bank.g0 * v, v_t=v_t, v_b=v_b)


def run_circuit(
    state: CircuitState,
    weights: ReservoirWeights,
    bank: ChannelBank,
    inputs: np.ndarray,
    activation,
    mode: str = "exact",
) -> list[CircuitState]:
    """Step the circuit over an input sequence, recording every state."""
    inputs = np.asarray(inputs, dtype=float)
    if inputs.ndim == 1:
        inputs = inputs[:, None]
    history = []
    for t in range(inputs.shape[0]):
        state = circuit_step(state, weights, bank, inputs[t], activation, mode=mode)
        history.append(state)
    return history


def dimensionless_trajectory(
    history: list[CircuitState], bank: ChannelBank, leak_rate: float
) -> np.ndarray:
    """(T, N) array of (g - g0) / (a g0), comparable to reservoir states."""
    return np.array([(s.g - bank.g0) / (leak_rate * bank.g0) for s in history])


def write_circuit_trace(path, history: list[CircuitState], edges=None) -> None:
    """Per-step CSV of (step, V_i, g_i, I_i) for the selected edges.

    ``edges`` defaults to every node. Columns: step, then v_<i>, g_<i>, i_<i>
    per selected edge, in the given order.
    """
    if not history:
        raise ConstructionError("cannot write an empty circuit trace")
    n = history[0].g.shape[0]
    if edges is None:
        edges = list(range(n))
    edges = [int(e) for e in edges]
    for e in edges:
        if not (0 <= e < n):
            raise ConstructionError(f"edge index {e} out of range for {n} nodes")
    header = ["step"]
    for e in edges:
        header += [f"v_{e}", f"g_{e}", f"i_{e}"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for t, s in enumerate(history):
            row = [t]
            for e in edges:
                row += [repr(float(s.v[e])), repr(float(s.g[e])), repr(float(s.i[e]))]
            writer.writerow(row)
