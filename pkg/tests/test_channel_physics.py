"""Conductance physics of the conical channel.

Frozen reference numbers were derived independently (hand evaluation of the
closed-form expressions, brute-force midpoint quadrature for the integral)
before being pinned here.
"""

import math

import numpy as np
import pytest

from ionrc import memristor as mm
from ionrc.errors import ConstructionError, IntegrationError, PhysicsDomainError

# Hand-derived values for the default channel (169 um cone, 0.1 mM, 293.15 K).
PECLET_1V = 28.118811881188122
G0_SIEMENS = 1.4200108815631882e-13
CONTRAST = -2.1039327470402527
TAU_S = 2.380083333333333

ACTIVATION_POINTS = {
    -2.0: -0.5527549260555078,
    -1.0: -0.4967878773946768,
    -0.5: -0.372362547845666,
    0.5: 0.4972103246526973,
    1.0: 0.8050092710888959,
    2.0: 1.0732409933201144,
}


def test_lab_unit_conversion_to_si(channel):
    assert channel.tip_radius == pytest.approx(50e-9, rel=1e-15)
    assert channel.base_radius == pytest.approx(200e-9, rel=1e-15)
    assert channel.length == pytest.approx(169e-6, rel=1e-15)
    # -0.0015 e/nm^2 in C/m^2
    assert channel.surface_charge == pytest.approx(-0.0015 * 1.602176634e-19 * 1e18, rel=1e-15)
    assert channel.surface_potential == pytest.approx(-0.010, rel=1e-15)
    # 0.1 mM = 0.1 mol/m^3 of each species
    assert channel.bulk_density == pytest.approx(0.1 * 6.02214076e23, rel=1e-15)
    assert channel.diffusion == pytest.approx(1e-9, rel=1e-15)
    assert channel.thermal_energy == pytest.approx(1.380649e-23 * 293.15, rel=1e-15)


def test_channel_params_validation():
    with pytest.raises(ConstructionError):
        mm.ChannelParams.from_lab_units(base_radius_nm=50.0, tip_radius_nm=50.0)
    with pytest.raises(ConstructionError):
        mm.ChannelParams.from_lab_units(tip_radius_nm=-1.0)
    with pytest.raises(ConstructionError):
        mm.ChannelParams.from_lab_units(length_um=0.0)
    with pytest.raises(ConstructionError):
        mm.ChannelParams.from_lab_units(concentration_mM=0.0)
    with pytest.warns(UserWarning, match="slender"):
        mm.ChannelParams.from_lab_units(length_um=0.001)


def test_peclet_frozen_value_and_linearity(channel):
    assert mm.peclet(channel, 1.0) == pytest.approx(PECLET_1V, rel=1e-12)
    assert mm.peclet(channel, 0.0) == 0.0
    assert mm.peclet(channel, 2.0) == pytest.approx(2.0 * mm.peclet(channel, 1.0), rel=1e-14)
    assert mm.peclet(channel, -1.0) == pytest.approx(-PECLET_1V, rel=1e-12)


def test_flow_direction_for_negative_zeta(channel):
    # negative wall potential: positive voltage drives flow in +Q
    assert mm.volumetric_flow(channel, 1.0) > 0.0
    assert mm.volumetric_flow(channel, -1.0) < 0.0
    assert mm.volumetric_flow(channel, 0.0) == 0.0


def test_peclet_independent_of_length(channel):
    longer = channel.with_length(channel.length * 3.0)
    assert mm.peclet(longer, 0.7) == pytest.approx(mm.peclet(channel, 0.7), rel=1e-12)


def test_equilibrium_conductance_closed_form(channel):
    e = 1.602176634e-19
    rho = 0.1 * 6.02214076e23
    kt = 1.380649e-23 * 293.15
    by_hand = (math.pi * 50e-9 * 200e-9 / 169e-6) * (2.0 * rho * e**2 * 1e-9 / kt)
    g0 = mm.equilibrium_conductance(channel)
    assert g0 == pytest.approx(by_hand, rel=1e-12)
    assert g0 == pytest.approx(G0_SIEMENS, rel=1e-12)
    # inversely proportional to length
    assert mm.equilibrium_conductance(channel.with_length(2 * channel.length)) == pytest.approx(
        g0 / 2.0, rel=1e-12
    )


def test_conductance_contrast_frozen_value(channel):
    dg = mm.conductance_contrast(channel)
    assert dg == pytest.approx(CONTRAST, rel=1e-12)
    assert dg < 0.0


def test_timescale_and_length_roundtrip(channel):
    tau = mm.timescale_from_length(channel.length, channel.diffusion)
    assert tau == pytest.approx(TAU_S, rel=1e-12)
    assert tau == channel.length**2 / (12.0 * channel.diffusion)
    back = mm.length_from_timescale(tau, channel.diffusion)
    assert back == pytest.approx(channel.length, rel=1e-12)
    with pytest.raises(PhysicsDomainError):
        mm.timescale_from_length(0.0, channel.diffusion)
    with pytest.raises(PhysicsDomainError):
        mm.length_from_timescale(1.0, -1.0)


def test_steady_conductance_is_exactly_one_at_rest(channel):
    assert mm.steady_conductance(channel, 0.0) == 1.0


def test_branch_switch_is_continuous(channel):
    # The analytic limit takes over when |Pe| R_t/R_b drops below the switch;
    # the two branches must agree there to well under 1e-9.
    v_switch = 1e-12 * (channel.base_radius / channel.tip_radius) / mm.peclet(channel, 1.0)
    below = mm.steady_conductance(channel, 0.99 * v_switch)
    above = mm.steady_conductance(channel, 1.01 * v_switch)
    assert below == 1.0
    assert abs(above - below) < 1e-9


def _midpoint_oracle(params, voltage, panels=1_000_000):
    """Independent midpoint-rule evaluation of the conductance ratio."""
    pe = -mm.peclet(params, voltage)
    rt_rb = params.tip_radius / params.base_radius
    s = (np.arange(panels) + 0.5) / panels
    radius_frac = 1.0 - s * (params.delta_radius / params.base_radius)
    bracket = s * rt_rb / radius_frac - np.expm1(pe * s * rt_rb**2 / radius_frac) / np.expm1(
        pe * rt_rb
    )
    return 1.0 + mm.conductance_contrast(params) * float(np.mean(bracket))


@pytest.mark.parametrize("voltage", [-1.0, -0.55, -0.1, 0.35, 1.0])
def test_quadrature_matches_brute_force_midpoint(channel, voltage):
    got = mm.steady_conductance(channel, voltage)
    want = _midpoint_oracle(channel, voltage)
    assert got == pytest.approx(want, rel=1e-8)


def test_quadrature_panel_doubling_converged(channel):
    for v in (-1.0, -0.5, 0.5, 1.0):
        a = mm.steady_conductance(channel, v, panels=1024)
        b = mm.steady_conductance(channel, v, panels=2048)
        assert abs(a - b) / abs(b) < 1e-10


def test_quadrature_rejects_bad_panel_count(channel):
    with pytest.raises(PhysicsDomainError):
        mm.steady_conductance(channel, 0.5, panels=0)


def test_activation_frozen_points(channel):
    for v, want in ACTIVATION_POINTS.items():
        assert mm.dimensionless_activation(channel, v) == pytest.approx(want, rel=1e-10)


def test_activation_tracks_tanh(channel):
    assert mm.dimensionless_activation(channel, 0.0) == 0.0
    for v in (-1.0, -0.5, 0.5, 1.0):
        got = mm.dimensionless_activation(channel, v)
        assert abs(got - math.tanh(v)) <= 0.35
        assert got * v > 0.0  # odd-like: same sign as the voltage


def test_activation_monotone_on_two_volt_window(channel):
    grid = np.linspace(-2.0, 2.0, 401)
    values = [mm.dimensionless_activation(channel, float(v)) for v in grid]
    assert np.all(np.diff(values) > 0.0)


def test_voltage_domain_guards(channel):
    with pytest.raises(PhysicsDomainError):
        mm.steady_conductance(channel, 10.5)
    with pytest.raises(PhysicsDomainError):
        mm.steady_conductance(channel, float("nan"))
    with pytest.raises(PhysicsDomainError):
        mm.steady_conductance(channel, float("inf"))


def test_polarization_exponent_overflow_guard(channel):
    with pytest.raises(PhysicsDomainError, match="exceeds"):
        mm._polarization_integral(1e4, channel, panels=8)


def test_profile_interpolates_the_quadrature(channel, profile):
    for v in (-1.23, -0.41, 0.37, 0.89):
        direct = mm.dimensionless_activation(channel, v)
        assert abs(float(profile(v)) - direct) < 1e-6


def test_profile_zero_at_zero_and_clamps(profile):
    assert float(profile(0.0)) == 0.0
    lo, hi = profile.grid[0], profile.grid[-1]
    assert float(profile(lo - 5.0)) == profile.values[0]
    assert float(profile(hi + 5.0)) == profile.values[-1]
    # vectorized call
    out = profile(np.array([0.0, 0.2, -0.2]))
    assert out.shape == (3,)


def test_profile_validation():
    grid = np.linspace(-1.0, 1.0, 11)
    good = np.tanh(grid)
    with pytest.raises(ConstructionError, match="increasing"):
        mm.ActivationProfile(grid=grid[::-1], values=good)
    with pytest.raises(ConstructionError, match="monotone"):
        mm.ActivationProfile(grid=grid, values=-good)
    with pytest.raises(ConstructionError, match="V = 0"):
        mm.ActivationProfile(grid=grid, values=good + 0.5)
    with pytest.raises(ConstructionError):
        mm.ActivationProfile(grid=grid[:1], values=good[:1])


def test_build_profile_grid_contains_zero(channel):
    prof = mm.build_activation_profile(channel, v_min=-0.7, v_max=1.1, n_points=101)
    assert 0.0 in prof.grid
    assert np.all(np.diff(prof.grid) > 0.0)
    assert prof.grid[0] == -0.7 and prof.grid[-1] == 1.1
    with pytest.raises(ConstructionError):
        mm.build_activation_profile(channel, v_min=0.1, v_max=1.0)
    with pytest.raises(ConstructionError):
        mm.build_activation_profile(channel, n_points=10)


def test_step_conductance_euler_relaxation(channel, profile):
    state = mm.equilibrium_state(channel)
    v = 0.5
    g_inf = state.g0 * (1.0 + float(profile(v)))
    h = state.tau / 10.0
    s = state
    for _ in range(3):
        s = mm.step_conductance(s, v, h, profile)
    # explicit Euler: error to target shrinks by (1 - h/tau) each step
    want = g_inf + (1.0 - h / state.tau) ** 3 * (state.g - g_inf)
    assert s.g == pytest.approx(want, rel=1e-12)


def test_step_conductance_guards(channel, profile):
    state = mm.equilibrium_state(channel)
    with pytest.raises(IntegrationError):
        mm.step_conductance(state, 0.1, -1.0, profile)
    with pytest.raises(IntegrationError):
        mm.step_conductance(state, 0.1, state.tau * 1.5, profile)
    with pytest.warns(UserWarning, match="coarse"):
        mm.step_conductance(state, 0.1, state.tau * 0.6, profile)
    # direct-quadrature response path
    s = mm.step_conductance(state, 0.25, state.tau / 20.0, channel)
    assert s.g > state.g0  # positive voltage raises conductance


def test_conductance_state_positivity():
    with pytest.raises(ConstructionError):
        mm.ConductanceState(g=-1.0, g0=1.0, tau=1.0)
    with pytest.raises(ConstructionError):
        mm.ConductanceState(g=1.0, g0=1.0, tau=0.0)


def test_dump_activation_table(channel):
    table = mm.dump_activation(channel, v_min=-0.5, v_max=0.5, n_points=21)
    assert table.shape == (21, 2)
    assert table[0, 0] == -0.5 and table[-1, 0] == 0.5
    mid = 10
    assert table[mid, 0] == pytest.approx(0.0, abs=1e-15)
    assert table[mid, 1] == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ConstructionError):
        mm.dump_activation(channel, n_points=1)
