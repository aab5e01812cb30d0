"""Weight construction, the echo-state certificate, and state evolution."""

import math

import numpy as np
import pytest

from ionrc import reservoir as rv
from ionrc.errors import ConstructionError, DivergenceError


def test_spectral_radius_closed_forms():
    assert rv.spectral_radius(np.array([[0.0, 1.0], [1.0, 0.0]])) == pytest.approx(1.0, rel=1e-12)
    assert rv.spectral_radius(np.diag([0.3, -0.7])) == pytest.approx(0.7, rel=1e-12)
    # nilpotent: radius zero
    assert rv.spectral_radius(np.array([[0.0, 1.0], [0.0, 0.0]])) == pytest.approx(0.0, abs=1e-12)


def test_spectral_radius_power_iteration_oracle():
    rng = np.random.default_rng(42)
    a = rng.uniform(0.0, 1.0, size=(30, 30))  # nonneg: Perron eigenvalue dominates
    v = np.ones(30)
    lam = 0.0
    for _ in range(4000):
        w = a @ v
        lam = np.linalg.norm(w)
        v = w / lam
    assert rv.spectral_radius(a) == pytest.approx(lam, rel=1e-6)


def test_esp_matrix_formula():
    w = np.array([[0.0, -0.5], [0.25, 0.0]])
    m = rv.esp_matrix(w, leak_rate=0.8, stepsize=0.5, timescales=2.0)
    want = (0.5 / 2.0) * np.abs(w) + (1.0 - 0.8 * 0.5 / 2.0) * np.eye(2)
    assert np.array_equal(m, want)


def test_esp_matrix_uses_smallest_timescale():
    w = np.eye(2) * 0.1
    hetero = rv.esp_matrix(w, 0.9, 1.0, np.array([1.5, 3.0]))
    uniform = rv.esp_matrix(w, 0.9, 1.0, 1.5)
    assert np.array_equal(hetero, uniform)


def test_scale_to_esp_radius_hits_target_exactly():
    w = np.array([[0.0, 1.0], [1.0, 0.0]])
    # a = delta = c = 1: the identity part vanishes and M = |W|
    scaled = rv.scale_to_esp_radius(w, leak_rate=1.0, stepsize=1.0, timescales=1.0, target_radius=0.5)
    assert np.allclose(scaled, 0.5 * w, atol=1e-15)
    m = rv.esp_matrix(scaled, 1.0, 1.0, 1.0)
    assert rv.spectral_radius(m) == pytest.approx(0.5, rel=1e-12)


def test_scale_to_esp_radius_rejections():
    w = np.array([[0.0, 1.0], [1.0, 0.0]])
    with pytest.raises(ConstructionError, match="not reachable"):
        # identity part 1 - 0.5*1/2 = 0.75 exceeds the target
        rv.scale_to_esp_radius(w, 0.5, 1.0, 2.0, target_radius=0.5)
    with pytest.raises(ConstructionError, match="in \\(0, 1\\)"):
        rv.scale_to_esp_radius(w, 1.0, 1.0, 1.0, target_radius=1.0)
    with pytest.raises(ConstructionError, match="zero spectral radius"):
        rv.scale_to_esp_radius(np.zeros((2, 2)), 1.0, 1.0, 1.0, target_radius=0.5)


def test_esp_check_threshold():
    def single(weight):
        return rv.ReservoirWeights(
            w=np.array([[weight]]),
            w_in=np.array([[0.1]]),
            leak_rate=1.0,
            stepsize=1.0,
            timescales=np.array([1.0]),
            input_scale=0.1,
            sparsity=0.0,
        )

    # with a = delta = c = 1, M = |w|
    assert rv.esp_check(single(0.99)).satisfied
    report = rv.esp_check(single(1.01))
    assert not report.satisfied
    assert report.spectral_radius_m == pytest.approx(1.01, rel=1e-12)


def test_sample_timescales_clamp_and_distribution():
    draws = rv.sample_timescales(10_000, mean=2.79, std=9.9, seed=123)
    assert draws.shape == (10_000,)
    assert draws.min() == pytest.approx(2.79 / 5.0, abs=1e-15)
    # clamp frequency matches the normal CDF below the floor
    expected = 0.5 * (1.0 + math.erf((2.79 / 5.0 - 2.79) / (9.9 * math.sqrt(2.0))))
    at_clamp = float(np.mean(draws == 2.79 / 5.0))
    assert at_clamp == pytest.approx(expected, abs=0.02)


def test_sample_timescales_rejections():
    with pytest.raises(ConstructionError):
        rv.sample_timescales(0, 1.0, 0.1, seed=1)
    with pytest.raises(ConstructionError):
        rv.sample_timescales(4, 0.0, 0.1, seed=1)
    with pytest.raises(ConstructionError):
        rv.sample_timescales(4, 1.0, -0.1, seed=1)


def test_generate_weights_deterministic():
    kw = dict(n=12, k=2, sparsity=0.4, target_radius=0.8, leak_rate=0.9,
              stepsize=1.0, timescales=2.0, input_scale=0.3)
    a = rv.generate_weights(seed=5, **kw)
    b = rv.generate_weights(seed=5, **kw)
    c = rv.generate_weights(seed=6, **kw)
    assert np.array_equal(a.w, b.w) and np.array_equal(a.w_in, b.w_in)
    assert not np.array_equal(a.w, c.w)


def test_generate_weights_exact_sparsity_count():
    w = rv.generate_weights(n=20, k=1, sparsity=0.3, target_radius=0.8,
                            leak_rate=0.9, stepsize=1.0, timescales=2.0, seed=9)
    assert int(np.sum(w.w == 0.0)) == round(0.3 * 400)


def test_generate_weights_esp_mode_certificate():
    w = rv.generate_weights(n=25, k=1, sparsity=0.5, target_radius=0.7,
                            leak_rate=0.9, stepsize=1.0, timescales=2.0, seed=3,
                            radius_mode="esp")
    report = rv.esp_check(w)
    assert report.satisfied
    assert report.spectral_radius_m == pytest.approx(0.7, rel=1e-10)


def test_generate_weights_raw_mode_radius():
    w = rv.generate_weights(n=25, k=1, sparsity=0.5, target_radius=1.3,
                            leak_rate=0.9, stepsize=1.0, timescales=2.0, seed=3,
                            radius_mode="raw")
    assert rv.spectral_radius(w.w) == pytest.approx(1.3, rel=1e-10)


def test_generate_weights_sign_flip_extremes():
    kw = dict(n=15, k=1, sparsity=0.2, target_radius=0.8, leak_rate=0.9,
              stepsize=1.0, timescales=2.0, seed=11)
    none = rv.generate_weights(sign_flip_fraction=0.0, **kw)
    assert np.all(none.w >= 0.0)
    every = rv.generate_weights(sign_flip_fraction=1.0, **kw)
    assert np.all(every.w <= 0.0)


def test_generate_weights_scalar_and_vector_timescales_agree():
    kw = dict(n=10, k=1, sparsity=0.3, target_radius=0.8, leak_rate=0.9,
              stepsize=1.0, seed=2)
    scalar = rv.generate_weights(timescales=2.5, **kw)
    vector = rv.generate_weights(timescales=np.full(10, 2.5), **kw)
    assert np.array_equal(scalar.w, vector.w)
    assert np.array_equal(scalar.timescales, vector.timescales)


def test_generate_weights_rejections():
    kw = dict(k=1, sparsity=0.4, target_radius=0.8, leak_rate=0.9,
              stepsize=1.0, timescales=2.0, seed=1)
    with pytest.raises(ConstructionError):
        rv.generate_weights(n=0, **kw)
    with pytest.raises(ConstructionError):
        rv.generate_weights(n=4, k=1, sparsity=1.0, target_radius=0.8,
                            leak_rate=0.9, stepsize=1.0, timescales=2.0, seed=1)
    with pytest.raises(ConstructionError):
        rv.generate_weights(n=4, k=1, sparsity=0.2, target_radius=0.8,
                            leak_rate=0.9, stepsize=1.0, timescales=2.0,
                            sign_flip_fraction=1.5, seed=1)
    with pytest.raises(ConstructionError):
        rv.generate_weights(n=4, k=1, sparsity=0.2, target_radius=0.8,
                            leak_rate=0.9, stepsize=1.0, timescales=2.0,
                            radius_mode="both", seed=1)
    with pytest.raises(ConstructionError):
        rv.generate_weights(n=4, k=1, sparsity=0.2, target_radius=-0.5,
                            leak_rate=0.9, stepsize=1.0, timescales=2.0,
                            radius_mode="raw", seed=1)
    # fully zeroed matrix cannot reach any radius
    with pytest.raises(ConstructionError, match="zero spectral radius"):
        rv.generate_weights(n=1, k=1, sparsity=0.9, target_radius=0.8,
                            leak_rate=0.9, stepsize=1.0, timescales=2.0,
                            radius_mode="raw", seed=1)


def test_reservoir_weights_validation():
    with pytest.raises(ConstructionError, match="exceeds 1"):
        rv.ReservoirWeights(
            w=np.zeros((2, 2)), w_in=np.zeros((2, 1)), leak_rate=1.0,
            stepsize=1.0, timescales=np.array([0.5, 2.0]),
            input_scale=1.0, sparsity=0.0,
        )
    with pytest.raises(ConstructionError):
        rv.ReservoirWeights(
            w=np.zeros((2, 3)), w_in=np.zeros((2, 1)), leak_rate=0.9,
            stepsize=1.0, timescales=np.full(2, 2.0),
            input_scale=1.0, sparsity=0.0,
        )
    with pytest.raises(ConstructionError):
        rv.ReservoirWeights(
            w=np.zeros((2, 2)), w_in=np.zeros((3, 1)), leak_rate=0.9,
            stepsize=1.0, timescales=np.full(2, 2.0),
            input_scale=1.0, sparsity=0.0,
        )


def _single_node(w=0.5, w_in=0.3, a=0.9, delta=1.0, c=2.0):
    return rv.ReservoirWeights(
        w=np.array([[w]]), w_in=np.array([[w_in]]), leak_rate=a,
        stepsize=delta, timescales=np.array([c]), input_scale=w_in, sparsity=0.0,
    )


def test_step_single_node_closed_form():
    weights = _single_node()
    x = np.array([0.2])
    u = 0.7
    got = rv.step(x, weights, u, np.tanh)
    want = (1.0 - 0.9 / 2.0) * 0.2 + (1.0 / 2.0) * np.tanh(0.3 * 0.7 + 0.5 * 0.2)
    assert got[0] == pytest.approx(want, rel=1e-14)


def test_run_is_markov_in_the_state():
    weights = rv.generate_weights(n=6, k=1, sparsity=0.2, target_radius=0.8,
                                  leak_rate=0.9, stepsize=1.0, timescales=2.0, seed=4)
    rng = np.random.default_rng(8)
    u = rng.uniform(-1, 1, size=(40, 1))
    full = rv.run(np.zeros(6), weights, u, np.tanh)
    head = rv.run(np.zeros(6), weights, u[:15], np.tanh)
    tail = rv.run(head[-1], weights, u[15:], np.tanh)
    assert np.array_equal(full[:15], head)
    assert np.array_equal(full[15:], tail)


def test_run_superposition_with_linear_activation():
    weights = rv.generate_weights(n=5, k=1, sparsity=0.0, target_radius=0.5,
                                  leak_rate=0.9, stepsize=1.0, timescales=2.0,
                                  seed=7, radius_mode="raw")
    rng = np.random.default_rng(3)
    ua = rng.uniform(-1, 1, size=(30, 1))
    ub = rng.uniform(-1, 1, size=(30, 1))
    ident = lambda z: z
    xa = rv.run(np.zeros(5), weights, ua, ident)
    xb = rv.run(np.zeros(5), weights, ub, ident)
    xab = rv.run(np.zeros(5), weights, ua + ub, ident)
    assert np.allclose(xab, xa + xb, atol=1e-12)


def test_run_shape_rejections():
    weights = _single_node()
    with pytest.raises(ConstructionError, match="channels"):
        rv.run(np.zeros(1), weights, np.zeros((5, 2)), np.tanh)
    with pytest.raises(ConstructionError, match="state"):
        rv.run(np.zeros(3), weights, np.zeros((5, 1)), np.tanh)


@pytest.mark.filterwarnings("ignore:overflow:RuntimeWarning")
def test_run_flags_divergence_with_step_index():
    weights = _single_node(w=2.0, a=1.0, delta=1.0, c=1.0)
    cubed = lambda z: z**3
    with pytest.raises(DivergenceError) as err:
        rv.run(np.array([2.0]), weights, np.zeros((50, 1)), cubed)
    assert err.value.step is not None and err.value.step >= 0


def test_certified_weights_contract_two_states(profile):
    # two trajectories under a shared drive must meet within the step budget
    weights = rv.generate_weights(n=12, k=1, sparsity=0.25, target_radius=0.35,
                                  leak_rate=0.95, stepsize=1.0, timescales=1.0,
                                  input_scale=0.4, seed=21, radius_mode="esp")
    budget = math.ceil(10.0 * float(np.max(weights.timescales)) / weights.stepsize)
    rng = np.random.default_rng(17)
    u = rng.uniform(-1.0, 1.0, size=(budget, 1))
    xa = rng.uniform(-0.3, 0.3, 12)
    xb = rng.uniform(-0.3, 0.3, 12)
    for activation in (np.tanh, profile):
        da = rv.run(xa, weights, u, activation)
        db = rv.run(xb, weights, u, activation)
        assert float(np.linalg.norm(da[-1] - db[-1])) < 1e-6
