import copy

import pytest

from ionrc.memristor import ChannelParams, build_activation_profile


@pytest.fixture(scope="session")
def channel():
    return ChannelParams.from_lab_units()


@pytest.fixture(scope="session")
def profile(channel):
    return build_activation_profile(channel)


# Small but fully valid configs for pipeline/CLI tests. Deliberately tiny so a
# run takes well under a second; quality bars live in the acceptance suite.

_TINY_HARMONIC = {
    "task": "harmonic",
    "run": {"master_seed": 7, "n_seeds": 2},
    "variants": [
        {
            "name": "esn",
            "reservoir": {
                "n_nodes": 8,
                "sparsity": 0.3,
                "target_radius": 0.4,
                "radius_mode": "raw",
                "leak_rate": 0.5,
                "stepsize_s": 0.3141592653589793,
                "timescale_s": 1.0,
                "input_scale_V": 0.3,
            },
            "training": {"ridge_lambda": 1e-4, "washout_steps": 30},
        },
        {
            "name": "bpn",
            "reservoir": {
                "n_nodes": 8,
                "sparsity": 0.3,
                "target_radius": 0.9,
                "radius_mode": "esp",
                "leak_rate": 0.5,
                "stepsize_s": 0.3141592653589793,
                "timescale_mean_s": 1.2,
                "timescale_std_s": 0.1,
                "input_scale_V": 0.3,
            },
            "training": {"ridge_lambda": 1e-4, "washout_steps": 30},
        },
    ],
    "harmonic": {"train_steps": 160, "eval_teacher_steps": 40, "eval_free_steps": 30},
    "sweep": {
        "n_trials": 3,
        "space": {"variants.esn.training.ridge_lambda": [1e-6, 1e-3]},
    },
}

_TINY_MG = {
    "task": "mackey_glass",
    "run": {"master_seed": 11, "n_seeds": 2},
    "variants": [
        {
            "name": "esn",
            "reservoir": {
                "n_nodes": 16,
                "sparsity": 0.4,
                "target_radius": 0.9,
                "radius_mode": "raw",
                "leak_rate": 0.9,
                "stepsize_s": 1.0,
                "timescale_s": 2.0,
                "input_scale_V": 0.4,
            },
            "training": {"ridge_lambda": 1e-6, "washout_steps": 20},
        }
    ],
    "mackey_glass": {
        "train_steps": 150,
        "test_teacher_steps": 40,
        "horizon_steps": 5,
        "trace_free_steps": 12,
    },
}

_TINY_VENT = {
    "task": "ventilator",
    "run": {"master_seed": 3, "n_seeds": 2},
    "variants": [
        {
            "name": "classify",
            "target": "valve",
            "reservoir": {
                "n_nodes": 5,
                "sparsity": 0.1,
                "target_radius": 0.8,
                "radius_mode": "raw",
                "leak_rate": 0.9,
                "stepsize_s": 0.034035,
                "timescale_mean_s": 0.27,
                "timescale_std_s": 0.5,
                "input_scale_V_per_nA": 0.11,
            },
            "training": {"ridge_lambda": 1e-5, "washout_steps": 1000},
        },
        {
            "name": "predict",
            "target": "pressure_ahead",
            "reservoir": {
                "n_nodes": 8,
                "sparsity": 0.1,
                "target_radius": 0.8,
                "radius_mode": "raw",
                "leak_rate": 0.9,
                "stepsize_s": 0.034035,
                "timescale_mean_s": 0.27,
                "timescale_std_s": 0.5,
                "input_scale_V_per_nA": 0.11,
            },
            "training": {"ridge_lambda": 1e-5, "washout_steps": 1000},
        },
    ],
    "ventilator": {
        "split": [2400, 1600],
        "synthetic_breaths": 50,
        "prediction_horizon": 3,
        "ar_subsample_stride": 4,
    },
}


@pytest.fixture
def tiny_harmonic_payload():
    return copy.deepcopy(_TINY_HARMONIC)


@pytest.fixture(scope="module")
def tiny_harmonic_payload_module():
    return copy.deepcopy(_TINY_HARMONIC)


@pytest.fixture
def tiny_mg_payload():
    return copy.deepcopy(_TINY_MG)


@pytest.fixture
def tiny_vent_payload():
    return copy.deepcopy(_TINY_VENT)
