"""Iontronic reservoir computing: volatile-memristor channels as ESN/BPN nodes.

The core model lives in :mod:`ionrc.memristor` (channel physics and the
steady-state activation), :mod:`ionrc.reservoir` (leaky-integrator network
construction and dynamics), :mod:`ionrc.circuit` (the equivalent
pressure-driven circuit formulation), and :mod:`ionrc.readout` (ridge
readout, forecasting loops, AR baselines). Experiment pipelines and the
figure renderers import matplotlib, so they stay behind explicit imports:
``import ionrc.experiments``.
"""

from .config import (
    ExperimentConfig,
    PRESETS,
    load_config,
    parse_config,
    preset,
    preset_payload,
)
from .circuit import (
    ChannelBank,
    CircuitState,
    PressureChannelParams,
    attach_pressure_input,
    circuit_step,
    dimensionless_trajectory,
    initial_circuit_state,
    run_circuit,
    terminal_voltages,
)
from .errors import (
    ConfigError,
    ConstructionError,
    DivergenceError,
    IngestionError,
    IntegrationError,
    IonrcError,
    NumericalError,
    PhysicsDomainError,
)
from .memristor import (
    ActivationProfile,
    ChannelParams,
    ConductanceState,
    build_activation_profile,
    conductance_contrast,
    dimensionless_activation,
    dump_activation,
    equilibrium_conductance,
    equilibrium_state,
    peclet,
    steady_conductance,
    step_conductance,
    timescale_from_length,
    volumetric_flow,
)
from .readout import (
    ARReadout,
    FreeRunResult,
    Metrics,
    ReadoutModel,
    accuracy,
    ar_lags,
    classify,
    export_readout,
    fit_ar,
    import_readout,
    nrmse_horizon,
    predict_free_running,
    predict_teacher_forced,
    rmse,
    train_ridge,
)
from .reservoir import (
    EspReport,
    ReservoirWeights,
    esp_check,
    esp_matrix,
    generate_weights,
    run,
    sample_timescales,
    scale_to_esp_radius,
    spectral_radius,
    step,
)
from .tasks import (
    LabeledSeries,
    MackeyGlassParams,
    harmonic,
    harmonic_signal,
    load_ventilator,
    mackey_glass,
    pressure_to_input,
    shift_targets,
    synth_ventilator,
)

__version__ = "0.1.0"
