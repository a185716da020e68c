"""Identification of a harmonic source profile in the 1D wave equation
from a single boundary measurement, by back-and-forth nudged observers."""

from .backend import active_backend
from .diagnostics import (
    DiagnosticsSample,
    convergence_order,
    dissipation_balance,
    energy_identity_residual,
    l2_error,
    lyapunov,
)
from .estimator import (
    IterationResult,
    ObserverState,
    RunConfig,
    TwinTrajectory,
    error_dynamics_run,
    observer_pass,
    run_bfn,
)
from .grids import Grid1D, TimeGrid, make_grids
from .measurement import (
    MeasurementRecord,
    NoiseSpec,
    add_noise,
    playback,
    running_integral,
    synthesize_cascade_record,
    synthesize_measurement,
)
from .oscillator import (
    ObserverGains,
    OscillatorState,
    cascade_osc_step,
    init_truth_oscillator,
    observer_osc_step,
)
from .wave import (
    SourceField,
    StepDirection,
    WaveFieldState,
    boundary_flux,
    forced_wave_step,
    homogeneous_wave_step,
    source_preset,
)

__version__ = "0.1.0"

__all__ = [
    "DiagnosticsSample",
    "Grid1D",
    "IterationResult",
    "MeasurementRecord",
    "NoiseSpec",
    "ObserverGains",
    "ObserverState",
    "OscillatorState",
    "RunConfig",
    "SourceField",
    "StepDirection",
    "TimeGrid",
    "TwinTrajectory",
    "WaveFieldState",
    "active_backend",
    "add_noise",
    "boundary_flux",
    "cascade_osc_step",
    "convergence_order",
    "dissipation_balance",
    "energy_identity_residual",
    "error_dynamics_run",
    "forced_wave_step",
    "homogeneous_wave_step",
    "init_truth_oscillator",
    "l2_error",
    "lyapunov",
    "make_grids",
    "observer_osc_step",
    "observer_pass",
    "playback",
    "run_bfn",
    "running_integral",
    "source_preset",
    "synthesize_cascade_record",
    "synthesize_measurement",
]
