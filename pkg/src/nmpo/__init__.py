"""Driven two-mode system with a non-Markovian memory kernel.

Mean-field phase structure, linear response about the steady states,
frequency-resolved noise spectra with closed-form variances, logarithmic
negativity of the cross-quadrature state, and a full nonlinear stochastic
integrator with ensemble estimators.
"""

from .errors import (
    BracketFailure,
    EigensolverFailure,
    InconsistentSteadyState,
    InsufficientSamples,
    NegativeOccupancy,
    NonPositiveRate,
    NonStationary,
    NumericsError,
    OutOfRegime,
    ParameterError,
    PumpNotFast,
    SingularAtFrequency,
    SlowPumpWarning,
    StepOverflow,
    TailNotConverged,
)
from .linres import (
    EigenSpectrum,
    EmbeddedMatrix,
    build_embedded_matrix,
    disordered_eigenvalues_closed_form,
    eigenflow_sweep,
    eigenspectrum,
    exceptional_point_drive,
    locate_critical_drive,
)
from .meanfield import (
    Phase,
    SteadyState,
    classify_phase,
    critical_drive,
    frequency_shift,
    mode_amplitudes,
    phase_diagram,
    steady_state,
    steady_state_branch,
    steady_state_residual,
)
from .model import (
    MemoryKernel,
    SystemParams,
    kernel_freq,
    kernel_freq_real,
    kernel_time,
    load_params,
    parse_params_text,
    validate,
)
from .sde import (
    OrderParameterEstimate,
    SimConfig,
    Trajectory,
    estimate_order_parameters,
    estimate_quadrature_variances,
    integrate_trajectory,
    ou_noise_step,
)
from .spectra import (
    NegativityResult,
    SpectralData,
    VarianceReport,
    diffusion_matrix,
    integrate_variances,
    log_negativity,
    negativity_map,
    negativity_occupancy_sweep,
    psd,
    susceptibility_at,
    variances_above_threshold_u1,
    variances_below_threshold,
    variances_u1xz2,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "ParameterError", "NonPositiveRate", "NegativeOccupancy", "PumpNotFast",
    "OutOfRegime", "InsufficientSamples", "SlowPumpWarning", "NumericsError",
    "InconsistentSteadyState", "EigensolverFailure", "BracketFailure",
    "SingularAtFrequency", "TailNotConverged", "StepOverflow", "NonStationary",
    # model
    "MemoryKernel", "SystemParams", "kernel_time", "kernel_freq",
    "kernel_freq_real", "parse_params_text", "load_params", "validate",
    # meanfield
    "Phase", "SteadyState", "classify_phase", "critical_drive",
    "frequency_shift", "steady_state", "steady_state_branch",
    "mode_amplitudes", "steady_state_residual", "phase_diagram",
    # linres
    "EmbeddedMatrix", "EigenSpectrum", "build_embedded_matrix",
    "eigenspectrum", "disordered_eigenvalues_closed_form",
    "exceptional_point_drive", "locate_critical_drive", "eigenflow_sweep",
    # spectra
    "SpectralData", "VarianceReport", "NegativityResult", "susceptibility_at",
    "diffusion_matrix", "psd", "integrate_variances",
    "variances_below_threshold", "variances_above_threshold_u1",
    "variances_u1xz2", "log_negativity", "negativity_map",
    "negativity_occupancy_sweep",
    # sde
    "SimConfig", "Trajectory", "OrderParameterEstimate", "ou_noise_step",
    "integrate_trajectory", "estimate_order_parameters",
    "estimate_quadrature_variances",
]
