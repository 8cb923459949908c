"""Decay of a defect site coupled to a semi-infinite tight-binding
chain under time-dependent switching of the first-link coupling.

Engines: a Crank-Nicolson TDSE propagator (ground truth), an exact
Bessel-series solution for the constant-coupling epoch, closed-form
exponential/asymptotic regime components, and a diagrammatic
perturbation series for the switching interval with exact
combinatorics and memory sums.
"""

from .model import (ChainTrajectory, HandoffState, ModelParams,
                    ProfileError, SwitchingProfile, default_n_sites)
from .propagator import (IntegrationError, PropagatorConfig,
                         TruncationError, propagate, survival_probability)
from .bessel import (FourierCoefficients, StationaryMode, bessel_j_array,
                     caligraphic_j, compute_t_coefficients,
                     exact_amplitude, exact_amplitudes)
from .regimes import (AsymptoticForm, ExponentialForm, asymptotic_amplitude,
                      asymptotic_sums, exponential_amplitude,
                      exponential_form, regime_ansatz)
from .switching import (appendix_identities, count_diagrams_bruteforce,
                        count_diagrams_formula, memory_asymptotic,
                        memory_sums_closed_form, memory_sums_series,
                        perturbative_amplitude_constant,
                        perturbative_amplitude_linear)
from .fitting import (FitError, FitResult, fit_exponential_rate,
                      fit_oscillation, fit_powerlaw_envelope)
from .experiments import (ConfigError, ExperimentConfig, RunResult,
                          ToleranceError, load_config_file, reproduce,
                          run_sweep)

__version__ = "0.1.0"

__all__ = [
    "ChainTrajectory", "HandoffState", "ModelParams", "ProfileError",
    "SwitchingProfile", "default_n_sites",
    "IntegrationError", "PropagatorConfig", "TruncationError",
    "propagate", "survival_probability",
    "FourierCoefficients", "StationaryMode", "bessel_j_array",
    "caligraphic_j", "compute_t_coefficients", "exact_amplitude",
    "exact_amplitudes",
    "AsymptoticForm", "ExponentialForm", "asymptotic_amplitude",
    "asymptotic_sums", "exponential_amplitude", "exponential_form",
    "regime_ansatz",
    "appendix_identities", "count_diagrams_bruteforce",
    "count_diagrams_formula", "memory_asymptotic",
    "memory_sums_closed_form", "memory_sums_series",
    "perturbative_amplitude_constant", "perturbative_amplitude_linear",
    "FitError", "FitResult", "fit_exponential_rate", "fit_oscillation",
    "fit_powerlaw_envelope",
    "ConfigError", "ExperimentConfig", "RunResult", "ToleranceError",
    "load_config_file", "reproduce", "run_sweep",
]
