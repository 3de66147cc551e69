"""Klein-Gordon scattering by the generalized Hulthen barrier.

Transmission and reflection from exact hypergeometric solutions, checked
against direct numerical integration, with energy/strength sweeps and
resonance location.
"""

__version__ = "0.1.0"

from .analytic import (
    AmplitudeSolution,
    Branch,
    WaveParameters,
    match_at_origin,
    phi_left,
    phi_right,
    transmission,
    wave_parameters,
)
from .oracle import IntegrationSpec, integrate_and_extract
from .potential import HulthenParams, barrier_peak, decay_cutoff, evaluate
from .special import complex_gamma, gauss_2f1, gauss_2f1_dy
from .sweep import (
    ParamAxis,
    Resonance,
    SweepSpec,
    SweepTable,
    SweepVariable,
    find_resonances,
    run_sweep,
    width_trend,
)

__all__ = [
    "AmplitudeSolution",
    "Branch",
    "HulthenParams",
    "IntegrationSpec",
    "ParamAxis",
    "Resonance",
    "SweepSpec",
    "SweepTable",
    "SweepVariable",
    "WaveParameters",
    "barrier_peak",
    "complex_gamma",
    "decay_cutoff",
    "evaluate",
    "find_resonances",
    "gauss_2f1",
    "gauss_2f1_dy",
    "integrate_and_extract",
    "match_at_origin",
    "phi_left",
    "phi_right",
    "run_sweep",
    "transmission",
    "wave_parameters",
    "width_trend",
]
