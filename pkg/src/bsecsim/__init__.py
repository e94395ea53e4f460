"""Resonance total reflection from potentials with a bound state embedded in
the continuum: closed-form potentials, a whole-axis scattering solver, and
resonance-peak analysis."""

from .analysis import (
    EdgePeakError,
    PeakReport,
    ReflectivityScan,
    ScanSample,
    WidthResult,
    find_peak,
    perturbation_experiment,
    scan_reflectivity,
    width_vs_c,
)
from .potentials import (
    BsecParams,
    PiecewiseSegment,
    PotentialKind,
    PotentialModel,
    eval_bsec_wavefunction,
    eval_potential,
    sample_on_grid,
    u_factor,
)
from .solver import (
    NonConvergenceError,
    NumericsConfig,
    ScatteringAmplitudes,
    exact_resonance_solution,
    integrate_trajectory,
    richardson_extrapolate,
    solve_scattering,
)

__version__ = "0.1.0"

__all__ = [
    "BsecParams",
    "PiecewiseSegment",
    "PotentialKind",
    "PotentialModel",
    "u_factor",
    "eval_potential",
    "eval_bsec_wavefunction",
    "sample_on_grid",
    "NumericsConfig",
    "ScatteringAmplitudes",
    "NonConvergenceError",
    "solve_scattering",
    "integrate_trajectory",
    "exact_resonance_solution",
    "richardson_extrapolate",
    "ScanSample",
    "ReflectivityScan",
    "PeakReport",
    "WidthResult",
    "EdgePeakError",
    "scan_reflectivity",
    "find_peak",
    "width_vs_c",
    "perturbation_experiment",
    "__version__",
]
