"""Purcell-factor and branching-ratio analysis for cavity-coupled SnV- centers.

Library layout:

- :mod:`snvcavity.model`    spontaneous-emission model and rate algebra
- :mod:`snvcavity.solvers`  branching-ratio / fabrication-offset solvers
- :mod:`snvcavity.fitting`  nonlinear least squares and lineshape fits
- :mod:`snvcavity.timetags` time-tag ingestion and histogramming
- :mod:`snvcavity.synth`    seeded Monte Carlo data synthesizer
- :mod:`snvcavity.cli`      command-line front end
"""

__version__ = "0.1.0"

from .errors import (
    DataFormatError,
    DegenerateBranchingError,
    DegenerateCurvesError,
    DegenerateDipoleError,
    DegenerateModelError,
    DomainError,
    FitError,
    InsufficientDataError,
    NoIntersectionError,
    SingularFitError,
    SnvCavityError,
    UnderResolvedError,
    UnreliableRatioError,
)
from .model import (
    DEFAULT_ETA_DW,
    DeviceGeometry,
    EmitterPhysics,
    EmitterSolution,
    EnhancementPair,
    PurcellSolution,
    enhancement_ratio,
    fold_angle_deg,
    fourier_limit_linewidth,
    pl_enhancement,
    purcell_from_zeta,
    rate_from_lifetime,
    tan_theta,
    theta_from_geometry,
    total_rate,
)
from .fitting import (
    FitResult,
    background_correct,
    fit_exp_decay,
    fit_fano,
    fit_linewidth,
    fit_multi_lorentzian,
    fit_sinusoid,
    nlls_fit,
)
from .solvers import (
    PhiCurve,
    phi_of_eta,
    propagate_uncertainty,
    solve_consensus,
    solve_pair,
)
from .synth import SynthScenario, synth_lifetime, synth_spectrum, synth_tuning_series
from .timetags import PulseParams, TimeTagRecord, TimeTagStream, bin_timetags, downsample
from .traces import LifetimeTrace, SpectrumTrace, TuningSeries

__all__ = [
    "__version__",
    "DEFAULT_ETA_DW",
    "DataFormatError",
    "DegenerateBranchingError",
    "DegenerateCurvesError",
    "DegenerateDipoleError",
    "DegenerateModelError",
    "DeviceGeometry",
    "DomainError",
    "EmitterPhysics",
    "EmitterSolution",
    "EnhancementPair",
    "FitError",
    "FitResult",
    "InsufficientDataError",
    "LifetimeTrace",
    "NoIntersectionError",
    "PhiCurve",
    "PulseParams",
    "PurcellSolution",
    "SingularFitError",
    "SnvCavityError",
    "SpectrumTrace",
    "SynthScenario",
    "TimeTagRecord",
    "TimeTagStream",
    "TuningSeries",
    "UnderResolvedError",
    "UnreliableRatioError",
    "background_correct",
    "bin_timetags",
    "downsample",
    "enhancement_ratio",
    "fit_exp_decay",
    "fit_fano",
    "fit_linewidth",
    "fit_multi_lorentzian",
    "fit_sinusoid",
    "fold_angle_deg",
    "fourier_limit_linewidth",
    "nlls_fit",
    "phi_of_eta",
    "pl_enhancement",
    "propagate_uncertainty",
    "purcell_from_zeta",
    "rate_from_lifetime",
    "solve_consensus",
    "solve_pair",
    "synth_lifetime",
    "synth_spectrum",
    "synth_tuning_series",
    "tan_theta",
    "theta_from_geometry",
    "total_rate",
]
