"""Monte Carlo forward model: synthetic datasets with known ground truth.

Every generator is deterministic given (scenario, seed): randomness comes
from numpy's PCG64 generator seeded with a sequence derived from the
scenario seed plus the call context, so repeated calls are bit-identical.

The cavity enhances each ZPL transition on resonance only; the Purcell
factor seen by transition i at cavity wavelength ``lam`` is

    f_i(lam) = 1 + (F_i_peak - 1) * L(lam - lam_i)

with ``L`` a unit-height Lorentzian of the cavity's FWHM.  Far from both
transitions the emitter therefore decays at its bulk rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .fitting import fano_model, fit_exp_decay, multi_lorentzian_model
from .model import DeviceGeometry, EmitterPhysics, theta_from_geometry, total_rate
from .timetags import PulseParams, TimeTagStream, auto_downsample, bin_timetags
from .traces import LifetimeTrace, SpectrumTrace, TuningSeries

# Default period keeps the nominal 3.3 MHz repetition rate while dividing
# evenly into 20/32/40 ps bins (303040 ps = 32*9470 = 40*7576 = 20*15152).
DEFAULT_PULSE = PulseParams(period_ns=303.04, pulse_width_ns=16.0)

# The integration time per trace is not tied to an absolute count rate
# anywhere upstream; 1e5 detected photons per trace is the documented default.
DEFAULT_COUNTS_PER_TRACE = 100_000


@dataclass(frozen=True)
class SynthScenario:
    """Ground truth for one synthetic emitter across one or more devices."""

    physics: EmitterPhysics
    geometries: tuple[DeviceGeometry, ...]
    f_peak: tuple[float, ...]  # on-resonance total Purcell prefactor F, per device
    cavity_fwhm_nm: float
    transition_wavelengths_nm: tuple[float, float]  # (lambda_C, lambda_D)
    counts_per_trace: int = DEFAULT_COUNTS_PER_TRACE
    background_fraction: float = 0.0
    rng_seed: int = 0
    pulse: PulseParams = field(default=DEFAULT_PULSE)
    bin_width_ps: int = 32

    def __post_init__(self):
        object.__setattr__(self, "geometries", tuple(self.geometries))
        object.__setattr__(self, "f_peak", tuple(float(f) for f in self.f_peak))
        object.__setattr__(
            self,
            "transition_wavelengths_nm",
            tuple(float(w) for w in self.transition_wavelengths_nm),
        )
        if len(self.geometries) == 0:
            raise DomainError("scenario needs at least one device geometry")
        if len(self.f_peak) != len(self.geometries):
            raise DomainError("f_peak must provide one value per device")
        if any(f <= 0 for f in self.f_peak):
            raise DomainError("f_peak values must be positive")
        if self.cavity_fwhm_nm <= 0:
            raise DomainError("cavity_fwhm_nm must be positive")
        lam_c, lam_d = self.transition_wavelengths_nm
        if lam_c <= 0 or lam_d <= 0 or lam_c == lam_d:
            raise DomainError("transition wavelengths must be positive and distinct")
        if self.counts_per_trace <= 0:
            raise DomainError("counts_per_trace must be positive")
        if not (0.0 <= self.background_fraction < 1.0):
            raise DomainError("background_fraction must lie in [0, 1)")
        if int(self.bin_width_ps) <= 0:
            raise DomainError("bin_width_ps must be positive")


def _rng(scenario: SynthScenario, *context: int) -> np.random.Generator:
    return np.random.default_rng((int(scenario.rng_seed),) + tuple(int(c) for c in context))


def cavity_lineshape(detuning_nm, fwhm_nm: float):
    """Unit-height Lorentzian response of the cavity versus detuning."""
    half = 0.5 * fwhm_nm
    d = np.asarray(detuning_nm, dtype=float)
    return half * half / (d * d + half * half)


def purcell_at(
    scenario: SynthScenario, device_index: int, cavity_wavelength_nm: float
) -> tuple[float, float]:
    """(f_c, f_d) seen by the emitter with the cavity parked at a wavelength."""
    geom = scenario.geometries[device_index]
    theta = math.radians(theta_from_geometry(geom))
    f = scenario.f_peak[device_index]
    f_c_peak = f * math.cos(theta)
    f_d_peak = f * math.sin(theta)
    lam_c, lam_d = scenario.transition_wavelengths_nm
    l_c = float(cavity_lineshape(cavity_wavelength_nm - lam_c, scenario.cavity_fwhm_nm))
    l_d = float(cavity_lineshape(cavity_wavelength_nm - lam_d, scenario.cavity_fwhm_nm))
    return 1.0 + (f_c_peak - 1.0) * l_c, 1.0 + (f_d_peak - 1.0) * l_d


def rate_at(scenario: SynthScenario, device_index: int, cavity_wavelength_nm: float) -> float:
    """Total emission rate (1/ns) with the cavity parked at a wavelength."""
    f_c, f_d = purcell_at(scenario, device_index, cavity_wavelength_nm)
    return total_rate(scenario.physics, f_c, f_d)


def synth_lifetime(
    scenario: SynthScenario, device_index: int, cavity_wavelength_nm: float
) -> LifetimeTrace:
    """One synthetic lifetime histogram at the given cavity wavelength.

    Signal photons are an excitation jitter uniform over the pulse width
    plus an exponential delay at the coupled rate; background tags are
    uniform over the period.  Tags are folded through the real binning path.
    """
    rate = rate_at(scenario, device_index, cavity_wavelength_nm)
    rng = _rng(scenario, device_index, int(round(cavity_wavelength_nm * 1e6)))
    n_total = int(scenario.counts_per_trace)
    n_bg = int(round(n_total * scenario.background_fraction))
    n_sig = n_total - n_bg
    period_ps = scenario.pulse.period_ps
    jitter_ns = rng.uniform(0.0, scenario.pulse.pulse_width_ns, size=n_sig)
    delay_ns = rng.exponential(1.0 / rate, size=n_sig)
    arrival_ps = np.rint((jitter_ns + delay_ns) * 1000.0).astype(np.int64)
    signal_ts = np.arange(n_sig, dtype=np.int64) * period_ps + arrival_ps
    bg_ts = (
        np.arange(n_sig, n_sig + n_bg, dtype=np.int64) * period_ps
        + rng.integers(0, period_ps, size=n_bg, dtype=np.int64)
    )
    ts = np.sort(np.concatenate([signal_ts, bg_ts]))
    stream = TimeTagStream(np.zeros(ts.size, dtype=np.uint8), ts)
    return bin_timetags(stream, scenario.pulse, scenario.bin_width_ps)


def synth_tuning_series(
    scenario: SynthScenario, device_index: int, wavelength_grid
) -> TuningSeries:
    """Rate-vs-cavity-wavelength series built by fitting one decay per grid point.

    Traces are coarsened with :func:`auto_downsample` before fitting, mirroring
    the usual post-processing of sparse timing histograms.
    """
    grid = np.asarray(wavelength_grid, dtype=float)
    rates = np.empty(grid.size)
    sigmas = np.empty(grid.size)
    for i, lam in enumerate(grid):
        trace = auto_downsample(synth_lifetime(scenario, device_index, float(lam)))
        fit = fit_exp_decay(trace)
        tau = fit.params["tau_ns"]
        rates[i] = 1.0 / tau
        sigmas[i] = fit.sigma["tau_ns"] / tau**2
    return TuningSeries(grid, rates, sigmas)


def synth_spectrum(kind: str, params: dict, noise: str = "none", seed: int = 0) -> SpectrumTrace:
    """Synthetic spectrum of a given lineshape family with optional noise.

    ``kind="fano"`` expects amplitude, q, center_nm, fwhm_nm, offset;
    ``kind="lorentzian_peaks"`` expects background and peaks, a list of
    (amplitude, center_nm, fwhm_nm) triples.  Both take the grid either as
    ``wavelength_nm`` or as (lambda_start_nm, lambda_stop_nm, n_points).
    Noise is ``"none"``, ``"gaussian"`` (with ``noise_sigma``), or
    ``"poisson"``; output is deterministic under the seed.
    """
    params = dict(params)
    if "wavelength_nm" in params:
        lam = np.asarray(params.pop("wavelength_nm"), dtype=float)
    else:
        try:
            lam = np.linspace(
                float(params.pop("lambda_start_nm")),
                float(params.pop("lambda_stop_nm")),
                int(params.pop("n_points")),
            )
        except KeyError as exc:
            raise DomainError("spectrum grid is unspecified") from exc
    noise_sigma = float(params.pop("noise_sigma", 0.0))
    if kind == "fano":
        vals = fano_model(
            lam,
            float(params["amplitude"]),
            float(params["q"]),
            float(params["center_nm"]),
            float(params["fwhm_nm"]),
            float(params["offset"]),
        )
    elif kind == "lorentzian_peaks":
        flat: list[float] = []
        for peak in params["peaks"]:
            flat.extend(float(v) for v in peak)
        vals = multi_lorentzian_model(lam, float(params["background"]), *flat)
    else:
        raise DomainError(f"unknown spectrum kind {kind!r}")
    rng = np.random.default_rng((int(seed), 0x5EC7))
    if noise == "none":
        pass
    elif noise == "gaussian":
        if noise_sigma <= 0:
            raise DomainError("gaussian noise requires a positive noise_sigma")
        vals = vals + rng.normal(0.0, noise_sigma, size=lam.size)
    elif noise == "poisson":
        if np.any(vals < 0):
            raise DomainError("poisson noise requires non-negative expectations")
        vals = rng.poisson(vals).astype(float)
    else:
        raise DomainError(f"unknown noise model {noise!r}")
    return SpectrumTrace(lam, vals)
