"""Spontaneous-emission model of a two-transition emitter coupled to one cavity mode.

The emitter budget splits the bulk decay rate into two zero-phonon-line
transitions (C and D, orthogonal dipoles) plus the phonon sideband:

    total_bulk  = gamma_c + gamma_d + gamma_psb
    coupled     = f_c * gamma_c + f_d * gamma_d + gamma_psb

with the cavity acting only on the ZPL transitions through the Purcell
factors ``f_c`` and ``f_d``.  Normalizing by the bulk rate gives the
measurable enhancement ratio

    zeta = f_c * eta_dw * eta_br + f_d * eta_dw * (1 - eta_br) + (1 - eta_dw)

where ``eta_dw`` is the coherent ZPL fraction of total emission and
``eta_br`` the C/D branching ratio.  The dipole projections are the linear
forms ``f_c = F cos(theta)`` and ``f_d = F sin(theta)`` (implemented as
written, not squared), so ``tan(theta) = f_d / f_c``.

All angles cross API boundaries in degrees; conversion to radians happens
internally.  Every operation here is a pure function of immutable value
types and safe under arbitrary concurrency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateBranchingError,
    DegenerateDipoleError,
    DomainError,
    UnreliableRatioError,
)
from .traces import SpectrumTrace

# Branch-weight denominators below this are treated as degenerate.
_DEGENERATE_WEIGHT = 1e-9

# Default coherent ZPL fraction for SnV-; callers must still pass it explicitly.
DEFAULT_ETA_DW = 0.57

DIPOLE_FAMILIES = ("primary", "orthogonal")


def _check_fraction(value: float, name: str) -> float:
    value = float(value)
    if not (0.0 < value < 1.0) or not math.isfinite(value):
        raise DomainError(f"{name} must lie strictly inside (0, 1), got {value!r}")
    return value


@dataclass(frozen=True)
class EmitterPhysics:
    """Intrinsic rate budget of one emitter (rates in 1/ns).

    Carries both parameterizations (raw rates and the eta fractions); they
    must agree to 1e-12 relative.  Use :meth:`from_rates` or
    :meth:`from_budget` instead of spelling out all five fields.
    """

    gamma_c: float
    gamma_d: float
    gamma_psb: float
    eta_dw: float
    eta_br: float

    def __post_init__(self):
        for name in ("gamma_c", "gamma_d", "gamma_psb"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise DomainError(f"{name} must be a finite non-negative rate, got {value!r}")
        _check_fraction(self.eta_dw, "eta_dw")
        _check_fraction(self.eta_br, "eta_br")
        zpl = self.gamma_c + self.gamma_d
        total = zpl + self.gamma_psb
        if total <= 0 or zpl <= 0:
            raise DomainError("emitter must have a positive ZPL rate")
        if not math.isclose(self.eta_dw, zpl / total, rel_tol=1e-12):
            raise DomainError("eta_dw inconsistent with (gamma_c + gamma_d) / total rate")
        if not math.isclose(self.eta_br, self.gamma_c / zpl, rel_tol=1e-12):
            raise DomainError("eta_br inconsistent with gamma_c / (gamma_c + gamma_d)")

    @classmethod
    def from_rates(cls, gamma_c: float, gamma_d: float, gamma_psb: float) -> "EmitterPhysics":
        zpl = gamma_c + gamma_d
        total = zpl + gamma_psb
        if zpl <= 0 or total <= 0:
            raise DomainError("rates must give a positive ZPL budget")
        return cls(gamma_c, gamma_d, gamma_psb, zpl / total, gamma_c / zpl)

    @classmethod
    def from_budget(cls, total_bulk_rate: float, eta_dw: float, eta_br: float) -> "EmitterPhysics":
        """Build from the bulk rate (1/ns) and the two emission fractions."""
        if not math.isfinite(total_bulk_rate) or total_bulk_rate <= 0:
            raise DomainError(f"total_bulk_rate must be positive, got {total_bulk_rate!r}")
        _check_fraction(eta_dw, "eta_dw")
        _check_fraction(eta_br, "eta_br")
        gamma_c = total_bulk_rate * eta_dw * eta_br
        gamma_d = total_bulk_rate * eta_dw * (1.0 - eta_br)
        gamma_psb = total_bulk_rate * (1.0 - eta_dw)
        return cls(gamma_c, gamma_d, gamma_psb, eta_dw, eta_br)

    @property
    def total_bulk_rate(self) -> float:
        return self.gamma_c + self.gamma_d + self.gamma_psb


@dataclass(frozen=True)
class DeviceGeometry:
    """Orientation and optical properties of one fabricated cavity.

    ``pattern_angle_deg`` is the designed angle of the cavity axis relative
    to the <100> crystal axis (0 for the parallel device, 55 for the angled
    one); ``fab_offset_deg`` is the collective lithography offset shared by
    all devices on the chip.  ``dipole_family`` selects which of the two
    orthogonal dipole orientations the addressed emitter belongs to; the
    orthogonal family adds 90 degrees to the mode angle.
    """

    pattern_angle_deg: float
    fab_offset_deg: float = 0.0
    dipole_family: str = "primary"
    quality_factor: float | None = None
    resonance_wavelength_nm: float | None = None
    mode_volume: float | None = None  # in (lambda/n)^3, informational only

    def __post_init__(self):
        if not (0.0 <= self.pattern_angle_deg < 90.0):
            raise DomainError(
                f"pattern_angle_deg must lie in [0, 90), got {self.pattern_angle_deg!r}"
            )
        if self.dipole_family not in DIPOLE_FAMILIES:
            raise DomainError(
                f"dipole_family must be one of {DIPOLE_FAMILIES}, got {self.dipole_family!r}"
            )
        if self.quality_factor is not None and self.quality_factor <= 0:
            raise DomainError("quality_factor must be positive when given")
        if self.resonance_wavelength_nm is not None and self.resonance_wavelength_nm <= 0:
            raise DomainError("resonance_wavelength_nm must be positive when given")

    @property
    def nominal_mode_angle_deg(self) -> float:
        """Signed dipole-mode angle at zero fabrication offset."""
        angle = 45.0 - self.pattern_angle_deg
        if self.dipole_family == "orthogonal":
            angle += 90.0
        return angle


@dataclass(frozen=True)
class EnhancementPair:
    """Fitted enhancement ratios (zeta) for one emitter in one device."""

    zeta_c: float
    zeta_d: float
    geometry: DeviceGeometry
    sigma_zeta_c: float = 0.0
    sigma_zeta_d: float = 0.0
    label: str = ""

    def __post_init__(self):
        for name in ("zeta_c", "zeta_d"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise DomainError(f"{name} must be a positive finite ratio, got {value!r}")
        for name in ("sigma_zeta_c", "sigma_zeta_d"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise DomainError(f"{name} must be non-negative, got {value!r}")

    def check_floor(self, eta_dw: float) -> None:
        """Reject ratios below the analytic floor 1 - eta_dw (Purcell factor < 0)."""
        floor = 1.0 - _check_fraction(eta_dw, "eta_dw")
        if self.zeta_c < floor or self.zeta_d < floor:
            raise DomainError(
                f"zeta values ({self.zeta_c}, {self.zeta_d}) below the analytic floor "
                f"{floor} for eta_dw={eta_dw}"
            )


@dataclass(frozen=True)
class EmitterSolution:
    """Per-emitter output of the geometry/branching solve."""

    theta_deg: float
    f_total: float
    f_c: float
    f_d: float
    sigma_f_c: float | None = None
    sigma_f_d: float | None = None
    label: str = ""

    def __post_init__(self):
        if self.f_c < 0 or self.f_d < 0:
            raise DomainError("Purcell factors must be non-negative")
        # Linear-projection consistency: f_c = F cos(theta), f_d = F sin(theta).
        th = math.radians(self.theta_deg)
        if not math.isclose(self.f_c, self.f_total * math.cos(th), rel_tol=1e-10, abs_tol=1e-12):
            raise DomainError("f_c inconsistent with f_total * cos(theta)")
        if not math.isclose(self.f_d, self.f_total * math.sin(th), rel_tol=1e-10, abs_tol=1e-12):
            raise DomainError("f_d inconsistent with f_total * sin(theta)")


@dataclass(frozen=True)
class PurcellSolution:
    """Solved branching ratio, fabrication offset, and per-emitter Purcell factors."""

    eta_br: float
    phi_deg: float
    per_emitter: tuple[EmitterSolution, ...]
    residual_deg: float
    method: str  # "pair" or "consensus"
    eta_dw: float
    bracket: tuple[float, float]
    tol: float = 1e-6
    grid_step: float | None = None
    sigma_eta_br: float | None = None
    sigma_phi_deg: float | None = None
    sigma_valid: bool = True


def rate_from_lifetime(tau_ns: float) -> float:
    """Spontaneous emission rate (1/ns) from a measured decay lifetime (ns)."""
    if not math.isfinite(tau_ns) or tau_ns <= 0:
        raise DomainError(f"lifetime must be positive, got {tau_ns!r}")
    return 1.0 / tau_ns


def total_rate(physics: EmitterPhysics, f_c: float, f_d: float) -> float:
    """Cavity-coupled emission rate f_c*gamma_c + f_d*gamma_d + gamma_psb (1/ns)."""
    if f_c < 0 or f_d < 0:
        raise DomainError(f"Purcell factors must be non-negative, got ({f_c!r}, {f_d!r})")
    return f_c * physics.gamma_c + f_d * physics.gamma_d + physics.gamma_psb


def enhancement_ratio(f_c: float, f_d: float, eta_dw: float, eta_br: float) -> float:
    """Coupled-to-bulk rate ratio for given Purcell factors and emission fractions."""
    if f_c < 0 or f_d < 0:
        raise DomainError(f"Purcell factors must be non-negative, got ({f_c!r}, {f_d!r})")
    eta_dw = _check_fraction(eta_dw, "eta_dw")
    eta_br = _check_fraction(eta_br, "eta_br")
    return f_c * eta_dw * eta_br + f_d * eta_dw * (1.0 - eta_br) + (1.0 - eta_dw)


def _branch_weights(eta_dw: float, eta_br: float) -> tuple[float, float]:
    eta_dw = _check_fraction(eta_dw, "eta_dw")
    eta_br = _check_fraction(eta_br, "eta_br")
    w_c = eta_dw * eta_br
    w_d = eta_dw * (1.0 - eta_br)
    if w_c < _DEGENERATE_WEIGHT or w_d < _DEGENERATE_WEIGHT:
        raise DegenerateBranchingError(
            f"branch weight vanished (eta_dw={eta_dw}, eta_br={eta_br}); "
            "Purcell factors are not recoverable"
        )
    return w_c, w_d


def purcell_from_zeta(
    pair: EnhancementPair, eta_dw: float, eta_br: float
) -> tuple[float, float]:
    """Invert the enhancement ratios into (f_c, f_d).

    Each ratio is inverted with the opposite transition's Purcell factor
    pinned to 1 (the cavity is resonant with only one transition at a time):

        f_c = (zeta_c + eta_dw*eta_br - 1) / (eta_dw*eta_br)
        f_d = (zeta_d + eta_dw*(1 - eta_br) - 1) / (eta_dw*(1 - eta_br))
    """
    w_c, w_d = _branch_weights(eta_dw, eta_br)
    pair.check_floor(eta_dw)
    num_c = pair.zeta_c + w_c - 1.0
    num_d = pair.zeta_d + w_d - 1.0
    if num_c < 0 or num_d < 0:
        raise DomainError(
            f"zeta values ({pair.zeta_c}, {pair.zeta_d}) imply negative Purcell factors "
            f"at eta_dw={eta_dw}, eta_br={eta_br}"
        )
    return num_c / w_c, num_d / w_d


def tan_theta(pair: EnhancementPair, eta_dw: float, eta_br: float) -> float:
    """Ratio f_d/f_c written directly in terms of the measured zeta values."""
    w_c, w_d = _branch_weights(eta_dw, eta_br)
    pair.check_floor(eta_dw)
    num_c = pair.zeta_c + w_c - 1.0
    num_d = pair.zeta_d + w_d - 1.0
    if num_c < _DEGENERATE_WEIGHT:
        raise DegenerateDipoleError(
            f"zeta_c={pair.zeta_c} leaves no C-transition enhancement at "
            f"eta_dw={eta_dw}, eta_br={eta_br}; dipole angle is unbounded"
        )
    if num_d < 0:
        raise DomainError(
            f"zeta_d={pair.zeta_d} below the analytic floor at eta_br={eta_br}"
        )
    return (num_d / num_c) * (eta_br / (1.0 - eta_br))


def fold_angle_deg(angle_deg: float) -> float:
    """Fold any angle to its unsigned equivalent in [0, 90] degrees."""
    a = abs(angle_deg) % 180.0
    return 180.0 - a if a > 90.0 else a


def theta_from_geometry(geom: DeviceGeometry) -> float:
    """Unsigned dipole-mode angle (degrees, in [0, 90]) for a device geometry.

    The signed angle is 45 - (pattern + offset), plus 90 for the orthogonal
    dipole family; zeta ratios cannot distinguish its sign, so the result is
    folded into [0, 90].
    """
    signed = geom.nominal_mode_angle_deg - geom.fab_offset_deg
    return fold_angle_deg(signed)


def fourier_limit_linewidth(tau_ns: float) -> float:
    """Lifetime-limited Lorentzian FWHM, 1/(2*pi*tau), in MHz."""
    if not math.isfinite(tau_ns) or tau_ns <= 0:
        raise DomainError(f"lifetime must be positive, got {tau_ns!r}")
    return 1.0 / (2.0 * math.pi * tau_ns * 1e-9) / 1e6


def _windowed_amplitude(
    trace: SpectrumTrace, line_nm: float, window_nm: float
) -> tuple[float, float]:
    """Baseline-subtracted peak amplitude in the window, plus a noise estimate.

    The baseline is the straight line through the mean of the window-edge
    samples on each side; the noise estimate is the standard deviation of the
    edge samples about that line.
    """
    lo = line_nm - 0.5 * window_nm
    hi = line_nm + 0.5 * window_nm
    lam = trace.wavelength_nm
    if lam[0] > lo or lam[-1] < hi:
        raise DomainError(
            f"spectrum [{lam[0]}, {lam[-1]}] nm does not cover the window [{lo}, {hi}] nm"
        )
    mask = (lam >= lo) & (lam <= hi)
    xs = lam[mask]
    ys = trace.counts[mask]
    if xs.size < 8:
        raise DomainError("window contains fewer than 8 samples")
    n_edge = max(2, xs.size // 10)
    x_lo, y_lo = xs[:n_edge].mean(), ys[:n_edge].mean()
    x_hi, y_hi = xs[-n_edge:].mean(), ys[-n_edge:].mean()
    slope = (y_hi - y_lo) / (x_hi - x_lo) if x_hi != x_lo else 0.0
    baseline = y_lo + slope * (xs - x_lo)
    resid = ys - baseline
    edge_noise = float(np.concatenate([resid[:n_edge], resid[-n_edge:]]).std())
    return float(resid.max()), edge_noise


def pl_enhancement(
    on_res: SpectrumTrace,
    off_res: SpectrumTrace,
    line_nm: float,
    window_nm: float,
) -> float:
    """Ratio of baseline-subtracted peak amplitudes, cavity on vs off resonance."""
    if window_nm <= 0:
        raise DomainError("window_nm must be positive")
    amp_on, _ = _windowed_amplitude(on_res, line_nm, window_nm)
    amp_off, noise_off = _windowed_amplitude(off_res, line_nm, window_nm)
    if amp_off <= 3.0 * noise_off or amp_off <= 0:
        raise UnreliableRatioError(
            f"off-resonance amplitude {amp_off:.4g} is at or below the noise floor "
            f"{3.0 * noise_off:.4g}"
        )
    return amp_on / amp_off
