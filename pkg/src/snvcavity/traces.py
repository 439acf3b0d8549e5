"""Measurement containers shared by the fitters, synthesizer, and CLI."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError


def _as_float_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise DomainError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains non-finite values")
    return arr


@dataclass
class SpectrumTrace:
    """Counts (or reflectivity) versus wavelength.

    Raw spectra carry non-negative counts; background-corrected traces may
    hold arbitrary finite values.
    """

    wavelength_nm: np.ndarray
    counts: np.ndarray
    background_counts: np.ndarray | None = None

    def __post_init__(self):
        self.wavelength_nm = _as_float_array(self.wavelength_nm, "wavelength_nm")
        self.counts = _as_float_array(self.counts, "counts")
        if self.wavelength_nm.size != self.counts.size:
            raise DomainError("wavelength_nm and counts must have equal length")
        if self.wavelength_nm.size >= 2 and not np.all(np.diff(self.wavelength_nm) > 0):
            raise DomainError("wavelength_nm must be strictly increasing")
        if self.background_counts is not None:
            self.background_counts = _as_float_array(self.background_counts, "background_counts")
            if self.background_counts.size != self.wavelength_nm.size:
                raise DomainError("background_counts must align with wavelength_nm")

    def __len__(self) -> int:
        return self.wavelength_nm.size


@dataclass
class TuningSeries:
    """Spontaneous emission rate versus cavity resonance wavelength."""

    cavity_wavelength_nm: np.ndarray
    rate_per_ns: np.ndarray
    rate_sigma: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        self.cavity_wavelength_nm = _as_float_array(self.cavity_wavelength_nm, "cavity_wavelength_nm")
        self.rate_per_ns = _as_float_array(self.rate_per_ns, "rate_per_ns")
        if self.rate_sigma is None:
            self.rate_sigma = np.zeros_like(self.rate_per_ns)
        self.rate_sigma = _as_float_array(self.rate_sigma, "rate_sigma")
        n = self.cavity_wavelength_nm.size
        if self.rate_per_ns.size != n or self.rate_sigma.size != n:
            raise DomainError("tuning series columns must have equal length")
        if np.any(self.rate_per_ns <= 0):
            raise DomainError("rates must be positive")
        if np.any(self.rate_sigma < 0):
            raise DomainError("rate_sigma must be non-negative")

    def __len__(self) -> int:
        return self.cavity_wavelength_nm.size


@dataclass
class LifetimeTrace:
    """Histogram of photon arrival times folded over the excitation period."""

    bin_width_ps: float
    counts: np.ndarray
    t0_offset_ps: float = 0.0
    tail_bins_dropped: int = 0  # raw bins discarded by an uneven downsample

    def __post_init__(self):
        self.bin_width_ps = float(self.bin_width_ps)
        if self.bin_width_ps <= 0:
            raise DomainError("bin_width_ps must be positive")
        arr = np.asarray(self.counts)
        if arr.ndim != 1:
            raise DomainError("counts must be one-dimensional")
        if arr.size and np.any(np.asarray(arr, dtype=float) < 0):
            raise DomainError("counts must be non-negative")
        self.counts = arr.astype(np.int64)

    @property
    def n_bins(self) -> int:
        return self.counts.size

    @property
    def total_counts(self) -> int:
        return int(self.counts.sum())

    @property
    def time_ns(self) -> np.ndarray:
        """Bin-center times in ns."""
        centers = self.t0_offset_ps + (np.arange(self.counts.size) + 0.5) * self.bin_width_ps
        return centers / 1000.0

    def __len__(self) -> int:
        return self.counts.size
