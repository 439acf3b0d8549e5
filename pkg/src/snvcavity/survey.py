"""Device-survey statistics: resonance wavelengths and quality factors."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import DataFormatError


@dataclass(frozen=True)
class DeviceSurveyRow:
    device_id: str
    lattice_constant_nm: float
    resonance_wavelength_nm: float | None = None
    quality_factor: float | None = None

    @property
    def has_resonance(self) -> bool:
        return self.resonance_wavelength_nm is not None


@dataclass(frozen=True)
class SurveyGroupStats:
    """Mean +/- sample standard deviation for one lattice-constant group.

    Standard deviations are None for groups with a single resonance; the
    means are None when a group has no resonances at all.
    """

    label: str
    n_devices: int
    n_resonances: int
    wavelength_mean: float | None
    wavelength_std: float | None
    q_mean: float | None
    q_std: float | None


def _mean_std(values: list[float]) -> tuple[float | None, float | None]:
    if not values:
        return None, None
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    std = float(arr.std(ddof=1)) if arr.size >= 2 else None
    return mean, std


def _stats(label: str, rows: list[DeviceSurveyRow]) -> SurveyGroupStats:
    lam = [r.resonance_wavelength_nm for r in rows if r.resonance_wavelength_nm is not None]
    qs = [r.quality_factor for r in rows if r.quality_factor is not None]
    lam_mean, lam_std = _mean_std(lam)
    q_mean, q_std = _mean_std(qs)
    return SurveyGroupStats(
        label=label,
        n_devices=len(rows),
        n_resonances=sum(1 for r in rows if r.has_resonance),
        wavelength_mean=lam_mean,
        wavelength_std=lam_std,
        q_mean=q_mean,
        q_std=q_std,
    )


def survey_statistics(rows) -> tuple[SurveyGroupStats, list[SurveyGroupStats]]:
    """Overall statistics plus per-lattice-constant groups (sorted by constant)."""
    rows = list(rows)
    overall = _stats("all", rows)
    groups = []
    for constant in sorted({r.lattice_constant_nm for r in rows}):
        members = [r for r in rows if r.lattice_constant_nm == constant]
        groups.append(_stats(f"{constant:g}", members))
    return overall, groups


def read_survey_csv(path) -> list[DeviceSurveyRow]:
    rows: list[DeviceSurveyRow] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = None
        for lineno, row in enumerate(reader, start=1):
            if not row or row[0].lstrip().startswith("#"):
                continue
            if header is None:
                header = [h.strip() for h in row]
                if header[:2] != ["device_id", "lattice_constant_nm"]:
                    raise DataFormatError(
                        f"{path}:{lineno}: expected header device_id,lattice_constant_nm,"
                        "resonance_wavelength_nm,quality_factor"
                    )
                continue
            try:
                lattice = float(row[1])
                lam = float(row[2]) if len(row) > 2 and row[2].strip() else None
                q = float(row[3]) if len(row) > 3 and row[3].strip() else None
            except ValueError as exc:
                raise DataFormatError(f"{path}:{lineno}: bad survey row {row!r}") from exc
            if (lam is not None and not math.isfinite(lam)) or (
                q is not None and not math.isfinite(q)
            ):
                raise DataFormatError(f"{path}:{lineno}: non-finite survey value")
            rows.append(DeviceSurveyRow(row[0], lattice, lam, q))
    if not rows:
        raise DataFormatError(f"{path}: no survey rows found")
    return rows
