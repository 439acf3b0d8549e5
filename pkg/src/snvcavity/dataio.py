"""CSV schemas and atomic report writing.

Schemas (headers are fixed, ``#`` lines are comments and may carry the
resolved run configuration):

- spectra:          wavelength_nm, counts[, background]
- tuning series:    cavity_wavelength_nm, rate_per_ns, sigma
- lifetime traces:  bin_ps, count            (bin start offsets, uniform)
- trace manifests:  cavity_wavelength_nm, trace_csv
- device surveys:   device_id, lattice_constant_nm, resonance_wavelength_nm,
                    quality_factor           (last two may be blank)
"""

from __future__ import annotations

import csv
import io
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import DataFormatError, DomainError
from .traces import LifetimeTrace, SpectrumTrace, TuningSeries


def atomic_write_text(path, text: str) -> None:
    """Write via a temp file in the same directory, then rename into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_csv(header, rows, comments=()) -> str:
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else v for v in row])
    return buf.getvalue()


def write_csv(path, header, rows, comments=()) -> None:
    atomic_write_text(path, format_csv(header, rows, comments))


def _read_rows(path, expected_prefix: list[str], n_min: int):
    """Yield (lineno, row) after validating the header; skip comments/blanks."""
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise DataFormatError(f"{path}: {exc.strerror or exc}") from exc
    with fh:
        reader = csv.reader(fh)
        header = None
        for lineno, row in enumerate(reader, start=1):
            if not row or row[0].lstrip().startswith("#"):
                continue
            if header is None:
                header = [h.strip() for h in row]
                if header[: len(expected_prefix)] != expected_prefix:
                    raise DataFormatError(
                        f"{path}:{lineno}: expected header starting with "
                        f"{','.join(expected_prefix)}, got {','.join(header)}"
                    )
                continue
            if len(row) < n_min:
                raise DataFormatError(f"{path}:{lineno}: expected >= {n_min} columns")
            yield lineno, row


def _parse_float(path, lineno, name, text) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise DataFormatError(f"{path}:{lineno}: bad {name} value {text!r}") from exc


def read_spectrum_csv(path) -> SpectrumTrace:
    lam, counts, background = [], [], []
    has_background = None
    for lineno, row in _read_rows(path, ["wavelength_nm", "counts"], 2):
        lam.append(_parse_float(path, lineno, "wavelength_nm", row[0]))
        counts.append(_parse_float(path, lineno, "counts", row[1]))
        if has_background is None:
            has_background = len(row) > 2 and row[2].strip() != ""
        if has_background:
            if len(row) < 3 or row[2].strip() == "":
                raise DataFormatError(f"{path}:{lineno}: missing background value")
            background.append(_parse_float(path, lineno, "background", row[2]))
    if not lam:
        raise DataFormatError(f"{path}: no spectrum rows found")
    if any(c < 0 for c in counts):
        raise DataFormatError(f"{path}: raw spectra must have non-negative counts")
    try:
        return SpectrumTrace(
            np.array(lam), np.array(counts), np.array(background) if background else None
        )
    except DomainError as exc:
        raise DataFormatError(f"{path}: {exc}") from exc


def write_spectrum_csv(path, trace: SpectrumTrace, comments=()) -> None:
    if trace.background_counts is not None:
        header = ["wavelength_nm", "counts", "background"]
        rows = zip(trace.wavelength_nm, trace.counts, trace.background_counts)
    else:
        header = ["wavelength_nm", "counts"]
        rows = zip(trace.wavelength_nm, trace.counts)
    write_csv(path, header, ([f"{v:.9g}" for v in row] for row in rows), comments)


def read_tuning_csv(path) -> TuningSeries:
    lam, rate, sigma = [], [], []
    for lineno, row in _read_rows(path, ["cavity_wavelength_nm", "rate_per_ns"], 2):
        lam.append(_parse_float(path, lineno, "cavity_wavelength_nm", row[0]))
        rate.append(_parse_float(path, lineno, "rate_per_ns", row[1]))
        if len(row) > 2 and row[2].strip() != "":
            sigma.append(_parse_float(path, lineno, "sigma", row[2]))
        else:
            sigma.append(0.0)
    if not lam:
        raise DataFormatError(f"{path}: no tuning rows found")
    order = np.argsort(lam)
    try:
        return TuningSeries(
            np.array(lam)[order], np.array(rate)[order], np.array(sigma)[order]
        )
    except DomainError as exc:
        raise DataFormatError(f"{path}: {exc}") from exc


def write_tuning_csv(path, series: TuningSeries, comments=()) -> None:
    rows = (
        [f"{w:.9g}", f"{r:.9g}", f"{s:.9g}"]
        for w, r, s in zip(series.cavity_wavelength_nm, series.rate_per_ns, series.rate_sigma)
    )
    write_csv(path, ["cavity_wavelength_nm", "rate_per_ns", "sigma"], rows, comments)


def read_lifetime_csv(path) -> LifetimeTrace:
    starts, counts = [], []
    for lineno, row in _read_rows(path, ["bin_ps", "count"], 2):
        starts.append(_parse_float(path, lineno, "bin_ps", row[0]))
        counts.append(_parse_float(path, lineno, "count", row[1]))
    if len(starts) < 2:
        raise DataFormatError(f"{path}: need at least two histogram bins")
    starts_arr = np.array(starts)
    widths = np.diff(starts_arr)
    if np.any(widths <= 0) or not np.allclose(widths, widths[0], rtol=1e-9, atol=1e-6):
        raise DataFormatError(f"{path}: bin_ps values must be uniformly spaced")
    try:
        return LifetimeTrace(float(widths[0]), np.array(counts), t0_offset_ps=float(starts_arr[0]))
    except DomainError as exc:
        raise DataFormatError(f"{path}: {exc}") from exc


def write_lifetime_csv(path, trace: LifetimeTrace, comments=()) -> None:
    starts = trace.t0_offset_ps + np.arange(trace.n_bins) * trace.bin_width_ps
    rows = ([f"{s:.9g}", str(int(c))] for s, c in zip(starts, trace.counts))
    write_csv(path, ["bin_ps", "count"], rows, comments)


def read_trace_manifest(path) -> list[tuple[float, Path]]:
    """Manifest rows: (cavity_wavelength_nm, trace path relative to the manifest)."""
    base = Path(path).parent
    entries = []
    for lineno, row in _read_rows(path, ["cavity_wavelength_nm", "trace_csv"], 2):
        lam = _parse_float(path, lineno, "cavity_wavelength_nm", row[0])
        entries.append((lam, base / row[1].strip()))
    if not entries:
        raise DataFormatError(f"{path}: empty trace manifest")
    return entries


def is_trace_manifest(path) -> bool:
    """True when the first non-comment row names the manifest columns."""
    try:
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                return [h.strip() for h in row[:2]] == ["cavity_wavelength_nm", "trace_csv"]
    except OSError as exc:
        raise DataFormatError(f"{path}: {exc.strerror or exc}") from exc
    return False
