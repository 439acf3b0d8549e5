"""Time-tag ingestion and histogramming.

Two on-disk formats are supported: a binary stream of little-endian
``(u8 channel, u64 timestamp_ps)`` records behind a 16-byte magic header,
and a CSV alternative with columns ``channel,timestamp_ps``.  Ingestion is
single pass; distinct files may be read concurrently.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import DataFormatError, DomainError
from .traces import LifetimeTrace

MAGIC = b"SNVTIMETAGSTREAM"  # exactly 16 bytes
_RECORD_DTYPE = np.dtype([("channel", "u1"), ("timestamp_ps", "<u8")])


class TimeTagRecord(NamedTuple):
    channel: int
    timestamp_ps: int


@dataclass(frozen=True)
class PulseParams:
    """Excitation pulse train: sync period and pulse width, both in ns."""

    period_ns: float
    pulse_width_ns: float

    def __post_init__(self):
        if not (0.0 < self.pulse_width_ns < self.period_ns):
            raise DomainError(
                f"need 0 < pulse_width_ns < period_ns, got "
                f"({self.pulse_width_ns!r}, {self.period_ns!r})"
            )

    @property
    def period_ps(self) -> int:
        return int(round(self.period_ns * 1000.0))


@dataclass
class TimeTagStream:
    """Columnar stream of detection records (one channel and timestamp per tag)."""

    channels: np.ndarray
    timestamps_ps: np.ndarray

    def __post_init__(self):
        self.channels = np.asarray(self.channels, dtype=np.uint8)
        self.timestamps_ps = np.asarray(self.timestamps_ps, dtype=np.int64)
        if self.channels.shape != self.timestamps_ps.shape or self.channels.ndim != 1:
            raise DomainError("channels and timestamps must be equal-length 1-D arrays")
        if np.any(self.timestamps_ps < 0):
            raise DomainError("timestamps must be non-negative picoseconds")
        for ch in np.unique(self.channels):
            ts = self.timestamps_ps[self.channels == ch]
            if ts.size > 1 and np.any(np.diff(ts) < 0):
                raise DomainError(f"timestamps on channel {ch} are not non-decreasing")

    def __len__(self) -> int:
        return self.channels.size

    def __iter__(self):
        for ch, ts in zip(self.channels, self.timestamps_ps):
            yield TimeTagRecord(int(ch), int(ts))


def write_timetags_binary(path, stream: TimeTagStream) -> None:
    records = np.empty(len(stream), dtype=_RECORD_DTYPE)
    records["channel"] = stream.channels
    records["timestamp_ps"] = stream.timestamps_ps.astype(np.uint64)
    Path(path).write_bytes(MAGIC + records.tobytes())


def read_timetags_binary(path) -> TimeTagStream:
    raw = Path(path).read_bytes()
    if len(raw) < len(MAGIC) or raw[: len(MAGIC)] != MAGIC:
        raise DataFormatError(f"{path}: missing time-tag magic header")
    body = raw[len(MAGIC) :]
    if len(body) % _RECORD_DTYPE.itemsize:
        raise DataFormatError(f"{path}: truncated record at end of stream")
    records = np.frombuffer(body, dtype=_RECORD_DTYPE)
    return TimeTagStream(records["channel"].copy(), records["timestamp_ps"].astype(np.int64))


def write_timetags_csv(path, stream: TimeTagStream) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["channel", "timestamp_ps"])
        for rec in stream:
            writer.writerow([rec.channel, rec.timestamp_ps])


def read_timetags_csv(path) -> TimeTagStream:
    channels: list[int] = []
    timestamps: list[int] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["channel", "timestamp_ps"]:
            raise DataFormatError(f"{path}: expected header 'channel,timestamp_ps'")
        for lineno, row in enumerate(reader, start=2):
            if not row or row[0].startswith("#"):
                continue
            try:
                channels.append(int(row[0]))
                timestamps.append(int(row[1]))
            except (ValueError, IndexError) as exc:
                raise DataFormatError(f"{path}:{lineno}: bad time-tag row {row!r}") from exc
    return TimeTagStream(np.array(channels, dtype=np.uint8), np.array(timestamps, dtype=np.int64))


def bin_timetags(
    tags,
    pulse: PulseParams,
    bin_width_ps: int,
    channel: int | None = None,
) -> LifetimeTrace:
    """Fold timestamps modulo the sync period and histogram them.

    ``tags`` may be a :class:`TimeTagStream` (optionally filtered to one
    channel) or a bare array of timestamps in ps.  Every tag lands in
    exactly one bin, so total counts are conserved.  An empty stream yields
    an all-zero trace, not an error.
    """
    bin_width_ps = int(bin_width_ps)
    if bin_width_ps <= 0:
        raise DomainError("bin_width_ps must be positive")
    period_ps = pulse.period_ps
    if bin_width_ps > period_ps:
        raise DomainError(f"bin width {bin_width_ps} ps exceeds the period {period_ps} ps")
    if period_ps % bin_width_ps:
        raise DomainError(
            f"bin width {bin_width_ps} ps does not divide the period {period_ps} ps evenly"
        )
    if isinstance(tags, TimeTagStream):
        ts = tags.timestamps_ps
        if channel is not None:
            ts = ts[tags.channels == channel]
    else:
        ts = np.asarray(tags, dtype=np.int64)
    n_bins = period_ps // bin_width_ps
    if ts.size == 0:
        return LifetimeTrace(bin_width_ps, np.zeros(n_bins, dtype=np.int64))
    folded = np.mod(ts, period_ps)
    counts = np.bincount(folded // bin_width_ps, minlength=n_bins)
    return LifetimeTrace(bin_width_ps, counts)


def downsample(trace: LifetimeTrace, factor: int) -> LifetimeTrace:
    """Aggregate ``factor`` adjacent bins by summation.

    Counts are conserved exactly except for a trailing partial group, which
    is dropped and recorded in ``tail_bins_dropped``.
    """
    factor = int(factor)
    if factor < 1:
        raise DomainError("downsample factor must be >= 1")
    if factor == 1:
        return LifetimeTrace(
            trace.bin_width_ps,
            trace.counts.copy(),
            trace.t0_offset_ps,
            trace.tail_bins_dropped,
        )
    n_keep = (trace.n_bins // factor) * factor
    tail = trace.n_bins - n_keep
    summed = trace.counts[:n_keep].reshape(-1, factor).sum(axis=1)
    return LifetimeTrace(
        trace.bin_width_ps * factor,
        summed,
        trace.t0_offset_ps,
        trace.tail_bins_dropped + tail,
    )


def auto_downsample(
    trace: LifetimeTrace, target_peak: int = 600, min_bins: int = 128
) -> LifetimeTrace:
    """Coarsen a sparse histogram until its peak bin is statistically solid.

    Least-squares decay fits with sqrt(counts) weights acquire a percent-level
    bias when the fit window is dominated by near-empty bins; summing adjacent
    bins restores per-bin counts without altering the decay constant.
    """
    out = trace
    while out.counts.size and out.counts.max() < target_peak and out.n_bins // 2 >= min_bins:
        out = downsample(out, 2)
    return out
