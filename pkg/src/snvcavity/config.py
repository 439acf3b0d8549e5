"""Sectioned key=value configuration for the CLI.

Config files are flat INI (parsed with :mod:`configparser`, no
interpolation).  Every key can be mirrored by a CLI flag; flags take
precedence over file values, and defaults are applied for anything omitted.
``resolved_items()`` returns the fully expanded configuration so reports
can embed it.

Analysis config::

    [analysis]
    eta_dw = 0.57
    out_dir = reports

    [solver]
    bracket_lo = 0.01
    bracket_hi = 0.99
    tol = 1e-6
    grid_step = 1e-3

    [device:parallel]
    pattern_angle_deg = 0

    [emitter:main]
    device = parallel
    dipole_family = primary
    zeta_c = 4.672          ; either literal zetas ...
    zeta_d = 1.985
    sigma_zeta_c = 0.0
    sigma_zeta_d = 0.0
    ; ... or a tuning-series fit:
    ; tuning_csv = parallel_tuning.csv
    ; n_peaks = 2
    ; init_centers = 619.1, 620.19
    ; peak_c = 1
    ; peak_d = 2

Synthesis scenario::

    [physics]
    total_rate_per_ns = 0.10625
    eta_dw = 0.57
    eta_br = 0.7815

    [pulse]
    period_ns = 303.04
    pulse_width_ns = 16.0

    [synth]
    cavity_fwhm_nm = 0.157
    lambda_c_nm = 619.10
    lambda_d_nm = 620.186
    counts_per_trace = 100000
    background_fraction = 0.0
    seed = 1
    bin_width_ps = 32

    [device:parallel]
    pattern_angle_deg = 0
    fab_offset_deg = 1.1
    dipole_family = primary
    f_peak = 12.8376
    grid_start_nm = 618.3
    grid_stop_nm = 621.0
    grid_points = 45
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataFormatError, DomainError
from .model import DEFAULT_ETA_DW, DeviceGeometry, EmitterPhysics
from .solvers import DEFAULT_BRACKET, DEFAULT_GRID_STEP, DEFAULT_TOL
from .synth import DEFAULT_COUNTS_PER_TRACE, SynthScenario
from .timetags import PulseParams


@dataclass
class EmitterEntry:
    """One emitter's zeta source: literal values or a tuning CSV to fit."""

    name: str
    geometry: DeviceGeometry
    device_name: str
    zeta_c: float | None = None
    zeta_d: float | None = None
    sigma_zeta_c: float = 0.0
    sigma_zeta_d: float = 0.0
    tuning_csv: Path | None = None
    n_peaks: int | None = None
    init_centers: tuple[float, ...] = ()
    peak_c: int | None = None  # 1-based peak index in the multi-Lorentzian fit
    peak_d: int | None = None

    @property
    def from_fit(self) -> bool:
        return self.tuning_csv is not None


@dataclass
class AnalysisConfig:
    eta_dw: float = DEFAULT_ETA_DW
    out_dir: Path = Path("reports")
    bracket: tuple[float, float] = DEFAULT_BRACKET
    tol: float = DEFAULT_TOL
    grid_step: float = DEFAULT_GRID_STEP
    emitters: list[EmitterEntry] = field(default_factory=list)

    def resolved_items(self) -> list[tuple[str, str]]:
        items = [
            ("analysis.eta_dw", f"{self.eta_dw:g}"),
            ("analysis.out_dir", str(self.out_dir)),
            ("solver.bracket_lo", f"{self.bracket[0]:g}"),
            ("solver.bracket_hi", f"{self.bracket[1]:g}"),
            ("solver.tol", f"{self.tol:g}"),
            ("solver.grid_step", f"{self.grid_step:g}"),
        ]
        for em in self.emitters:
            prefix = f"emitter.{em.name}"
            items.append((f"{prefix}.device", em.device_name))
            items.append((f"{prefix}.pattern_angle_deg", f"{em.geometry.pattern_angle_deg:g}"))
            items.append((f"{prefix}.dipole_family", em.geometry.dipole_family))
            if em.from_fit:
                items.append((f"{prefix}.tuning_csv", str(em.tuning_csv)))
                items.append((f"{prefix}.n_peaks", str(em.n_peaks)))
                items.append(
                    (f"{prefix}.init_centers", ",".join(f"{c:g}" for c in em.init_centers))
                )
                items.append((f"{prefix}.peak_c", str(em.peak_c)))
                items.append((f"{prefix}.peak_d", str(em.peak_d)))
            else:
                items.append((f"{prefix}.zeta_c", f"{em.zeta_c:g}"))
                items.append((f"{prefix}.zeta_d", f"{em.zeta_d:g}"))
                items.append((f"{prefix}.sigma_zeta_c", f"{em.sigma_zeta_c:g}"))
                items.append((f"{prefix}.sigma_zeta_d", f"{em.sigma_zeta_d:g}"))
        return items


class _Section:
    """Typed accessors with file/section/key context in every error."""

    def __init__(self, path, name: str, section):
        self.path = path
        self.name = name
        self.section = section

    def _raw(self, key: str, default=None, required: bool = False) -> str | None:
        if self.section is None or key not in self.section:
            if required:
                raise DataFormatError(f"{self.path}: [{self.name}] is missing key '{key}'")
            return default
        return self.section[key]

    def get_float(self, key, default=None, required=False) -> float | None:
        raw = self._raw(key, required=required)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError as exc:
            raise DataFormatError(
                f"{self.path}: [{self.name}] {key} = {raw!r} is not a number"
            ) from exc

    def get_int(self, key, default=None, required=False) -> int | None:
        raw = self._raw(key, required=required)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError as exc:
            raise DataFormatError(
                f"{self.path}: [{self.name}] {key} = {raw!r} is not an integer"
            ) from exc

    def get_str(self, key, default=None, required=False) -> str | None:
        raw = self._raw(key, required=required)
        return default if raw is None else raw.strip()

    def get_floats(self, key, required=False) -> tuple[float, ...]:
        raw = self._raw(key, required=required)
        if raw is None:
            return ()
        try:
            return tuple(float(v) for v in raw.replace(",", " ").split())
        except ValueError as exc:
            raise DataFormatError(
                f"{self.path}: [{self.name}] {key} = {raw!r} is not a number list"
            ) from exc


def _load_ini(path) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise DataFormatError(f"{path}: {exc.strerror or exc}") from exc
    except configparser.Error as exc:
        raise DataFormatError(f"{path}: {exc}") from exc
    return parser


def _section(parser, path, name: str, required: bool = False) -> _Section:
    if parser.has_section(name):
        return _Section(path, name, parser[name])
    if required:
        raise DataFormatError(f"{path}: missing required section [{name}]")
    return _Section(path, name, None)


def _device_sections(parser) -> list[str]:
    return [s for s in parser.sections() if s.startswith("device:")]


def _parse_geometry(sec: _Section, dipole_family: str = "primary") -> DeviceGeometry:
    try:
        return DeviceGeometry(
            pattern_angle_deg=sec.get_float("pattern_angle_deg", required=True),
            fab_offset_deg=sec.get_float("fab_offset_deg", 0.0),
            dipole_family=dipole_family,
            quality_factor=sec.get_float("quality_factor"),
            resonance_wavelength_nm=sec.get_float("resonance_wavelength_nm"),
        )
    except DomainError as exc:
        raise DataFormatError(f"{sec.path}: [{sec.name}] {exc}") from exc


def load_analysis_config(path, overrides: dict | None = None) -> AnalysisConfig:
    """Parse an analysis config; ``overrides`` (from CLI flags) win over the file."""
    overrides = overrides or {}
    parser = _load_ini(path)
    analysis = _section(parser, path, "analysis")
    solver = _section(parser, path, "solver")
    eta_dw = overrides.get("eta_dw")
    if eta_dw is None:
        eta_dw = analysis.get_float("eta_dw", DEFAULT_ETA_DW)
    out_dir = overrides.get("out_dir")
    if out_dir is None:
        out_dir = analysis.get_str("out_dir", "reports")
    config = AnalysisConfig(
        eta_dw=eta_dw,
        out_dir=Path(out_dir),
        bracket=(
            solver.get_float("bracket_lo", DEFAULT_BRACKET[0]),
            solver.get_float("bracket_hi", DEFAULT_BRACKET[1]),
        ),
        tol=solver.get_float("tol", DEFAULT_TOL),
        grid_step=solver.get_float("grid_step", DEFAULT_GRID_STEP),
    )
    base = Path(path).parent
    devices: dict[str, _Section] = {
        name.split(":", 1)[1]: _Section(path, name, parser[name])
        for name in _device_sections(parser)
    }
    for name in parser.sections():
        if not name.startswith("emitter:"):
            continue
        sec = _Section(path, name, parser[name])
        device_name = sec.get_str("device", required=True)
        if device_name not in devices:
            raise DataFormatError(f"{path}: [{name}] references unknown device '{device_name}'")
        family = sec.get_str("dipole_family", "primary")
        geometry = _parse_geometry(devices[device_name], dipole_family=family)
        entry = EmitterEntry(
            name=name.split(":", 1)[1],
            geometry=geometry,
            device_name=device_name,
        )
        tuning_csv = sec.get_str("tuning_csv")
        if tuning_csv is not None:
            entry.tuning_csv = base / tuning_csv
            entry.n_peaks = sec.get_int("n_peaks", required=True)
            entry.init_centers = sec.get_floats("init_centers", required=True)
            entry.peak_c = sec.get_int("peak_c", required=True)
            entry.peak_d = sec.get_int("peak_d", required=True)
            if len(entry.init_centers) != entry.n_peaks:
                raise DataFormatError(
                    f"{path}: [{name}] init_centers must list n_peaks values"
                )
        else:
            entry.zeta_c = sec.get_float("zeta_c", required=True)
            entry.zeta_d = sec.get_float("zeta_d", required=True)
            entry.sigma_zeta_c = sec.get_float("sigma_zeta_c", 0.0)
            entry.sigma_zeta_d = sec.get_float("sigma_zeta_d", 0.0)
        config.emitters.append(entry)
    return config


@dataclass
class ScenarioConfig:
    """Parsed synthesis scenario plus per-device wavelength grids."""

    scenario: SynthScenario
    device_names: list[str]
    grids: list[np.ndarray]

    def resolved_items(self) -> list[tuple[str, str]]:
        s = self.scenario
        items = [
            ("physics.total_rate_per_ns", f"{s.physics.total_bulk_rate:.9g}"),
            ("physics.eta_dw", f"{s.physics.eta_dw:g}"),
            ("physics.eta_br", f"{s.physics.eta_br:g}"),
            ("pulse.period_ns", f"{s.pulse.period_ns:g}"),
            ("pulse.pulse_width_ns", f"{s.pulse.pulse_width_ns:g}"),
            ("synth.cavity_fwhm_nm", f"{s.cavity_fwhm_nm:g}"),
            ("synth.lambda_c_nm", f"{s.transition_wavelengths_nm[0]:g}"),
            ("synth.lambda_d_nm", f"{s.transition_wavelengths_nm[1]:g}"),
            ("synth.counts_per_trace", str(s.counts_per_trace)),
            ("synth.background_fraction", f"{s.background_fraction:g}"),
            ("synth.seed", str(s.rng_seed)),
            ("synth.bin_width_ps", str(s.bin_width_ps)),
        ]
        for name, geom, f_peak, grid in zip(
            self.device_names, s.geometries, s.f_peak, self.grids
        ):
            prefix = f"device.{name}"
            items += [
                (f"{prefix}.pattern_angle_deg", f"{geom.pattern_angle_deg:g}"),
                (f"{prefix}.fab_offset_deg", f"{geom.fab_offset_deg:g}"),
                (f"{prefix}.dipole_family", geom.dipole_family),
                (f"{prefix}.f_peak", f"{f_peak:g}"),
                (f"{prefix}.grid_start_nm", f"{grid[0]:.9g}"),
                (f"{prefix}.grid_stop_nm", f"{grid[-1]:.9g}"),
                (f"{prefix}.grid_points", str(grid.size)),
            ]
        return items


def load_scenario_config(path, overrides: dict | None = None) -> ScenarioConfig:
    overrides = overrides or {}
    parser = _load_ini(path)
    phys_sec = _section(parser, path, "physics", required=True)
    pulse_sec = _section(parser, path, "pulse")
    try:
        physics = EmitterPhysics.from_budget(
            total_bulk_rate=phys_sec.get_float("total_rate_per_ns", required=True),
            eta_dw=phys_sec.get_float("eta_dw", DEFAULT_ETA_DW),
            eta_br=phys_sec.get_float("eta_br", required=True),
        )
        pulse = PulseParams(
            period_ns=pulse_sec.get_float("period_ns", 303.04),
            pulse_width_ns=pulse_sec.get_float("pulse_width_ns", 16.0),
        )
    except DomainError as exc:
        raise DataFormatError(f"{path}: invalid scenario: {exc}") from exc
    synth_sec = _section(parser, path, "synth", required=True)
    names: list[str] = []
    geometries: list[DeviceGeometry] = []
    f_peaks: list[float] = []
    grids: list[np.ndarray] = []
    for section_name in _device_sections(parser):
        sec = _Section(path, section_name, parser[section_name])
        names.append(section_name.split(":", 1)[1])
        family = sec.get_str("dipole_family", "primary")
        geometries.append(_parse_geometry(sec, dipole_family=family))
        f_peaks.append(sec.get_float("f_peak", required=True))
        grids.append(
            np.linspace(
                sec.get_float("grid_start_nm", required=True),
                sec.get_float("grid_stop_nm", required=True),
                sec.get_int("grid_points", required=True),
            )
        )
    if not names:
        raise DataFormatError(f"{path}: scenario defines no [device:*] sections")
    seed = overrides.get("seed")
    if seed is None:
        seed = synth_sec.get_int("seed", 0)
    try:
        scenario = SynthScenario(
            physics=physics,
            geometries=tuple(geometries),
            f_peak=tuple(f_peaks),
            cavity_fwhm_nm=synth_sec.get_float("cavity_fwhm_nm", required=True),
            transition_wavelengths_nm=(
                synth_sec.get_float("lambda_c_nm", required=True),
                synth_sec.get_float("lambda_d_nm", required=True),
            ),
            counts_per_trace=synth_sec.get_int("counts_per_trace", DEFAULT_COUNTS_PER_TRACE),
            background_fraction=synth_sec.get_float("background_fraction", 0.0),
            rng_seed=int(seed),
            pulse=pulse,
            bin_width_ps=synth_sec.get_int("bin_width_ps", 32),
        )
    except DomainError as exc:
        # Scenario validation failures are input errors at the CLI boundary.
        raise DataFormatError(f"{path}: invalid scenario: {exc}") from exc
    return ScenarioConfig(scenario=scenario, device_names=names, grids=grids)
