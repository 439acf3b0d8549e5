"""Command-line interface.

Subcommands: fit-fano, fit-lifetime, fit-tuning, solve-br, purcell, synth,
survey.  Every report CSV embeds the fully resolved configuration as
leading ``#`` comment lines, and an SVG figure is written alongside each
delimited output.  Exit codes: 0 success, 1 analysis failure, 2
usage/input error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import AnalysisConfig, load_analysis_config, load_scenario_config
from .dataio import (
    is_trace_manifest,
    read_lifetime_csv,
    read_spectrum_csv,
    read_trace_manifest,
    read_tuning_csv,
    write_csv,
    write_lifetime_csv,
    write_spectrum_csv,
    write_tuning_csv,
)
from .errors import (
    DataFormatError,
    FitError,
    NoIntersectionError,
    SnvCavityError,
)
from .fitting import (
    background_correct,
    fano_model,
    fit_exp_decay,
    fit_fano,
    fit_multi_lorentzian,
    fit_sinusoid,  # noqa: F401  (library surface; kept importable from the CLI module)
    exp_decay_model,
    multi_lorentzian_model,
)
from .model import EnhancementPair, purcell_from_zeta
from .solvers import PhiCurve, propagate_uncertainty, solve_consensus, solve_pair
from .survey import read_survey_csv, survey_statistics
from .synth import synth_spectrum, synth_tuning_series
from .timetags import PulseParams  # noqa: F401
from .traces import TuningSeries
from . import plots


def _parse_window(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected LO,HI, got {text!r}") from exc
    if lo >= hi:
        raise argparse.ArgumentTypeError(f"window must satisfy lo < hi, got {text!r}")
    return lo, hi


def _parse_centers(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.replace(",", " ").split())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a number list, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="analysis config file (INI)")
    common.add_argument("--out-dir", type=Path, help="report output directory")
    common.add_argument("--seed", type=int, help="override the random seed")
    common.add_argument("--eta-dw", type=float, help="coherent ZPL fraction (default 0.57)")

    parser = argparse.ArgumentParser(
        prog="snvcavity",
        description="Purcell-factor and branching-ratio analysis for cavity-coupled emitters",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit-fano", parents=[common], help="fit a Fano resonance, report Q")
    p.add_argument("--spectrum", type=Path, required=True, help="spectrum CSV")
    p.add_argument("--background", type=Path, help="broadband background CSV")
    p.add_argument("--window", type=_parse_window, required=True, metavar="LO,HI")
    p.add_argument("--mode", choices=("divide", "subtract"), default="divide")
    p.set_defaults(handler=cmd_fit_fano)

    p = sub.add_parser("fit-lifetime", parents=[common], help="fit one decay histogram")
    p.add_argument("--trace", type=Path, required=True, help="lifetime trace CSV")
    p.add_argument("--window", type=_parse_window, metavar="LO,HI", help="fit window in ns")
    p.set_defaults(handler=cmd_fit_lifetime)

    p = sub.add_parser(
        "fit-tuning", parents=[common], help="fit a rate-vs-wavelength series to Lorentzians"
    )
    p.add_argument(
        "--input", type=Path, required=True,
        help="tuning CSV, or a trace manifest (cavity_wavelength_nm,trace_csv)",
    )
    p.add_argument("--n-peaks", type=int, required=True)
    p.add_argument("--centers", type=_parse_centers, required=True, metavar="NM,NM,...")
    p.set_defaults(handler=cmd_fit_tuning)

    p = sub.add_parser("solve-br", parents=[common], help="solve branching ratio and offset")
    p.set_defaults(handler=cmd_solve_br)

    p = sub.add_parser("purcell", parents=[common], help="Purcell factors from zeta values")
    p.add_argument("--zeta-c", type=float, required=True)
    p.add_argument("--zeta-d", type=float, required=True)
    p.add_argument("--eta-br", type=float, required=True)
    p.set_defaults(handler=cmd_purcell)

    p = sub.add_parser("synth", parents=[common], help="generate a synthetic dataset")
    p.add_argument("--scenario", type=Path, required=True, help="scenario config (INI)")
    p.set_defaults(handler=cmd_synth)

    p = sub.add_parser("survey", parents=[common], help="device-survey statistics")
    p.add_argument("--input", type=Path, required=True, help="survey CSV")
    p.set_defaults(handler=cmd_survey)
    return parser


def _require_file(path: Path | None, flag: str) -> Path:
    if path is None:
        raise DataFormatError(f"{flag} is required")
    if not path.is_file():
        raise DataFormatError(f"{flag} file not found: {path}")
    return path


def _out_dir(args, config: AnalysisConfig | None = None) -> Path:
    if args.out_dir is not None:
        out = args.out_dir
    elif config is not None:
        out = config.out_dir
    else:
        out = Path("reports")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _eta_dw(args, config: AnalysisConfig | None = None) -> float:
    if args.eta_dw is not None:
        return args.eta_dw
    if config is not None:
        return config.eta_dw
    from .model import DEFAULT_ETA_DW

    return DEFAULT_ETA_DW


def _flag_comments(args, *names) -> list[str]:
    lines = [f"command = {args.command}"]
    for name in names:
        value = getattr(args, name.replace("-", "_"), None)
        if value is not None:
            if isinstance(value, tuple):
                value = ",".join(f"{v:g}" for v in value)
            lines.append(f"{name.replace('_', '-')} = {value}")
    return lines


def _fit_rows(result):
    rows = []
    for name in result.params:
        sigma = result.sigma.get(name)
        rows.append([name, f"{result.params[name]:.9g}", "" if sigma is None else f"{sigma:.4g}"])
    rows.append(["reduced_chi2", f"{result.reduced_chi2:.6g}", ""])
    rows.append(["window_lo", f"{result.fit_window[0]:.9g}", ""])
    rows.append(["window_hi", f"{result.fit_window[1]:.9g}", ""])
    rows.append(["converged", str(result.converged), ""])
    for i, text in enumerate(result.warnings):
        rows.append([f"warning_{i + 1}", text, ""])
    return rows


# ---------------------------------------------------------------------------
# Handlers
# ---------------------------------------------------------------------------

def cmd_fit_fano(args) -> None:
    spectrum = read_spectrum_csv(_require_file(args.spectrum, "--spectrum"))
    if args.background is not None:
        background = read_spectrum_csv(_require_file(args.background, "--background"))
    elif spectrum.background_counts is not None:
        from .traces import SpectrumTrace

        background = SpectrumTrace(spectrum.wavelength_nm, spectrum.background_counts)
    else:
        raise DataFormatError(
            "no background available: pass --background or include a background column"
        )
    corrected = background_correct(spectrum, background, mode=args.mode)
    result = fit_fano(corrected, args.window)
    out = _out_dir(args)
    comments = _flag_comments(args, "spectrum", "background", "window", "mode", "out-dir")
    write_csv(out / "fano_fit.csv", ["parameter", "value", "sigma"], _fit_rows(result), comments)
    mask = (corrected.wavelength_nm >= args.window[0]) & (corrected.wavelength_nm <= args.window[1])
    xs = corrected.wavelength_nm[mask]
    fit_vals = fano_model(xs, *(result.params[k] for k in result.param_names))
    plots.save_fit_overlay(
        out / "fano_fit.svg", xs, corrected.counts[mask], fit_vals,
        "wavelength (nm)", "corrected reflectivity",
        title=f"Fano fit: Q = {result.params['q_factor']:.0f}",
    )
    print(
        f"fano fit: Q = {result.params['q_factor']:.1f} +/- {result.sigma['q_factor']:.2g}, "
        f"center = {result.params['center_nm']:.4f} nm -> {out / 'fano_fit.csv'}"
    )


def cmd_fit_lifetime(args) -> None:
    trace = read_lifetime_csv(_require_file(args.trace, "--trace"))
    result = fit_exp_decay(trace, window_ns=args.window)
    out = _out_dir(args)
    comments = _flag_comments(args, "trace", "window", "out-dir")
    write_csv(
        out / "lifetime_fit.csv", ["parameter", "value", "sigma"], _fit_rows(result), comments
    )
    t = trace.time_ns
    mask = (t >= result.fit_window[0]) & (t <= result.fit_window[1])
    ts = t[mask] - t[mask][0]
    fit_vals = exp_decay_model(ts, *(result.params[k] for k in result.param_names))
    plots.save_fit_overlay(
        out / "lifetime_fit.svg", t[mask], trace.counts[mask], fit_vals,
        "time (ns)", "counts", logy=True,
        title=f"tau = {result.params['tau_ns']:.3f} ns",
    )
    print(
        f"lifetime fit: tau = {result.params['tau_ns']:.4f} +/- "
        f"{result.sigma['tau_ns']:.2g} ns -> {out / 'lifetime_fit.csv'}"
    )


def _series_from_manifest(path: Path) -> tuple[TuningSeries, list[str]]:
    entries = read_trace_manifest(path)
    lams, rates, sigmas, failures = [], [], [], []
    for lam, trace_path in entries:
        try:
            fit = fit_exp_decay(auto_downsample(read_lifetime_csv(trace_path)))
            tau = fit.params["tau_ns"]
        except (SnvCavityError, OSError) as exc:
            failures.append(f"{trace_path} (cavity at {lam:g} nm): {exc}")
            continue
        lams.append(lam)
        rates.append(1.0 / tau)
        sigmas.append(fit.sigma["tau_ns"] / tau**2)
    if len(lams) < 2:
        raise FitError(
            "too few traces fitted successfully; failures:\n  " + "\n  ".join(failures)
        )
    order = np.argsort(lams)
    series = TuningSeries(
        np.array(lams)[order], np.array(rates)[order], np.array(sigmas)[order]
    )
    return series, failures


def cmd_fit_tuning(args) -> None:
    path = _require_file(args.input, "--input")
    failures: list[str] = []
    out = _out_dir(args)
    comments = _flag_comments(args, "input", "n_peaks", "centers", "out-dir")
    if is_trace_manifest(path):
        series, failures = _series_from_manifest(path)
        write_tuning_csv(out / "tuning_rates.csv", series, comments)
    else:
        series = read_tuning_csv(path)
    for line in failures:
        print(f"warning: trace skipped: {line}", file=sys.stderr)
    result = fit_multi_lorentzian(series, args.n_peaks, args.centers)
    rows = [["background", f"{result.params['background']:.9g}",
             f"{result.sigma['background']:.4g}", "", "", ""]]
    zmax = 1.0
    for k in range(1, args.n_peaks + 1):
        zeta = result.params[f"zeta_{k}"]
        zmax = max(zmax, abs(zeta - 1.0) + 1.0)
        rows.append(
            [
                str(k),
                f"{result.params[f'amp_{k}']:.9g}",
                f"{result.sigma[f'amp_{k}']:.4g}",
                f"{result.params[f'center_{k}']:.9g}",
                f"{result.params[f'fwhm_{k}']:.9g}",
                f"{zeta:.9g}",
            ]
        )
        rows[-1].append(f"{result.sigma[f'zeta_{k}']:.4g}")
    rows[0].append("")
    write_csv(
        out / "tuning_zeta.csv",
        ["peak", "amplitude", "sigma_amplitude", "center_nm", "fwhm_nm", "zeta", "sigma_zeta"],
        rows,
        comments,
    )
    fit_vals = multi_lorentzian_model(
        series.cavity_wavelength_nm, *(result.params[k] for k in result.param_names)
    )
    plots.save_fit_overlay(
        out / "tuning_fit.svg", series.cavity_wavelength_nm, series.rate_per_ns, fit_vals,
        "cavity wavelength (nm)", "emission rate (1/ns)",
        sigma=series.rate_sigma if np.all(series.rate_sigma > 0) else None,
    )
    zetas = ", ".join(
        f"zeta_{k} = {result.params[f'zeta_{k}']:.4g}" for k in range(1, args.n_peaks + 1)
    )
    print(f"tuning fit: {zetas} -> {out / 'tuning_zeta.csv'}")
    if zmax - 1.0 < 0.05:
        print("warning: no coupling detected (all zeta within 5% of unity)", file=sys.stderr)
    for text in result.warnings:
        print(f"warning: {text}", file=sys.stderr)


def _resolve_pairs(config: AnalysisConfig) -> list[EnhancementPair]:
    pairs = []
    for entry in config.emitters:
        if entry.from_fit:
            series = read_tuning_csv(_require_file(entry.tuning_csv, "tuning_csv"))
            result = fit_multi_lorentzian(series, entry.n_peaks, entry.init_centers)
            zeta_c = result.params[f"zeta_{entry.peak_c}"]
            zeta_d = result.params[f"zeta_{entry.peak_d}"]
            sig_c = result.sigma[f"zeta_{entry.peak_c}"]
            sig_d = result.sigma[f"zeta_{entry.peak_d}"]
        else:
            zeta_c, zeta_d = entry.zeta_c, entry.zeta_d
            sig_c, sig_d = entry.sigma_zeta_c, entry.sigma_zeta_d
        pairs.append(
            EnhancementPair(
                zeta_c=zeta_c, zeta_d=zeta_d, geometry=entry.geometry,
                sigma_zeta_c=sig_c, sigma_zeta_d=sig_d, label=entry.name,
            )
        )
    return pairs


def cmd_solve_br(args) -> None:
    config = load_analysis_config(
        _require_file(args.config, "--config"),
        overrides={"eta_dw": args.eta_dw, "out_dir": args.out_dir},
    )
    if len(config.emitters) < 2:
        raise DataFormatError("solve-br needs at least two [emitter:*] sections")
    pairs = _resolve_pairs(config)
    curves = [PhiCurve(p, config.eta_dw, label=p.label) for p in pairs]
    out = _out_dir(args, config)
    comments = [f"command = {args.command}"] + [
        f"{k} = {v}" for k, v in config.resolved_items()
    ]

    eta_grid = np.arange(config.bracket[0], config.bracket[1] + 5e-4, 1e-3)
    eta_grid[-1] = min(eta_grid[-1], config.bracket[1])
    curve_values = {}
    for curve in curves:
        vals = []
        for eta in eta_grid:
            try:
                vals.append(curve(float(eta)))
            except SnvCavityError:
                vals.append(math.nan)
        curve_values[curve.label or f"emitter{len(curve_values) + 1}"] = np.array(vals)
    header = ["eta_br"] + [f"phi_{label}_deg" for label in curve_values]
    rows = (
        [f"{eta:.6g}"] + [("" if math.isnan(v[i]) else f"{v[i]:.9g}") for v in curve_values.values()]
        for i, eta in enumerate(eta_grid)
    )
    write_csv(out / "phi_curves.csv", header, rows, comments)

    try:
        if len(curves) == 2:
            solution = solve_pair(curves[0], curves[1], config.bracket, config.tol)
        else:
            solution = solve_consensus(curves, config.bracket, config.grid_step)
    except NoIntersectionError:
        for label, vals in curve_values.items():
            finite = vals[np.isfinite(vals)]
            print(
                f"curve {label}: phi range [{finite.min():.4g}, {finite.max():.4g}] deg",
                file=sys.stderr,
            )
        plots.save_phi_curves(out / "phi_curves.svg", eta_grid, curve_values)
        raise
    solution = propagate_uncertainty(solution, pairs)

    def fmt(v):
        return "" if v is None else f"{v:.6g}"

    rows = [
        ["eta_br", "", f"{solution.eta_br:.9g}", fmt(solution.sigma_eta_br)],
        ["phi_deg", "", f"{solution.phi_deg:.9g}", fmt(solution.sigma_phi_deg)],
        ["residual_deg", "", f"{solution.residual_deg:.6g}", ""],
        ["method", "", solution.method, ""],
        ["eta_dw", "", f"{solution.eta_dw:g}", ""],
    ]
    for em in solution.per_emitter:
        rows.append(["f_c", em.label, f"{em.f_c:.9g}", fmt(em.sigma_f_c)])
        rows.append(["f_d", em.label, f"{em.f_d:.9g}", fmt(em.sigma_f_d)])
        rows.append(["f_total", em.label, f"{em.f_total:.9g}", ""])
        rows.append(["theta_deg", em.label, f"{em.theta_deg:.9g}", ""])
    write_csv(
        out / "branching_solution.csv", ["quantity", "emitter", "value", "sigma"], rows, comments
    )
    plots.save_phi_curves(
        out / "phi_curves.svg", eta_grid, curve_values, solution.eta_br, solution.phi_deg
    )
    sigma_phi = f" +/- {solution.sigma_phi_deg:.2g}" if solution.sigma_phi_deg is not None else ""
    sigma_eta = f" +/- {solution.sigma_eta_br:.2g}" if solution.sigma_eta_br is not None else ""
    print(
        f"solution ({solution.method}): eta_br = {solution.eta_br:.4f}{sigma_eta}, "
        f"phi = {solution.phi_deg:.2f}{sigma_phi} deg, "
        f"residual = {solution.residual_deg:.3g} deg -> {out / 'branching_solution.csv'}"
    )
    for em in solution.per_emitter:
        print(
            f"  {em.label or 'emitter'}: F_C = {em.f_c:.3f}, F_D = {em.f_d:.3f}, "
            f"theta = {em.theta_deg:.2f} deg"
        )


def cmd_purcell(args) -> None:
    eta_dw = _eta_dw(args)
    from .model import DeviceGeometry

    pair = EnhancementPair(
        zeta_c=args.zeta_c, zeta_d=args.zeta_d, geometry=DeviceGeometry(0.0)
    )
    f_c, f_d = purcell_from_zeta(pair, eta_dw, args.eta_br)
    theta = math.degrees(math.atan2(f_d, f_c))
    out = _out_dir(args)
    comments = _flag_comments(args, "zeta_c", "zeta_d", "eta_br", "eta_dw", "out-dir")
    rows = [
        ["f_c", f"{f_c:.9g}"],
        ["f_d", f"{f_d:.9g}"],
        ["f_total", f"{math.hypot(f_c, f_d):.9g}"],
        ["theta_deg", f"{theta:.9g}"],
    ]
    write_csv(out / "purcell.csv", ["quantity", "value"], rows, comments)
    print(f"F_C = {f_c:.4f}, F_D = {f_d:.4f}, theta = {theta:.3f} deg -> {out / 'purcell.csv'}")


def cmd_synth(args) -> None:
    scenario_config = load_scenario_config(
        _require_file(args.scenario, "--scenario"), overrides={"seed": args.seed}
    )
    scenario = scenario_config.scenario
    out = _out_dir(args)
    comments = [f"command = {args.command}"] + [
        f"{k} = {v}" for k, v in scenario_config.resolved_items()
    ]
    from .model import enhancement_ratio, theta_from_geometry
    from .synth import purcell_at, rate_at, synth_lifetime

    truth_rows = []
    lam_c, lam_d = scenario.transition_wavelengths_nm
    for index, name in enumerate(scenario_config.device_names):
        geom = scenario.geometries[index]
        grid = scenario_config.grids[index]
        device_dir = out / "devices" / name
        (device_dir / "traces").mkdir(parents=True, exist_ok=True)
        manifest_rows = []
        for i, lam in enumerate(grid):
            trace = synth_lifetime(scenario, index, float(lam))
            trace_name = f"traces/trace_{i:03d}.csv"
            write_lifetime_csv(
                device_dir / trace_name, trace,
                comments + [f"device = {name}", f"cavity_wavelength_nm = {lam:.9g}"],
            )
            manifest_rows.append([f"{lam:.9g}", trace_name])
        write_csv(
            device_dir / "manifest.csv", ["cavity_wavelength_nm", "trace_csv"],
            manifest_rows, comments,
        )
        series = synth_tuning_series(scenario, index, grid)
        write_tuning_csv(device_dir / "tuning.csv", series, comments)
        if geom.quality_factor is not None:
            res_nm = geom.resonance_wavelength_nm or lam_c
            fwhm = res_nm / geom.quality_factor
            spectrum = synth_spectrum(
                "fano",
                {
                    "lambda_start_nm": res_nm - 12 * fwhm,
                    "lambda_stop_nm": res_nm + 12 * fwhm,
                    "n_points": 400,
                    "amplitude": 1.0,
                    "q": 2.0,
                    "center_nm": res_nm,
                    "fwhm_nm": fwhm,
                    "offset": 0.1,
                },
                seed=scenario.rng_seed + index,
            )
            write_spectrum_csv(device_dir / "spectrum_fano.csv", spectrum, comments)
        theta = theta_from_geometry(geom)
        f_c_pk, f_d_pk = purcell_at(scenario, index, lam_c)[0], purcell_at(scenario, index, lam_d)[1]
        zeta_c = enhancement_ratio(f_c_pk, 1.0, scenario.physics.eta_dw, scenario.physics.eta_br)
        zeta_d = enhancement_ratio(1.0, f_d_pk, scenario.physics.eta_dw, scenario.physics.eta_br)
        truth_rows.append(
            [
                name,
                f"{scenario.physics.eta_br:.9g}",
                f"{geom.fab_offset_deg:.9g}",
                f"{theta:.9g}",
                f"{scenario.f_peak[index]:.9g}",
                f"{f_c_pk:.9g}",
                f"{f_d_pk:.9g}",
                f"{zeta_c:.9g}",
                f"{zeta_d:.9g}",
                f"{rate_at(scenario, index, lam_c):.9g}",
            ]
        )
    write_csv(
        out / "truth.csv",
        [
            "device", "eta_br", "fab_offset_deg", "theta_deg", "f_peak",
            "f_c_peak", "f_d_peak", "zeta_c", "zeta_d", "rate_on_c_per_ns",
        ],
        truth_rows,
        comments,
    )
    _write_solve_config(out, scenario_config)
    print(
        f"synthetic dataset for {len(scenario_config.device_names)} device(s) -> {out} "
        f"(solve with: snvcavity solve-br --config {out / 'solve.ini'})"
    )


def _write_solve_config(out: Path, scenario_config) -> None:
    scenario = scenario_config.scenario
    lam_c, lam_d = scenario.transition_wavelengths_nm
    lines = [
        "[analysis]",
        f"eta_dw = {scenario.physics.eta_dw:g}",
        "out_dir = solve_reports",
        "",
    ]
    for name, geom in zip(scenario_config.device_names, scenario.geometries):
        lines += [
            f"[device:{name}]",
            f"pattern_angle_deg = {geom.pattern_angle_deg:g}",
            "",
            f"[emitter:{name}]",
            f"device = {name}",
            f"dipole_family = {geom.dipole_family}",
            f"tuning_csv = devices/{name}/tuning.csv",
            "n_peaks = 2",
            f"init_centers = {lam_c:.9g}, {lam_d:.9g}",
            "peak_c = 1",
            "peak_d = 2",
            "",
        ]
    from .dataio import atomic_write_text

    atomic_write_text(out / "solve.ini", "\n".join(lines))


def cmd_survey(args) -> None:
    rows = read_survey_csv(_require_file(args.input, "--input"))
    overall, groups = survey_statistics(rows)
    out = _out_dir(args)
    comments = _flag_comments(args, "input", "out-dir")

    def stat_row(label, lattice, stats):
        note = "no resonances found" if stats.n_resonances == 0 else ""

        def fmt(v):
            return "" if v is None else f"{v:.6g}"

        return [
            label, lattice, str(stats.n_devices), str(stats.n_resonances),
            fmt(stats.wavelength_mean), fmt(stats.wavelength_std),
            fmt(stats.q_mean), fmt(stats.q_std), note,
        ]

    table = [stat_row("all", "", overall)]
    table += [stat_row("lattice", g.label, g) for g in groups]
    write_csv(
        out / "survey_stats.csv",
        [
            "group", "lattice_constant_nm", "n_devices", "n_resonances",
            "wavelength_mean_nm", "wavelength_std_nm", "q_mean", "q_std", "note",
        ],
        table,
        comments,
    )
    lam_values = [r.resonance_wavelength_nm for r in rows if r.resonance_wavelength_nm is not None]
    q_values = [r.quality_factor for r in rows if r.quality_factor is not None]
    for stem, values, label in (
        ("survey_wavelength_hist", lam_values, "resonance wavelength (nm)"),
        ("survey_q_hist", q_values, "quality factor"),
    ):
        if not values:
            continue
        edges = np.histogram_bin_edges(values, bins="auto")
        hist, _ = np.histogram(values, bins=edges)
        write_csv(
            out / f"{stem}.csv", ["bin_lo", "bin_hi", "count"],
            ([f"{lo:.6g}", f"{hi:.6g}", str(int(n))] for lo, hi, n in zip(edges, edges[1:], hist)),
            comments,
        )
        plots.save_histogram(out / f"{stem}.svg", values, label)
    if overall.n_resonances == 0:
        print("no resonances found in the survey")
    else:
        lam_std = f" +/- {overall.wavelength_std:.3g}" if overall.wavelength_std else ""
        q_std = f" +/- {overall.q_std:.4g}" if overall.q_std else ""
        print(
            f"survey: {overall.n_resonances}/{overall.n_devices} devices with resonances; "
            f"wavelength {overall.wavelength_mean:.4g}{lam_std} nm; "
            f"Q {overall.q_mean:.5g}{q_std} -> {out / 'survey_stats.csv'}"
        )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        args.handler(args)
    except (DataFormatError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SnvCavityError as exc:
        print(f"analysis error: {exc}", file=sys.stderr)
        return 1
    return 0


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
