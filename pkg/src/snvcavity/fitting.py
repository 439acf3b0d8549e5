"""Weighted nonlinear least squares and the lineshape families used by the analysis.

The engine is a damped Gauss-Newton iteration with a Levenberg-Marquardt
style damping schedule (damping on the scaled normal matrix), a central
difference numeric Jacobian (relative step 1e-6), projection onto box
bounds, and convergence on relative chi-square change < 1e-10 or a
vanishing scaled step.  It is stateless and reentrant; independent fits may
run concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateModelError,
    DomainError,
    InsufficientDataError,
    SingularFitError,
    UnderResolvedError,
)
from .traces import LifetimeTrace, SpectrumTrace, TuningSeries

SPEED_OF_LIGHT_M_S = 299_792_458.0

JAC_REL_STEP = 1e-6
CHI2_REL_TOL = 1e-10
STEP_TOL = 1e-12
MAX_ITERATIONS = 200
_LAMBDA_MAX = 1e15


@dataclass
class FitResult:
    """Fitted parameters with covariance and fit bookkeeping.

    ``params``/``sigma`` may contain derived entries (e.g. ``q_factor``,
    ``zeta_1``) in addition to the raw model parameters; ``param_names``
    lists the raw parameters in covariance order.
    """

    params: dict[str, float]
    sigma: dict[str, float]
    covariance: np.ndarray
    reduced_chi2: float
    fit_window: tuple[float, float]
    converged: bool
    param_names: tuple[str, ...]
    n_points: int = 0
    warnings: tuple[str, ...] = field(default_factory=tuple)

    def values(self, *names: str) -> tuple[float, ...]:
        return tuple(self.params[n] for n in names)


# ---------------------------------------------------------------------------
# Engine
# ---------------------------------------------------------------------------

def numeric_jacobian(model, x, params, rel_step: float = JAC_REL_STEP) -> np.ndarray:
    """Central-difference Jacobian of ``model(x, *params)`` w.r.t. the parameters."""
    p = np.asarray(params, dtype=float)
    base = np.asarray(model(x, *p), dtype=float)
    jac = np.empty((base.size, p.size))
    for j in range(p.size):
        h = rel_step * abs(p[j]) if p[j] != 0.0 else rel_step
        up = p.copy()
        dn = p.copy()
        up[j] += h
        dn[j] -= h
        jac[:, j] = (np.asarray(model(x, *up), float) - np.asarray(model(x, *dn), float)) / (2.0 * h)
    return jac


def _project(p: np.ndarray, bounds) -> np.ndarray:
    if bounds is None:
        return p
    lo, hi = bounds
    return np.clip(p, lo, hi)


def nlls_fit(
    model,
    x,
    y,
    init,
    sigma=None,
    bounds=None,
    param_names=None,
    fit_window=None,
    max_iter: int = MAX_ITERATIONS,
) -> FitResult:
    """Weighted least-squares fit of ``model(x, *params)`` to ``(x, y, sigma)``.

    Parameters
    ----------
    model : callable
        Vectorized model function taking ``x`` followed by scalar parameters.
    x, y : array_like
        Abscissa and data, equal length, at least as many points as parameters.
    init : array_like
        Starting parameter vector (projected into ``bounds`` if necessary).
    sigma : array_like, optional
        Per-point standard deviations.  When given, the covariance is absolute
        (inverse curvature of chi-square); when omitted, unit weights are used
        and the covariance is scaled by the reduced chi-square.
    bounds : (lo, hi), optional
        Box bounds enforced by projecting each accepted step.
    param_names : sequence of str, optional
        Names used in the result maps; defaults to ``p0 .. pN``.

    Returns
    -------
    FitResult
        With ``converged=False`` (and best-so-far parameters) when the
        iteration limit is reached without meeting either stopping rule.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    p = np.asarray(init, dtype=float).copy()
    n_par = p.size
    if param_names is None:
        param_names = tuple(f"p{i}" for i in range(n_par))
    else:
        param_names = tuple(param_names)
        if len(param_names) != n_par:
            raise DomainError("param_names length must match the parameter vector")
    if y.size < n_par:
        raise InsufficientDataError(
            f"{y.size} points cannot constrain {n_par} parameters"
        )
    absolute_sigma = sigma is not None
    if absolute_sigma:
        sig = np.asarray(sigma, dtype=float)
        if sig.shape != y.shape or np.any(sig <= 0):
            raise DomainError("sigma must be positive and match the data shape")
    else:
        sig = np.ones_like(y)
    if bounds is not None:
        lo = np.asarray(bounds[0], dtype=float)
        hi = np.asarray(bounds[1], dtype=float)
        bounds = (lo, hi)
        p = _project(p, bounds)

    def residuals(pv):
        return (y - np.asarray(model(x, *pv), dtype=float)) / sig

    r = residuals(p)
    if not np.all(np.isfinite(r)):
        raise DomainError("model is non-finite at the initial parameters")
    chi2 = float(r @ r)
    lam = 1e-3
    converged = False
    warnings: list[str] = []

    for _ in range(max_iter):
        jac = numeric_jacobian(model, x, p) / sig[:, None]
        a_mat = jac.T @ jac
        grad = jac.T @ r
        diag = np.diag(a_mat).copy()
        diag[diag <= 0] = 1.0  # guard dead columns so damping still regularizes
        accepted = False
        while lam <= _LAMBDA_MAX:
            try:
                step = np.linalg.solve(a_mat + lam * np.diag(diag), grad)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            p_try = _project(p + step, bounds)
            r_try = residuals(p_try)
            chi2_try = float(r_try @ r_try) if np.all(np.isfinite(r_try)) else np.inf
            if chi2_try <= chi2:
                accepted = True
                break
            lam *= 10.0
        if not accepted:
            if lam > _LAMBDA_MAX and not np.all(np.isfinite(a_mat)):
                raise SingularFitError("normal matrix stayed singular under damping")
            # chi-square cannot be decreased further: treat as a stall at the
            # current point; convergence is judged by the last step below.
            break
        delta = p_try - p
        scale = np.maximum(np.maximum(np.abs(p), np.abs(p_try)), 1e-300)
        step_small = bool(np.all(np.abs(delta) <= STEP_TOL * scale))
        chi2_drop = chi2 - chi2_try
        p, r, chi2 = p_try, r_try, chi2_try
        lam = max(lam * 0.1, 1e-15)
        if chi2_drop <= CHI2_REL_TOL * max(chi2, 1e-300) or step_small:
            converged = True
            break

    n_pts = y.size
    dof = max(n_pts - n_par, 1)
    reduced_chi2 = chi2 / dof
    jac = numeric_jacobian(model, x, p) / sig[:, None]
    a_mat = jac.T @ jac
    try:
        cov = np.linalg.inv(a_mat)
    except np.linalg.LinAlgError:
        cov = np.linalg.pinv(a_mat)
        warnings.append("singular covariance; pseudo-inverse used")
    cov = 0.5 * (cov + cov.T)
    if not absolute_sigma:
        cov = cov * reduced_chi2
    sigmas = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    if fit_window is None:
        fit_window = (float(x.min()), float(x.max())) if x.size else (0.0, 0.0)
    return FitResult(
        params=dict(zip(param_names, map(float, p))),
        sigma=dict(zip(param_names, map(float, sigmas))),
        covariance=cov,
        reduced_chi2=float(reduced_chi2),
        fit_window=(float(fit_window[0]), float(fit_window[1])),
        converged=converged,
        param_names=param_names,
        n_points=int(n_pts),
        warnings=tuple(warnings),
    )


# ---------------------------------------------------------------------------
# Lineshapes
# ---------------------------------------------------------------------------

def lorentzian_peak(x, amplitude, center, fwhm):
    h = 0.5 * fwhm
    return amplitude * h * h / ((x - center) ** 2 + h * h)


def multi_lorentzian_model(x, background, *peak_params):
    """Background plus a sum of Lorentzians given as (amp, center, fwhm) triples."""
    y = np.full_like(np.asarray(x, dtype=float), background)
    for i in range(0, len(peak_params), 3):
        y = y + lorentzian_peak(x, *peak_params[i : i + 3])
    return y


def fano_model(x, amplitude, q, center, fwhm, offset):
    """Fano lineshape A*(q*G/2 + (x-c))^2 / ((G/2)^2 + (x-c)^2) + C."""
    h = 0.5 * fwhm
    d = np.asarray(x, dtype=float) - center
    return amplitude * (q * h + d) ** 2 / (h * h + d * d) + offset


def exp_decay_model(t, amplitude, tau, offset):
    return amplitude * np.exp(-np.asarray(t, dtype=float) / tau) + offset


def cosine_model(x, amplitude, period, phase, offset):
    return amplitude * np.cos(2.0 * np.pi * (np.asarray(x, dtype=float) - phase) / period) + offset


# ---------------------------------------------------------------------------
# Shared heuristics
# ---------------------------------------------------------------------------

def median_filter5(y: np.ndarray) -> np.ndarray:
    """5-point running median with edge replication."""
    y = np.asarray(y, dtype=float)
    if y.size < 5:
        return y.copy()
    padded = np.concatenate([y[:2][::-1], y, y[-2:][::-1]])
    windows = np.lib.stride_tricks.sliding_window_view(padded, 5)
    return np.median(windows, axis=1)


def _estimate_fwhm(x, y_above_baseline, i_peak) -> float:
    """Width from the half-maximum crossings around a peak index."""
    half = y_above_baseline[i_peak] / 2.0
    if half <= 0:
        return 0.0
    i_lo = i_peak
    while i_lo > 0 and y_above_baseline[i_lo] > half:
        i_lo -= 1
    i_hi = i_peak
    while i_hi < y_above_baseline.size - 1 and y_above_baseline[i_hi] > half:
        i_hi += 1
    return float(x[i_hi] - x[i_lo])


def _median_spacing(x: np.ndarray) -> float:
    return float(np.median(np.diff(x))) if x.size > 1 else 0.0


def _propagated_sigma(cov: np.ndarray, grad: dict[int, float]) -> float:
    idx = sorted(grad)
    g = np.array([grad[i] for i in idx])
    sub = cov[np.ix_(idx, idx)]
    return float(np.sqrt(max(g @ sub @ g, 0.0)))


# ---------------------------------------------------------------------------
# Background correction
# ---------------------------------------------------------------------------

def background_correct(
    signal: SpectrumTrace, background: SpectrumTrace, mode: str = "divide"
) -> SpectrumTrace:
    """Correct a spectrum by its broadband background.

    Default is pointwise division (reflectivity normalization) with a 1e-9
    floor on the background; ``mode="subtract"`` is available for count-like
    data.  The background is linearly interpolated onto the signal grid; the
    output is restricted to the overlapping wavelength range.
    """
    if mode not in ("divide", "subtract"):
        raise DomainError(f"mode must be 'divide' or 'subtract', got {mode!r}")
    lo = max(signal.wavelength_nm[0], background.wavelength_nm[0])
    hi = min(signal.wavelength_nm[-1], background.wavelength_nm[-1])
    if lo >= hi:
        raise DomainError("signal and background wavelength ranges do not overlap")
    mask = (signal.wavelength_nm >= lo) & (signal.wavelength_nm <= hi)
    lam = signal.wavelength_nm[mask]
    sig = signal.counts[mask]
    bg = np.interp(lam, background.wavelength_nm, background.counts)
    if mode == "divide":
        corrected = sig / np.maximum(bg, 1e-9)
    else:
        corrected = sig - bg
    return SpectrumTrace(lam, corrected)


# ---------------------------------------------------------------------------
# Fano resonance
# ---------------------------------------------------------------------------

def fit_fano(spectrum: SpectrumTrace, window_nm: tuple[float, float]) -> FitResult:
    """Fit a Fano resonance inside a wavelength window; reports Q = center/FWHM.

    Initial guesses come from the window extremum and a half-max width
    heuristic; a small deterministic set of asymmetry starting values is
    tried and the lowest-chi-square fit kept.
    """
    lo, hi = float(window_nm[0]), float(window_nm[1])
    if lo >= hi:
        raise DomainError("window must satisfy lo < hi")
    mask = (spectrum.wavelength_nm >= lo) & (spectrum.wavelength_nm <= hi)
    xs = spectrum.wavelength_nm[mask]
    ys = spectrum.counts[mask]
    if xs.size < 8:
        raise InsufficientDataError("fewer than 8 samples inside the fit window")
    smooth = median_filter5(ys)
    n_edge = max(2, xs.size // 10)
    baseline0 = float(np.median(np.concatenate([smooth[:n_edge], smooth[-n_edge:]])))
    i_ext = int(np.argmax(np.abs(smooth - baseline0)))
    center0 = float(xs[i_ext])
    height = float(smooth[i_ext] - baseline0)
    fwhm0 = _estimate_fwhm(xs, np.abs(smooth - baseline0), i_ext)
    if fwhm0 <= 0:
        fwhm0 = (hi - lo) / 10.0
    spacing = _median_spacing(xs)
    names = ("amplitude", "q", "center_nm", "fwhm_nm", "offset")
    lo_b = np.array([-np.inf, -np.inf, lo, max(spacing, 1e-12), -np.inf])
    hi_b = np.array([np.inf, np.inf, hi, 10.0 * (hi - lo), np.inf])
    best = None
    for q0 in (1.0, -1.0, 5.0, -5.0):
        amp0 = height / (q0 * q0) if height != 0 else 1e-3
        init = np.array([amp0, q0, center0, fwhm0, baseline0 - amp0])
        try:
            res = nlls_fit(
                fano_model, xs, ys, init, bounds=(lo_b, hi_b),
                param_names=names, fit_window=(lo, hi),
            )
        except SingularFitError:
            continue
        if best is None or res.reduced_chi2 < best.reduced_chi2:
            best = res
    if best is None:
        raise SingularFitError("no Fano starting point produced a solvable fit")
    fwhm = best.params["fwhm_nm"]
    if fwhm < 3.0 * spacing:
        raise UnderResolvedError(
            f"fitted FWHM {fwhm:.4g} nm spans fewer than 3 samples ({spacing:.4g} nm each)"
        )
    center = best.params["center_nm"]
    i_c, i_w = names.index("center_nm"), names.index("fwhm_nm")
    best.params["q_factor"] = center / fwhm
    best.sigma["q_factor"] = _propagated_sigma(
        best.covariance, {i_c: 1.0 / fwhm, i_w: -center / fwhm**2}
    )
    return best


# ---------------------------------------------------------------------------
# Multi-peak Lorentzian tuning fits
# ---------------------------------------------------------------------------

def fit_multi_lorentzian(
    series: TuningSeries, n_peaks: int, init_centers
) -> FitResult:
    """Fit rate-vs-wavelength data to a background plus ``n_peaks`` Lorentzians.

    Reports the per-peak enhancement ratio ``zeta_i = (B + A_i)/B`` (fitted
    peak amplitude over background) with its covariance-propagated sigma.
    """
    init_centers = [float(c) for c in np.atleast_1d(init_centers)]
    if n_peaks < 1 or len(init_centers) != n_peaks:
        raise DomainError("init_centers must provide one center per requested peak")
    x = series.cavity_wavelength_nm
    y = series.rate_per_ns
    sigma = series.rate_sigma if np.all(series.rate_sigma > 0) else None
    spacing = _median_spacing(x)
    span = float(x[-1] - x[0]) if x.size > 1 else 1.0
    smooth = median_filter5(y)
    b0 = float(np.percentile(smooth, 10))
    names = ["background"]
    init = [b0]
    lo_b = [0.0]
    hi_b = [np.inf]
    for k, c in enumerate(init_centers, start=1):
        i_near = int(np.argmin(np.abs(x - c)))
        a0 = max(float(smooth[i_near] - b0), 1e-3 * max(abs(b0), 1e-12))
        w0 = _estimate_fwhm(x, np.clip(smooth - b0, 0.0, None), i_near)
        if w0 <= 0:
            w0 = max(4.0 * spacing, 1e-6)
        names += [f"amp_{k}", f"center_{k}", f"fwhm_{k}"]
        init += [a0, c, w0]
        lo_b += [-np.inf, x[0] - span, max(spacing, 1e-12)]
        hi_b += [np.inf, x[-1] + span, 4.0 * span]
    result = nlls_fit(
        multi_lorentzian_model, x, y, np.array(init), sigma=sigma,
        bounds=(np.array(lo_b), np.array(hi_b)), param_names=tuple(names),
    )
    warnings = list(result.warnings)
    b = result.params["background"]
    if b <= 0:
        warnings.append("non-positive fitted background; zeta undefined")
    centers = [result.params[f"center_{k}"] for k in range(1, n_peaks + 1)]
    widths = [result.params[f"fwhm_{k}"] for k in range(1, n_peaks + 1)]
    for i in range(n_peaks):
        for j in range(i + 1, n_peaks):
            if abs(centers[i] - centers[j]) < max(widths[i], widths[j]):
                warnings.append(
                    f"peaks {i + 1} and {j + 1} overlap within one linewidth; "
                    "amplitudes may be ill-conditioned"
                )
    for k in range(1, n_peaks + 1):
        a = result.params[f"amp_{k}"]
        result.params[f"zeta_{k}"] = (b + a) / b if b > 0 else math.nan
        i_b = result.param_names.index("background")
        i_a = result.param_names.index(f"amp_{k}")
        result.sigma[f"zeta_{k}"] = (
            _propagated_sigma(result.covariance, {i_b: -a / b**2, i_a: 1.0 / b})
            if b > 0
            else math.nan
        )
    result.warnings = tuple(warnings)
    return result


# ---------------------------------------------------------------------------
# Exponential decay
# ---------------------------------------------------------------------------

def fit_exp_decay(
    trace: LifetimeTrace, window_ns: tuple[float, float] | None = None
) -> FitResult:
    """Fit a background-corrected single exponential to a lifetime histogram.

    The default window is ``[t_peak + 0.5 ns, t_peak + 4 * tau_hat]`` with
    ``tau_hat`` from a log-linear pre-fit over the first decade of decay;
    Poisson weights ``sigma = sqrt(max(counts, 1))`` are used.  The window
    actually fitted is recorded in the result for reproducibility.
    """
    t = trace.time_ns
    y = trace.counts.astype(float)
    if y.size < 10:
        raise InsufficientDataError("trace has fewer than 10 bins")
    smooth = median_filter5(y)
    peak_level = float(smooth.max())
    if peak_level <= 0:
        raise DegenerateModelError("trace has no resolvable peak")
    # A flat-topped histogram (excitation pulse longer than the decay) has
    # its decay onset at the END of the plateau, not at argmax; take the
    # last bin statistically indistinguishable from the maximum.
    threshold = peak_level - 3.0 * math.sqrt(max(peak_level, 1.0))
    i_peak = int(np.flatnonzero(smooth >= threshold)[-1])
    t_peak = float(t[i_peak])
    low = y[y <= np.percentile(y, 5)]
    c0 = float(low.mean()) if low.size else 0.0
    tau_hat = _log_linear_tau(t, smooth, i_peak, c0)
    if window_ns is None:
        w_lo = t_peak + 0.5
        w_hi = t_peak + min(4.0 * tau_hat, float(t[-1]) - t_peak)
    else:
        w_lo, w_hi = float(window_ns[0]), float(window_ns[1])
    mask = (t >= w_lo) & (t <= w_hi)
    if mask.sum() < 10:
        raise InsufficientDataError(
            f"fit window [{w_lo:.3f}, {w_hi:.3f}] ns contains fewer than 10 bins"
        )
    ts = t[mask] - t[mask][0]
    ys = y[mask]
    sig = np.sqrt(np.maximum(ys, 1.0))
    a0 = max(float(ys[0] - c0), 1e-9)
    init = np.array([a0, tau_hat, max(c0, 0.0)])
    lo_b = np.array([0.0, 1e-9, -np.inf])
    hi_b = np.array([np.inf, np.inf, np.inf])
    result = nlls_fit(
        exp_decay_model, ts, ys, init, sigma=sig, bounds=(lo_b, hi_b),
        param_names=("amplitude", "tau_ns", "offset"), fit_window=(w_lo, w_hi),
    )
    return result


def _log_linear_tau(t, smooth, i_peak, c0) -> float:
    """Decay-constant seed from a straight-line fit to log(counts) over one decade."""
    v = smooth[i_peak:] - c0
    keep = v > max(v[0] / 10.0, 0.0)
    if v[0] <= 0 or keep.sum() < 3:
        return max((t[-1] - t[i_peak]) / 4.0, 1e-3)
    idx = np.flatnonzero(~keep)
    stop = idx[0] if idx.size else v.size
    stop = max(stop, 3)
    tt = t[i_peak : i_peak + stop]
    vv = v[:stop]
    good = vv > 0
    if good.sum() < 3:
        return max((t[-1] - t[i_peak]) / 4.0, 1e-3)
    slope = np.polyfit(tt[good], np.log(vv[good]), 1)[0]
    if slope >= 0:
        return max((t[-1] - t[i_peak]) / 4.0, 1e-3)
    return float(-1.0 / slope)


# ---------------------------------------------------------------------------
# Sinusoidal polarization dependence
# ---------------------------------------------------------------------------

def fit_sinusoid(angles_deg, amplitude) -> FitResult:
    """Fit ``a*cos(2*pi*(x - x0)/P) + c``; reports the period P in degrees."""
    x = np.asarray(angles_deg, dtype=float)
    y = np.asarray(amplitude, dtype=float)
    if x.size != y.size:
        raise DomainError("angles and amplitudes must have equal length")
    if x.size < 8:
        raise InsufficientDataError("need at least 8 samples to identify a period")
    if float(np.ptp(y)) <= 1e-12 * max(1.0, float(np.abs(y).max())):
        raise DegenerateModelError("flat data: period is unidentifiable")
    order = np.argsort(x)
    xs, ys = x[order], y[order]
    span = float(xs[-1] - xs[0])
    if span <= 0:
        raise DomainError("angles must span a nonzero range")
    grid = np.linspace(xs[0], xs[-1], 256)
    resampled = np.interp(grid, xs, ys)
    spectrum = np.abs(np.fft.rfft(resampled - resampled.mean()))
    k = int(np.argmax(spectrum[1:])) + 1
    p0 = span / k
    a0 = float(np.ptp(ys)) / 2.0
    c0 = float(ys.mean())
    x0 = float(xs[np.argmax(ys)])
    init = np.array([a0, p0, x0, c0])
    lo_b = np.array([0.0, 2.0 * _median_spacing(xs), -np.inf, -np.inf])
    hi_b = np.array([np.inf, 4.0 * span, np.inf, np.inf])
    result = nlls_fit(
        cosine_model, xs, ys, init, bounds=(lo_b, hi_b),
        param_names=("amplitude", "period_deg", "phase_deg", "offset"),
    )
    if result.params["amplitude"] <= 0:
        raise DegenerateModelError("fitted amplitude vanished; period is unidentifiable")
    return result


# ---------------------------------------------------------------------------
# Single-line width with frequency conversion
# ---------------------------------------------------------------------------

def fit_linewidth(spectrum: SpectrumTrace) -> FitResult:
    """Single-Lorentzian fit of a line, reporting FWHM in pm and in GHz.

    The frequency width uses ``dnu = c * dlambda / lambda^2`` at the fitted
    center.
    """
    x = spectrum.wavelength_nm
    y = spectrum.counts
    if x.size < 8:
        raise InsufficientDataError("fewer than 8 samples in the spectrum")
    smooth = median_filter5(y)
    b0 = float(np.percentile(smooth, 10))
    i_peak = int(np.argmax(smooth))
    a0 = max(float(smooth[i_peak] - b0), 1e-12)
    w0 = _estimate_fwhm(x, np.clip(smooth - b0, 0.0, None), i_peak)
    spacing = _median_spacing(x)
    if w0 <= 0:
        w0 = max(4.0 * spacing, 1e-9)
    span = float(x[-1] - x[0])
    init = np.array([b0, a0, float(x[i_peak]), w0])
    lo_b = np.array([-np.inf, 0.0, x[0], max(0.1 * spacing, 1e-15)])
    hi_b = np.array([np.inf, np.inf, x[-1], 4.0 * span])
    result = nlls_fit(
        multi_lorentzian_model, x, y, init,
        bounds=(lo_b, hi_b), param_names=("background", "amp_1", "center_1", "fwhm_1"),
    )
    fwhm_nm = result.params["fwhm_1"]
    if fwhm_nm < 3.0 * spacing:
        raise UnderResolvedError(
            f"fitted FWHM {fwhm_nm:.4g} nm spans fewer than 3 samples ({spacing:.4g} nm each)"
        )
    center_nm = result.params["center_1"]
    i_c = result.param_names.index("center_1")
    i_w = result.param_names.index("fwhm_1")
    to_hz = SPEED_OF_LIGHT_M_S * 1e9 / center_nm**2  # Hz per nm of width
    fwhm_hz = fwhm_nm * to_hz
    result.params["fwhm_pm"] = fwhm_nm * 1e3
    result.sigma["fwhm_pm"] = result.sigma["fwhm_1"] * 1e3
    # d(nu)/d(center) = -2 c dlambda / lambda^3
    grad = {
        i_w: to_hz,
        i_c: -2.0 * fwhm_nm * SPEED_OF_LIGHT_M_S * 1e9 / center_nm**3,
    }
    sigma_hz = _propagated_sigma(result.covariance, grad)
    result.params["fwhm_mhz"] = fwhm_hz / 1e6
    result.sigma["fwhm_mhz"] = sigma_hz / 1e6
    result.params["fwhm_ghz"] = fwhm_hz / 1e9
    result.sigma["fwhm_ghz"] = sigma_hz / 1e9
    return result
