"""Solvers for the coupled fabrication-offset / branching-ratio system.

Each emitter's measured enhancement pair defines a curve phi(eta_br): the
dipole-mode angle implied by the zeta ratios, inverted through the device's
geometry branch.  Two emitters in differently oriented devices share one
true (eta_br, phi), so the curves cross there; with three or more emitters
the curves generally fail to intersect exactly and the consensus solver
minimizes the mean absolute pairwise difference instead.

All solvers are pure and reentrant.  Grid scans are evaluated in index
order, so results are independent of any parallel dispatch a caller might
add.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateCurvesError, DomainError, NoIntersectionError, SnvCavityError
from .model import (
    EmitterSolution,
    EnhancementPair,
    PurcellSolution,
    purcell_from_zeta,
    tan_theta,
)

DEFAULT_BRACKET = (0.01, 0.99)
DEFAULT_TOL = 1e-6
DEFAULT_GRID_STEP = 1e-3
_CONSENSUS_REFINE_TOL = 1e-6
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def phi_of_eta(pair: EnhancementPair, eta_br: float, eta_dw: float) -> float:
    """Fabrication offset (degrees) implied by a pair at a trial branching ratio.

    theta = arctan(tan_theta) lies in [0, 90); it is mapped back to phi by
    inverting the fold branch the device geometry occupies at small offsets:
    x0 - theta when the nominal signed mode angle x0 is non-negative,
    x0 + theta otherwise.
    """
    theta = math.degrees(math.atan(tan_theta(pair, eta_dw, eta_br)))
    x0 = pair.geometry.nominal_mode_angle_deg
    return x0 - theta if x0 >= 0 else x0 + theta


@dataclass(frozen=True)
class PhiCurve:
    """phi(eta_br) for one emitter; callable on the solver bracket."""

    pair: EnhancementPair
    eta_dw: float
    label: str = ""

    def __call__(self, eta_br: float) -> float:
        return phi_of_eta(self.pair, eta_br, self.eta_dw)


def _common_eta_dw(curves) -> float:
    eta_dw = curves[0].eta_dw
    if any(c.eta_dw != eta_dw for c in curves):
        raise DomainError("all curves must share the same eta_dw")
    return eta_dw


def _check_bracket(bracket) -> tuple[float, float]:
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (0.0 < lo < hi < 1.0):
        raise DomainError(f"bracket must satisfy 0 < lo < hi < 1, got {bracket!r}")
    return lo, hi


def _emitter_solution(pair, eta_dw, eta_br) -> EmitterSolution:
    f_c, f_d = purcell_from_zeta(pair, eta_dw, eta_br)
    return EmitterSolution(
        theta_deg=math.degrees(math.atan2(f_d, f_c)),
        f_total=math.hypot(f_c, f_d),
        f_c=f_c,
        f_d=f_d,
        label=pair.label,
    )


def solve_pair(
    curve_a: PhiCurve,
    curve_b: PhiCurve,
    bracket: tuple[float, float] = DEFAULT_BRACKET,
    tol: float = DEFAULT_TOL,
) -> PurcellSolution:
    """Locate the crossing of two phi(eta) curves by bisection plus secant refinement.

    Raises :class:`NoIntersectionError` when the curve difference does not
    change sign on the bracket (the message reports both curves' endpoint
    values) and :class:`DegenerateCurvesError` when the curves coincide.
    """
    lo, hi = _check_bracket(bracket)
    eta_dw = _common_eta_dw((curve_a, curve_b))

    def diff(eta):
        return curve_a(eta) - curve_b(eta)

    probes = np.linspace(lo, hi, 7)
    probe_vals = [diff(e) for e in probes]
    if not all(math.isfinite(v) for v in probe_vals):
        raise DomainError("curve difference is non-finite inside the bracket")
    if max(abs(v) for v in probe_vals) < 1e-9:
        raise DegenerateCurvesError(
            "curves agree everywhere on the bracket; intersection is undefined"
        )
    f_lo, f_hi = probe_vals[0], probe_vals[-1]
    if f_lo == 0.0:
        eta = lo
    elif f_hi == 0.0:
        eta = hi
    elif f_lo * f_hi > 0:
        raise NoIntersectionError(
            "phi curves do not cross on the bracket: "
            f"at eta={lo} phi_a={curve_a(lo):.6g}, phi_b={curve_b(lo):.6g}; "
            f"at eta={hi} phi_a={curve_a(hi):.6g}, phi_b={curve_b(hi):.6g}"
        )
    else:
        a, b, fa, fb = lo, hi, f_lo, f_hi
        coarse = max(1e-3, tol)
        while b - a > coarse:
            m = 0.5 * (a + b)
            fm = diff(m)
            if fm == 0.0:
                a = b = m
                fa = fb = 0.0
                break
            if (fm > 0) == (fa > 0):
                a, fa = m, fm
            else:
                b, fb = m, fm
        x_prev, x_cur, f_prev, f_cur = a, b, fa, fb
        eta = x_cur
        for _ in range(80):
            if f_cur == f_prev:
                x_next = 0.5 * (a + b)
            else:
                x_next = x_cur - f_cur * (x_cur - x_prev) / (f_cur - f_prev)
                if not (a <= x_next <= b):
                    x_next = 0.5 * (a + b)
            f_next = diff(x_next)
            if f_next == 0.0:
                eta = x_next
                break
            if fa != 0.0 and (f_next > 0) == (fa > 0):
                a, fa = x_next, f_next
            else:
                b, fb = x_next, f_next
            step = abs(x_next - x_cur)
            x_prev, f_prev, x_cur, f_cur = x_cur, f_cur, x_next, f_next
            eta = x_cur
            if step < tol:
                break

    phi = 0.5 * (curve_a(eta) + curve_b(eta))
    return PurcellSolution(
        eta_br=eta,
        phi_deg=phi,
        per_emitter=(
            _emitter_solution(curve_a.pair, eta_dw, eta),
            _emitter_solution(curve_b.pair, eta_dw, eta),
        ),
        residual_deg=abs(diff(eta)),
        method="pair",
        eta_dw=eta_dw,
        bracket=(lo, hi),
        tol=tol,
    )


def consensus_objective(curves, eta_br: float) -> float:
    """Mean absolute pairwise difference of the curve values (degrees)."""
    values = [c(eta_br) for c in curves]
    total = 0.0
    n_pairs = 0
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            total += abs(values[i] - values[j])
            n_pairs += 1
    return total / n_pairs


def _golden_section(fn, a: float, b: float, xtol: float) -> float:
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = fn(x1), fn(x2)
    while b - a > xtol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = fn(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = fn(x2)
    return 0.5 * (a + b)


def solve_consensus(
    curves,
    bracket: tuple[float, float] = DEFAULT_BRACKET,
    grid_step: float = DEFAULT_GRID_STEP,
) -> PurcellSolution:
    """Minimize the averaged pairwise curve differences over the bracket.

    A coarse grid scan (``grid_step``) brackets the minimum, which is then
    refined by golden-section search to 1e-6 in eta.  The reported phi is
    the unweighted mean of all curve values at the solution; the minimized
    objective is reported as the residual, never absorbed.
    """
    curves = tuple(curves)
    if len(curves) < 2:
        raise DomainError("consensus solve needs at least two curves")
    lo, hi = _check_bracket(bracket)
    if grid_step <= 0:
        raise DomainError("grid_step must be positive")
    eta_dw = _common_eta_dw(curves)

    def objective(eta):
        return consensus_objective(curves, eta)

    grid = np.arange(lo, hi + 0.5 * grid_step, grid_step)
    grid[-1] = min(grid[-1], hi)
    values = np.array([objective(e) for e in grid])
    if not np.all(np.isfinite(values)):
        raise DomainError("consensus objective is non-finite on the bracket")
    i_best = int(np.argmin(values))
    a = grid[max(i_best - 1, 0)]
    b = grid[min(i_best + 1, grid.size - 1)]
    eta = _golden_section(objective, a, b, _CONSENSUS_REFINE_TOL)
    phi_values = [c(eta) for c in curves]
    return PurcellSolution(
        eta_br=eta,
        phi_deg=float(np.mean(phi_values)),
        per_emitter=tuple(_emitter_solution(c.pair, eta_dw, eta) for c in curves),
        residual_deg=objective(eta),
        method="consensus",
        eta_dw=eta_dw,
        bracket=(lo, hi),
        tol=_CONSENSUS_REFINE_TOL,
        grid_step=grid_step,
    )


def _resolve(pairs, solution: PurcellSolution) -> PurcellSolution:
    curves = [PhiCurve(p, solution.eta_dw, label=p.label) for p in pairs]
    if solution.method == "pair":
        return solve_pair(curves[0], curves[1], solution.bracket, solution.tol)
    return solve_consensus(curves, solution.bracket, solution.grid_step or DEFAULT_GRID_STEP)


def _solution_vector(sol: PurcellSolution) -> np.ndarray:
    out = [sol.eta_br, sol.phi_deg]
    for em in sol.per_emitter:
        out += [em.f_c, em.f_d]
    return np.array(out)


def propagate_uncertainty(
    solution: PurcellSolution,
    pairs,
    rel_step: float = 1e-4,
) -> PurcellSolution:
    """First-order uncertainty propagation through the full solve.

    The solve is differentiated numerically with respect to each zeta input
    (central differences, relative step ``rel_step``) and the sensitivities
    combined in quadrature with the pairs' sigma_zeta values.  If any
    sensitivity is non-finite (or a perturbed solve fails), the sigmas are
    omitted and ``sigma_valid`` is set False.
    """
    pairs = tuple(pairs)
    if len(pairs) != len(solution.per_emitter):
        raise DomainError("pairs must match the solution's per-emitter order")
    base = []
    sigmas = []
    for p in pairs:
        base += [p.zeta_c, p.zeta_d]
        sigmas += [p.sigma_zeta_c, p.sigma_zeta_d]
    base = np.array(base)
    sigmas = np.array(sigmas)

    def solve_at(zetas: np.ndarray) -> np.ndarray:
        perturbed = [
            replace(p, zeta_c=float(zetas[2 * i]), zeta_d=float(zetas[2 * i + 1]))
            for i, p in enumerate(pairs)
        ]
        return _solution_vector(_resolve(perturbed, solution))

    n_out = 2 + 2 * len(pairs)
    variance = np.zeros(n_out)
    valid = True
    for k in range(base.size):
        if sigmas[k] == 0.0:
            continue  # zero input sigma contributes exactly zero
        h = rel_step * abs(base[k])
        bumped_up = base.copy()
        bumped_dn = base.copy()
        bumped_up[k] += h
        bumped_dn[k] -= h
        try:
            sens = (solve_at(bumped_up) - solve_at(bumped_dn)) / (2.0 * h)
        except SnvCavityError:
            valid = False
            break
        if not np.all(np.isfinite(sens)):
            valid = False
            break
        variance += (sens * sigmas[k]) ** 2
    if not valid:
        return replace(
            solution,
            sigma_eta_br=None,
            sigma_phi_deg=None,
            sigma_valid=False,
            per_emitter=tuple(
                replace(em, sigma_f_c=None, sigma_f_d=None) for em in solution.per_emitter
            ),
        )
    sigma_out = np.sqrt(variance)
    per_emitter = tuple(
        replace(em, sigma_f_c=float(sigma_out[2 + 2 * i]), sigma_f_d=float(sigma_out[3 + 2 * i]))
        for i, em in enumerate(solution.per_emitter)
    )
    return replace(
        solution,
        sigma_eta_br=float(sigma_out[0]),
        sigma_phi_deg=float(sigma_out[1]),
        per_emitter=per_emitter,
        sigma_valid=True,
    )
