"""Self-contained SVG figures written next to the CSV reports.

Figures are rendered with the Agg backend and saved deterministically
(fixed hash salt, no embedded creation date) so identical inputs yield
identical files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams["svg.hashsalt"] = "snvcavity"
plt.rcParams["figure.figsize"] = (6.4, 4.2)

_SAVE_OPTS = {"format": "svg", "metadata": {"Date": None}, "bbox_inches": "tight"}


def _finish(fig, path):
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)


def save_fit_overlay(path, x, y, y_fit, xlabel, ylabel, title="", logy=False, sigma=None):
    """Data, fitted model, and residual panel in one figure."""
    fig, (ax, ax_res) = plt.subplots(
        2, 1, sharex=True, gridspec_kw={"height_ratios": [3, 1], "hspace": 0.08}
    )
    if sigma is not None:
        ax.errorbar(x, y, yerr=sigma, fmt=".", ms=4, color="0.3", label="data", lw=0.8)
    else:
        ax.plot(x, y, ".", ms=4, color="0.3", label="data")
    ax.plot(x, y_fit, "-", color="crimson", label="fit")
    if logy:
        ax.set_yscale("log")
    ax.set_ylabel(ylabel)
    ax.legend(frameon=False)
    if title:
        ax.set_title(title)
    ax_res.axhline(0.0, color="0.6", lw=0.8)
    ax_res.plot(x, np.asarray(y) - np.asarray(y_fit), ".", ms=3, color="0.3")
    ax_res.set_xlabel(xlabel)
    ax_res.set_ylabel("residual")
    _finish(fig, path)


def save_phi_curves(path, eta_grid, curves: dict, eta_star=None, phi_star=None):
    """Offset-angle curves versus trial branching ratio, with the solution marked."""
    fig, ax = plt.subplots()
    for label, values in curves.items():
        ax.plot(eta_grid, values, label=label)
    if eta_star is not None and phi_star is not None:
        ax.plot([eta_star], [phi_star], "o", color="black", ms=6, zorder=5)
        ax.annotate(
            f"({eta_star:.4f}, {phi_star:.2f}\N{DEGREE SIGN})",
            (eta_star, phi_star),
            textcoords="offset points",
            xytext=(8, 8),
        )
    ax.set_xlabel("branching ratio")
    ax.set_ylabel("fabrication offset (deg)")
    ax.legend(frameon=False)
    _finish(fig, path)


def save_histogram(path, values, xlabel, title="", bins="auto"):
    fig, ax = plt.subplots()
    ax.hist(np.asarray(values, dtype=float), bins=bins, color="0.4", edgecolor="white")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("devices")
    if title:
        ax.set_title(title)
    _finish(fig, path)
