"""Figure rendering for the CLI report path (matplotlib, file output only)."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["plot_potential", "plot_scan", "plot_width", "plot_perturbation"]


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_potential(x, v, psi, path) -> None:
    """Potential and embedded-state wavefunction over one window."""
    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    ax.axhline(0.0, color="0.8", lw=0.8)
    ax.plot(x, v, color="tab:blue", lw=1.2, label="V(x)")
    ax.plot(x, psi, color="tab:red", lw=1.2, label="psi(x)")
    ax.set_xlabel("x")
    ax.legend(loc="best")
    ax.set_title("potential and embedded state")
    _finish(fig, path)


def plot_scan(energies, abs_r, path, converged=None) -> None:
    """Reflection modulus against energy; non-converged points marked."""
    energies = np.asarray(energies)
    abs_r = np.asarray(abs_r)
    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    ax.plot(energies, abs_r, color="tab:blue", lw=1.2)
    if converged is not None:
        bad = ~np.asarray(converged, dtype=bool)
        if bad.any():
            ax.plot(energies[bad], abs_r[bad], "x", color="tab:orange", ms=4,
                    label="not converged")
            ax.legend(loc="best")
    ax.set_xlabel("E")
    ax.set_ylabel("|R(E)|")
    ax.set_ylim(0.0, 1.05)
    ax.set_title("reflection coefficient")
    _finish(fig, path)


def plot_width(c_values, fwhms, path) -> None:
    """Resonance width against the localization parameter c."""
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    ax.plot(c_values, fwhms, "o-", color="tab:blue")
    ax.set_xlabel("c")
    ax.set_ylabel("FWHM of |R|^2")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_title("resonance width vs c")
    _finish(fig, path)


def plot_perturbation(energies, base_abs_r, pert_abs_r, path) -> None:
    """Baseline vs left-perturbed reflection curves over the same window."""
    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    ax.plot(energies, base_abs_r, color="tab:blue", lw=1.2, label="baseline")
    ax.plot(energies, pert_abs_r, color="tab:red", lw=1.2, ls="--", label="perturbed")
    ax.set_xlabel("E")
    ax.set_ylabel("|R(E)|")
    ax.set_ylim(0.0, 1.05)
    ax.legend(loc="best")
    ax.set_title("left-side perturbation")
    _finish(fig, path)
