"""Static figures written next to the CSV outputs (Agg backend, PNG)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = [
    "plot_entropy",
    "plot_field_1d",
    "plot_field_2d",
    "plot_convergence",
    "plot_coefficients",
    "plot_overshoot",
]


def _save(fig, path) -> Path:
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_entropy(path, t, eta, balanced=None) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    t = np.asarray(t)
    ax.plot(t, np.asarray(eta) - eta[0], label="total entropy")
    if balanced is not None and np.any(np.asarray(balanced) != np.asarray(eta)):
        ax.plot(t, np.asarray(balanced) - balanced[0], "--", label="entropy + boundary outflow")
    ax.set_xlabel("t")
    ax.set_ylabel("change since t = 0")
    ax.legend()
    return _save(fig, path)


def plot_field_1d(path, x, surface_mean, surface_q, bottom_mean, probabilities) -> Path:
    """Mean surface with the outer quantile band and the mean bottom."""
    x = np.ravel(x)
    order = np.argsort(x, kind="stable")
    fig, ax = plt.subplots(figsize=(7, 4))
    q = np.reshape(surface_q, (len(probabilities), -1))
    if len(probabilities) >= 2:
        ax.fill_between(
            x[order], q[0][order], q[-1][order], alpha=0.3,
            label=f"surface quantiles {probabilities[0]:g}-{probabilities[-1]:g}",
        )
    ax.plot(x[order], np.ravel(surface_mean)[order], label="mean surface")
    ax.plot(x[order], np.ravel(bottom_mean)[order], "k", lw=1, label="mean bottom")
    ax.set_xlabel("x")
    ax.legend()
    return _save(fig, path)


def plot_field_2d(path, X, Y, surface_mean, surface_std) -> Path:
    x, y = np.ravel(X), np.ravel(Y)
    fig, axes = plt.subplots(1, 2, figsize=(11, 4.5))
    for ax, val, title in zip(axes, (surface_mean, surface_std), ("mean surface", "standard deviation")):
        tc = ax.tricontourf(x, y, np.ravel(val), levels=30)
        fig.colorbar(tc, ax=ax)
        ax.set_title(title)
        ax.set_aspect("equal")
    return _save(fig, path)


def plot_convergence(path, resolutions, errors: dict) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for label, errs in errors.items():
        ax.loglog(resolutions, errs, "o-", label=label)
    ax.set_xlabel("elements per direction")
    ax.set_ylabel("L2 error")
    ax.legend(fontsize="small")
    return _save(fig, path)


def plot_coefficients(path, x, coeffs) -> Path:
    coeffs = np.asarray(coeffs)
    fig, ax = plt.subplots(figsize=(7, 4))
    for k in range(coeffs.shape[-1]):
        ax.plot(x, coeffs[:, k], label=f"b{k + 1}")
    ax.set_xlabel("x")
    ax.legend(ncol=2, fontsize="small")
    return _save(fig, path)


def plot_overshoot(path, xi, columns: dict) -> Path:
    fig, axes = plt.subplots(1, 2, figsize=(11, 4))
    for ax, fname in zip(axes, ("f1", "f2")):
        for label, vals in columns.items():
            if label.startswith(fname):
                style = "k" if label == fname else "-"
                ax.plot(xi, vals, style, lw=2 if label == fname else 1, label=label)
        ax.axhline(0.0, color="gray", lw=0.5)
        ax.set_xlabel("xi")
        ax.legend(fontsize="small")
    return _save(fig, path)
