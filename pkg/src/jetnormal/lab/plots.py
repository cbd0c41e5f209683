"""Figures for lab reports, written straight to image files."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_convergence(report, path, title=None):
    """Log-log error against patch radius, with the fitted and expected slopes."""
    h = np.asarray(report.h_values)
    e = np.asarray(report.errors)
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.loglog(h, e, "o-", label="measured")
    if np.isfinite(report.slope):
        ax.loglog(h, np.exp(report.intercept) * h**report.slope, "--",
                  label=f"fit slope {report.slope:.2f}")
        ref = e[0] * (h / h[0]) ** report.slope_expected
        ax.loglog(h, ref, ":", color="gray", label=f"slope {report.slope_expected:g}")
    ax.set_xlabel("patch radius h")
    ax.set_ylabel(f"{report.quantity} error")
    ax.set_title(title or f"convergence of {report.quantity}")
    ax.legend(frameon=False)
    _finish(fig, path)


def plot_zangle_profile(rows, path, title=None):
    """Mean error per z-angle bin for unaligned and z-aligned fits."""
    mids = [0.5 * (r.lo_deg + r.hi_deg) for r in rows]
    width = rows[0].hi_deg - rows[0].lo_deg if rows else 10.0
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(np.array(mids) - width / 5, [r.mean_unaligned for r in rows], width=0.4 * width, label="single fit, tilted frame")
    ax.bar(np.array(mids) + width / 5, [r.mean_aligned for r in rows], width=0.4 * width, label="z-aligned")
    ax.set_yscale("log")
    ax.set_xlabel("angle between true normal and z (deg)")
    ax.set_ylabel("mean angle error (deg)")
    ax.set_title(title or "normal error against z-angle")
    ax.legend(frameon=False)
    _finish(fig, path)


def plot_pgp_curves(curves: dict, path, title=None):
    """PGP against error threshold; ``curves`` maps a label to ``(thresholds, curve, auc)``."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, (t, c, auc) in curves.items():
        ax.plot(t, c, label=f"{label} (AUC {auc:.3f})")
    ax.set_xlabel("error threshold (deg)")
    ax.set_ylabel("fraction of good points")
    ax.set_ylim(0.0, 1.02)
    ax.set_title(title or "percentage of good points")
    ax.legend(frameon=False, fontsize=7)
    _finish(fig, path)


def plot_bench_rmse(rows, path, title=None):
    """Grouped RMSE bars, one group per (surface, condition)."""
    pipelines = list(dict.fromkeys(r.pipeline for r in rows))
    groups = list(dict.fromkeys((r.surface, r.spec) for r in rows))
    lookup = {(r.surface, r.spec, r.pipeline): r.metrics.rmse_deg for r in rows}
    x = np.arange(len(groups))
    width = 0.8 / max(len(pipelines), 1)
    fig, ax = plt.subplots(figsize=(max(6, 1.2 * len(groups) + 3), 4))
    for i, p in enumerate(pipelines):
        vals = [lookup.get((g[0], g[1], p), np.nan) for g in groups]
        ax.bar(x + (i - (len(pipelines) - 1) / 2) * width, vals, width=width, label=p)
    labels = [f"{s}\nh={sp.h:g} n={sp.noise_sigma_rel:g}\n{sp.density} t={sp.tilt_deg:g}" for s, sp in groups]
    ax.set_xticks(x)
    ax.set_xticklabels(labels, fontsize=7)
    ax.set_ylabel("RMSE (deg)")
    ax.set_title(title or "normal RMSE by pipeline")
    ax.legend(frameon=False, fontsize=7, ncol=2)
    _finish(fig, path)
