"""Unoriented angle-error metrics: RMSE, PGP and the PGP-vs-threshold AUC."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_PGP_THRESHOLDS = (5.0, 10.0)


def angle_error(a, b) -> np.ndarray | float:
    """Unoriented angle in degrees between unit vectors (or row stacks of them).

    Computed as ``atan2(|a x b|, |a . b|)``, which equals
    ``arccos(|a . b|)`` but keeps full precision near zero.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    cross = np.linalg.norm(np.cross(a, b), axis=-1)
    dot = np.abs(np.sum(a * b, axis=-1))
    out = np.degrees(np.arctan2(cross, dot))
    return float(out) if out.ndim == 0 else out


def _errors(errors) -> np.ndarray:
    e = np.asarray(errors, dtype=float).ravel()
    if e.size == 0:
        raise ValueError("error list is empty")
    return e


def rmse_deg(errors) -> float:
    e = _errors(errors)
    return float(np.sqrt(np.mean(e * e)))


def pgp(errors, alpha: float) -> float:
    """Fraction of errors strictly below ``alpha`` degrees."""
    e = _errors(errors)
    return float(np.count_nonzero(e < alpha) / e.size)


def auc_curve(errors, max_deg: float = 90.0):
    """PGP at 1-degree thresholds in ``(0, max_deg]`` and its mean.

    Returns ``(thresholds, curve, auc)``.
    """
    e = np.sort(_errors(errors))
    thresholds = np.arange(1.0, np.floor(max_deg) + 1.0)
    if thresholds.size == 0:
        raise ValueError("max_deg must be at least 1 degree")
    curve = np.searchsorted(e, thresholds, side="left") / e.size
    return thresholds, curve, float(np.mean(curve))


@dataclass(frozen=True)
class MetricsReport:
    rmse_deg: float
    pgp: dict
    auc: float
    count: int = 0


def metrics_report(errors, thresholds=DEFAULT_PGP_THRESHOLDS, max_deg: float = 90.0) -> MetricsReport:
    e = _errors(errors)
    return MetricsReport(
        rmse_deg=rmse_deg(e),
        pgp={float(a): pgp(e, a) for a in thresholds},
        auc=auc_curve(e, max_deg)[2],
        count=int(e.size),
    )
