"""Empirical convergence rates of jet coefficients and normals as h -> 0."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ExactFit
from ..jet import fit_jet
from .metrics import angle_error
from .sampling import SampleSpec, sample_patch
from .surfaces import AnalyticSurface

NOISE_FLOOR = 1e-12


@dataclass(frozen=True)
class ConvergenceReport:
    h_values: tuple
    errors: tuple
    slope: float
    slope_expected: float
    intercept: float = float("nan")
    quantity: str = "coefficient"


def loglog_slope(h_values, errors, floor: float = NOISE_FLOOR):
    """OLS fit of ``log(error) = slope * log(h) + intercept`` over errors above ``floor``.

    Returns ``(slope, intercept)``; both are NaN with fewer than two usable points.
    """
    h = np.asarray(h_values, dtype=float)
    e = np.asarray(errors, dtype=float)
    keep = e > floor
    if np.count_nonzero(keep) < 2:
        return float("nan"), float("nan")
    slope, intercept = np.polyfit(np.log(h[keep]), np.log(e[keep]), 1)
    return float(slope), float(intercept)


def _check_h(h_values):
    h = [float(v) for v in h_values]
    if len(h) < 2 or any(b >= a for a, b in zip(h, h[1:])) or h[-1] <= 0:
        raise ValueError("h_values must be positive and strictly decreasing, with at least 2 entries")
    return tuple(h)


def _study(surface, order_n, h_values, trials, n_points, seed, error_of, expected, quantity):
    if surface.kind not in ("plane", "sphere", "monge_poly", "monge_trig"):
        raise ValueError(f"unsupported surface {surface.kind!r}")
    h_values = _check_h(h_values)
    errors = []
    for h in h_values:
        acc = 0.0
        for t in range(trials):
            spec = SampleSpec(h=h, n_points=n_points, seed=seed + t, pre_align=False)
            patch, gt = sample_patch(surface, spec)
            acc += error_of(fit_jet(patch, None, order_n), gt)
        errors.append(acc / trials)
    slope, intercept = loglog_slope(h_values, errors)
    report = ConvergenceReport(h_values, tuple(errors), slope, float(expected), intercept, quantity)
    if np.isnan(slope):
        raise ExactFit("errors sit at the noise floor; the fit is exact", report)
    return report


def convergence_study(
    surface: AnalyticSurface,
    order_n: int,
    coeff_degree_k: int,
    h_values,
    trials: int = 50,
    *,
    n_points: int = 50,
    seed: int = 0,
) -> ConvergenceReport:
    """Mean over trials of the worst degree-k coefficient error, per patch radius.

    Noiseless patches are fitted in the surface's parameter frame and compared
    with the exact Taylor jet; the expected log-log slope is ``n - k + 1``.
    """
    if not 0 <= coeff_degree_k <= order_n:
        raise ValueError("coefficient degree must lie in [0, order_n]")
    true = surface.taylor(order_n).degree(coeff_degree_k)

    def err(fit, _gt):
        return float(np.max(np.abs(fit.coefficients.degree(coeff_degree_k) - true)))

    return _study(surface, order_n, h_values, trials, n_points, seed, err,
                  order_n - coeff_degree_k + 1, f"coefficient k={coeff_degree_k}")


def normal_convergence_study(
    surface: AnalyticSurface,
    order_n: int,
    h_values,
    trials: int = 50,
    *,
    n_points: int = 50,
    seed: int = 0,
) -> ConvergenceReport:
    """Same sweep as :func:`convergence_study`, measuring the normal's angle error (degrees)."""

    def err(fit, gt):
        return angle_error(fit.normal, gt)

    return _study(surface, order_n, h_values, trials, n_points, seed, err, order_n, "normal")
