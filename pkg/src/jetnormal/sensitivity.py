"""Derivatives of a weighted jet fit with respect to the point weights.

For ``alpha = G^{-1} M^T W z`` with ``G = M^T W M`` the derivative with
respect to ``w_i`` is ``G^{-1} m_i r_i``; both Gram solves reuse the
triangular factor kept on the fit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RankDeficient
from .geometry import PatchNeighborhood
from .jet import JetFit, monomial_exponents


@dataclass(frozen=True)
class WeightJacobian:
    d_alpha: np.ndarray  # (N_n, N_p)
    d_normal: np.ndarray  # (3, N_p)


def _factor(fit: JetFit, patch: PatchNeighborhood):
    if fit.factor is None:
        raise RankDeficient("fit carries no factorization")
    if fit.factor.design.shape[0] != patch.n_points:
        raise ValueError("fit and patch have different point counts")
    return fit.factor


def dalpha_dw(fit: JetFit, patch: PatchNeighborhood) -> np.ndarray:
    """``(N_n, N_p)`` Jacobian of the jet coefficients (original units)."""
    f = _factor(fit, patch)
    h = fit.precondition_h
    # residuals in preconditioned units are r / h
    rhs = f.design.T * (fit.residuals / h)[None, :]
    d_scaled = f.solve_gram(rhs)
    degrees = monomial_exponents(fit.order_n).sum(axis=1)
    return d_scaled * (h ** (1.0 - degrees))[:, None]


def dnormal_dw(fit: JetFit, patch: PatchNeighborhood) -> np.ndarray:
    """``(3, N_p)`` Jacobian of the unit normal; columns are tangent to the normal."""
    da = dalpha_dw(fit, patch)
    n = fit.normal
    c = fit.coefficients.coeffs
    norm_u = np.sqrt(c[1] ** 2 + c[2] ** 2 + 1.0)
    du = np.vstack([-da[1], -da[2], np.zeros(da.shape[1])])
    return (np.eye(3) - np.outer(n, n)) @ du / norm_u


def weight_jacobian(fit: JetFit, patch: PatchNeighborhood) -> WeightJacobian:
    return WeightJacobian(dalpha_dw(fit, patch), dnormal_dw(fit, patch))
