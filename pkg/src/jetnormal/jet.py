"""Weighted n-jet fitting of a height function z = J(x, y) over a patch.

Monomials are ordered by ascending total degree and, within a degree, by
ascending power of y::

    1, x, y, x^2, xy, y^2, x^3, x^2 y, x y^2, y^3, ...

so the coefficient of ``x**(k-j) * y**j`` sits at ``k(k+1)/2 + j``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import qr, solve_triangular
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError
from scipy.spatial.distance import pdist

from .errors import DegenerateHull, IllConditioned, InvalidNeighborhood, RankDeficient
from .geometry import PatchNeighborhood

DEFAULT_COND_CAP = 1e12


def n_coefficients(order_n: int) -> int:
    return (order_n + 1) * (order_n + 2) // 2


def monomial_exponents(order_n: int) -> np.ndarray:
    """``(N_n, 2)`` array of ``(x power, y power)`` in the declared order."""
    return np.array([(k - j, j) for k in range(order_n + 1) for j in range(k + 1)])


def monomial_index(a: int, b: int) -> int:
    """Position of ``x**a * y**b`` in the coefficient vector."""
    k = a + b
    return k * (k + 1) // 2 + b


@dataclass(frozen=True)
class JetCoefficients:
    order_n: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if self.order_n < 1:
            raise ValueError("jet order must be >= 1")
        if c.shape != (n_coefficients(self.order_n),):
            raise ValueError(
                f"order {self.order_n} needs {n_coefficients(self.order_n)} coefficients, got {c.shape}"
            )
        if not np.all(np.isfinite(c)):
            raise ValueError("non-finite jet coefficient")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __getitem__(self, ab):
        a, b = ab
        return self.coeffs[monomial_index(a, b)]

    def degree(self, k: int) -> np.ndarray:
        """Coefficients of total degree ``k``, ordered by y power."""
        start = k * (k + 1) // 2
        return self.coeffs[start : start + k + 1]

    def __call__(self, x, y):
        return vandermonde(np.column_stack([np.ravel(x), np.ravel(y)]), self.order_n) @ self.coeffs


def vandermonde(xy, order_n: int) -> np.ndarray:
    """Design matrix whose row ``i`` holds every monomial evaluated at ``xy[i]``."""
    xy = np.asarray(xy, dtype=float).reshape(-1, 2)
    if order_n < 1:
        raise ValueError("jet order must be >= 1")
    if not np.all(np.isfinite(xy)):
        raise ValueError("non-finite coordinates in Vandermonde input")
    x, y = xy[:, 0], xy[:, 1]
    # powers[p] = x**p, built by repeated products (exact for integer inputs)
    xp = [np.ones_like(x)]
    yp = [np.ones_like(y)]
    for _ in range(order_n):
        xp.append(xp[-1] * x)
        yp.append(yp[-1] * y)
    cols = [xp[a] * yp[b] for a, b in monomial_exponents(order_n)]
    return np.column_stack(cols)


def normal_from_jet(c: JetCoefficients) -> np.ndarray:
    """Unit normal ``(-b10, -b01, 1) / sqrt(b10^2 + b01^2 + 1)`` of the jet at the origin."""
    u = np.array([-c.coeffs[1], -c.coeffs[2], 1.0])
    return u / np.linalg.norm(u)


def check_weights(w, n_p: int) -> np.ndarray:
    w = np.asarray(w, dtype=float).ravel()
    if w.shape != (n_p,):
        raise ValueError(f"expected {n_p} weights, got {w.shape[0]}")
    if not np.all(np.isfinite(w)) or np.any(w < 0.0):
        raise ValueError("weights must be finite and nonnegative")
    return w


def uniform_weights(n_p: int) -> np.ndarray:
    return np.ones(int(n_p))


def gaussian_weights(patch: PatchNeighborhood, bandwidth: Optional[float] = None) -> np.ndarray:
    """``exp(-d_i^2 / bandwidth^2)`` with ``d_i`` the distance to the query.

    The default bandwidth is the median of the nonzero distances.
    """
    d = np.linalg.norm(patch.local_points, axis=1)
    if bandwidth is None:
        nz = d[d > 0.0]
        bandwidth = float(np.median(nz)) if len(nz) else 1.0
    if not bandwidth > 0.0:
        raise ValueError("bandwidth must be positive")
    return np.exp(-((d / bandwidth) ** 2))


@dataclass(frozen=True)
class _Factor:
    """Pivoted QR of the weighted, preconditioned system, kept for derivatives."""

    r: np.ndarray
    perm: np.ndarray
    design: np.ndarray  # preconditioned Vandermonde matrix (unweighted)

    def solve_gram(self, v: np.ndarray) -> np.ndarray:
        """Apply ``(M^T W M)^{-1}`` (preconditioned) to the columns of ``v``."""
        u = v[self.perm]
        s = solve_triangular(self.r, u, trans="T")
        t = solve_triangular(self.r, s)
        out = np.empty_like(t)
        out[self.perm] = t
        return out


@dataclass(frozen=True)
class JetFit:
    coefficients: JetCoefficients
    normal: np.ndarray
    residuals: np.ndarray
    weights_used: np.ndarray
    condition_estimate: float
    precondition_h: float
    iterations: int = 1
    flags: tuple = ()
    factor: Optional[_Factor] = field(default=None, repr=False, compare=False)

    @property
    def order_n(self) -> int:
        return self.coefficients.order_n


def fit_jet(
    patch: PatchNeighborhood,
    weights=None,
    order_n: int = 3,
    *,
    precondition: bool = True,
    cond_cap: float = DEFAULT_COND_CAP,
) -> JetFit:
    """Minimize ``sum w_i (J(x_i, y_i) - z_i)^2`` over degree-``order_n`` jets.

    Coordinates are divided by ``patch.scale_h`` before solving, and the
    returned coefficients are mapped back to the patch's units. The solve
    uses a column-pivoted QR of the row-scaled system ``sqrt(W) M``.

    Raises
    ------
    RankDeficient
        Fewer than ``N_n`` positive weights, or a numerically singular system.
    """
    n_n = n_coefficients(order_n)
    pts = patch.local_points
    n_p = len(pts)
    w = uniform_weights(n_p) if weights is None else check_weights(weights, n_p)
    if n_p < n_n or np.count_nonzero(w) < n_n:
        raise RankDeficient(
            f"order {order_n} needs {n_n} positively weighted points, have {np.count_nonzero(w)}"
        )
    h = patch.scale_h if precondition else 1.0
    scaled = pts / h
    design = vandermonde(scaled[:, :2], order_n)
    sw = np.sqrt(w)
    a = design * sw[:, None]
    q, r, perm = qr(a, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    tol = max(a.shape) * np.finfo(float).eps * diag[0]
    if diag[0] == 0.0 or diag[-1] <= tol:
        raise RankDeficient(f"weighted Vandermonde system is rank deficient (order {order_n})")
    cond = float(diag[0] / diag[-1])
    flags = ()
    if cond > cond_cap:
        warnings.warn(f"jet system condition estimate {cond:.3g} exceeds {cond_cap:.3g}", IllConditioned, stacklevel=2)
        flags = ("ill-conditioned",)
    sol = solve_triangular(r, q.T @ (sw * scaled[:, 2]))
    alpha_scaled = np.empty(n_n)
    alpha_scaled[perm] = sol
    residuals = h * (scaled[:, 2] - design @ alpha_scaled)
    degrees = monomial_exponents(order_n).sum(axis=1)
    coeffs = JetCoefficients(order_n, alpha_scaled * h ** (1.0 - degrees))
    return JetFit(
        coefficients=coeffs,
        normal=normal_from_jet(coeffs),
        residuals=residuals,
        weights_used=w,
        condition_estimate=max(cond, 1.0),
        precondition_h=h,
        flags=flags,
        factor=_Factor(r, perm, design),
    )


def irls_refit(
    patch: PatchNeighborhood,
    order_n: int = 3,
    max_iters: int = 10,
    tuning_c: float = 2.0,
    *,
    precondition: bool = True,
) -> JetFit:
    """Robust jet fit by iteratively reweighted least squares with Welsch weights.

    Starts from uniform weights; each refit uses
    ``w_i = exp(-(r_i / (c * s))^2)`` with ``s = 1.4826 * median|r|`` taken
    from the previous fit. Stops once the largest coefficient change relative
    to the largest coefficient drops below 1e-8, or after ``max_iters`` refits.
    A (near) perfect fit has no usable scale; it is returned as is with the
    ``"degenerate-scale"`` flag.
    """
    fit = fit_jet(patch, None, order_n, precondition=precondition)
    floor = 1e-14 * max(1.0, patch.scale_h)
    iterations = 1
    for _ in range(max_iters):
        med = float(np.median(np.abs(fit.residuals)))
        if med < floor:
            return _with(fit, iterations, fit.flags + ("degenerate-scale",))
        s = 1.4826 * med
        w = np.exp(-((fit.residuals / (tuning_c * s)) ** 2))
        new = fit_jet(patch, w, order_n, precondition=precondition)
        iterations += 1
        old_c, new_c = fit.coefficients.coeffs, new.coefficients.coeffs
        change = np.max(np.abs(new_c - old_c)) / max(np.max(np.abs(old_c)), 1e-300)
        fit = new
        if change < 1e-8:
            break
    return _with(fit, iterations, fit.flags)


def _with(fit: JetFit, iterations: int, flags: tuple) -> JetFit:
    return JetFit(
        fit.coefficients, fit.normal, fit.residuals, fit.weights_used,
        fit.condition_estimate, fit.precondition_h, iterations, flags, fit.factor,
    )


@dataclass(frozen=True)
class FlatnessDiagnostic:
    d_max: float
    d_min: float
    ratio: float


def flatness_ratio(patch: PatchNeighborhood) -> FlatnessDiagnostic:
    """Hull diameter over largest inscribed-disk diameter of the projected patch.

    The inscribed disk is the Chebyshev center of the convex hull, found by a
    small linear program over the hull edges.
    """
    xy = np.asarray(patch.local_points[:, :2])
    if len(xy) < 3:
        raise InvalidNeighborhood("flatness needs at least 3 points")
    d_max = float(pdist(xy).max())
    try:
        hull = ConvexHull(xy)
    except QhullError:
        raise DegenerateHull("projected points are collinear", d_max) from None
    if hull.volume <= 1e-12 * d_max * d_max:
        raise DegenerateHull("projected points are collinear", d_max)
    d_max = float(pdist(xy[hull.vertices]).max())
    # edge i: a_i . p + b_i <= 0 inside, with |a_i| = 1
    a, b = hull.equations[:, :2], hull.equations[:, 2]
    res = linprog(
        c=[0.0, 0.0, -1.0],
        A_ub=np.column_stack([a, np.linalg.norm(a, axis=1)]),
        b_ub=-b,
        bounds=[(None, None), (None, None), (0.0, None)],
        method="highs",
    )
    if not res.success:
        raise DegenerateHull(f"inscribed-disk program failed: {res.message}", d_max)
    d_min = 2.0 * float(res.x[2])
    if d_min <= 0.0:
        raise DegenerateHull("hull has no interior", d_max)
    return FlatnessDiagnostic(d_max, d_min, d_max / d_min)
