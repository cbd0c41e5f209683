"""Frame selection before jet fitting.

The patch is first rotated into its PCA frame, then repeatedly fitted and
re-rotated so the fitted normal lands on +z. The jet's error constant shrinks
as the fitting frame approaches the Monge frame of the surface.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DegeneratePatch
from .geometry import PatchNeighborhood, Rotation, apply_rotation, rotate_to_z
from .jet import JetFit, fit_jet, gaussian_weights, irls_refit, uniform_weights

WeightPolicy = Union[str, Callable[[PatchNeighborhood], np.ndarray]]

# relative eigenvalue gap under which two PCA axes count as tied
_TIE_RTOL = 1e-9


@dataclass(frozen=True)
class AlignmentResult:
    rotation: Rotation
    fit: JetFit
    iterations: int
    final_z_angle_deg: float
    converged: bool = True
    angle_history: tuple = ()


def z_angle_deg(n) -> float:
    """Angle between ``n`` and +z, in degrees."""
    n = np.asarray(n, dtype=float)
    c = np.clip(n[2] / np.linalg.norm(n), -1.0, 1.0)
    return float(np.degrees(np.arccos(c)))


def pca_align(patch: PatchNeighborhood) -> Rotation:
    """Rotation taking the least-variance axis of the patch onto +z.

    The largest-variance axis goes to x. Among equally valid choices (sign
    flips, tied eigenvalues) the one closest to the identity is used, so a
    patch already lying in the xy-plane gets a rotation fixing +z.
    """
    pts = patch.local_points
    if len(pts) < 3:
        raise DegeneratePatch("PCA frame needs at least 3 points")
    centered = pts - pts.mean(axis=0)
    cov = centered.T @ centered / len(pts)
    evals, evecs = np.linalg.eigh(cov)  # ascending
    top = evals[2]
    if top <= 0.0 or evals[1] <= 1e-12 * top:
        raise DegeneratePatch("patch covariance has rank below 2")

    tied_low = evals[1] - evals[0] <= _TIE_RTOL * top
    tied_high = evals[2] - evals[1] <= _TIE_RTOL * top

    if tied_low:
        # normal anywhere in span(v0, v1): take the direction nearest +z
        basis = evecs[:, :2]
        proj = basis @ (basis.T @ np.array([0.0, 0.0, 1.0]))
        e3 = proj / np.linalg.norm(proj) if np.linalg.norm(proj) > 1e-12 else evecs[:, 0]
    else:
        e3 = evecs[:, 0]
    if e3[2] < 0.0 or (e3[2] == 0.0 and _first_nonzero(e3) < 0.0):
        e3 = -e3

    if tied_high:
        # in-plane angle maximizing the trace of [e1; e2; e3]
        u = np.cross(e3, [1.0, 0.0, 0.0]) if abs(e3[0]) < 0.9 else np.cross(e3, [0.0, 1.0, 0.0])
        u /= np.linalg.norm(u)
        v = np.cross(e3, u)
        phi = np.arctan2(v[0] - u[1], u[0] + v[1])
        e1 = np.cos(phi) * u + np.sin(phi) * v
    else:
        e1 = evecs[:, 2] - e3 * (evecs[:, 2] @ e3)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(e3, e1)
        if e1[0] + e2[1] < 0.0:
            e1 = -e1
    e2 = np.cross(e3, e1)
    return Rotation.from_matrix(np.vstack([e1, e2, e3]))


def _first_nonzero(v):
    nz = v[np.abs(v) > 0.0]
    return nz[0] if len(nz) else 0.0


def _fitter(weighting: WeightPolicy, order_n: int):
    if callable(weighting):
        return lambda p: fit_jet(p, weighting(p), order_n)
    if weighting == "uniform":
        return lambda p: fit_jet(p, uniform_weights(p.n_points), order_n)
    if weighting == "gaussian":
        return lambda p: fit_jet(p, gaussian_weights(p), order_n)
    if weighting == "irls":
        return lambda p: irls_refit(p, order_n)
    raise ValueError(f"unknown weighting {weighting!r}")


def z_align_iterate(
    patch: PatchNeighborhood,
    weighting: WeightPolicy = "uniform",
    order_n: int = 3,
    tol_deg: float = 0.5,
    max_iters: int = 5,
    *,
    start: str = "pca",
) -> AlignmentResult:
    """Fit, rotate the fitted normal onto +z, and refit until the angle is small.

    ``start`` picks the initial frame: ``"pca"`` or ``"identity"``. With
    ``max_iters=1`` this is a single fit in that frame. Hitting ``max_iters``
    with the angle still above ``tol_deg`` sets ``converged=False``.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    fit_one = _fitter(weighting, order_n)
    if start == "pca":
        rot = pca_align(patch)
    elif start == "identity":
        rot = Rotation.identity()
    else:
        raise ValueError(f"unknown start frame {start!r}")

    history = []
    for it in range(1, max_iters + 1):
        fit = fit_one(apply_rotation(rot, patch))
        angle = z_angle_deg(fit.normal)
        history.append(angle)
        if angle <= tol_deg or it == max_iters:
            break
        rot = rotate_to_z(fit.normal).compose(rot)
    return AlignmentResult(
        rotation=rot,
        fit=fit,
        iterations=it,
        final_z_angle_deg=angle,
        converged=angle <= tol_deg,
        angle_history=tuple(history),
    )


def world_normal(result: AlignmentResult) -> np.ndarray:
    """The fitted normal mapped back from the aligned frame to the patch frame."""
    n = result.rotation.inverse().apply(result.fit.normal)
    return n / np.linalg.norm(n)
