"""Seeded patch samplers over analytic surfaces."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..errors import SamplingFailure
from ..geometry import PatchNeighborhood, Rotation, rotate_to_z
from .surfaces import AnalyticSurface

DENSITIES = ("uniform", "gradient", "striped")

# benchmark noise levels, as a fraction of the bounding-box diagonal
NOISE_LEVELS = {"none": 0.0, "low": 0.00125, "med": 0.006, "high": 0.012}


@dataclass(frozen=True)
class SampleSpec:
    """How to draw one patch.

    ``pre_align`` expresses the patch in the Monge frame of the query
    (exact normal on +z) before the tilt, so ``tilt_deg`` is exactly the
    angle between the returned ground-truth normal and +z. Without it the
    patch stays in the surface's parameter frame.
    """

    h: float
    n_points: int = 64
    noise_sigma_rel: float = 0.0
    density: str = "uniform"
    tilt_deg: float = 0.0
    seed: int = 0
    pre_align: bool = True

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("patch radius h must be positive")
        if self.n_points < 3:
            raise ValueError("n_points must be >= 3")
        if not self.noise_sigma_rel >= 0:
            raise ValueError("noise_sigma_rel must be >= 0")
        if self.density not in DENSITIES:
            raise ValueError(f"unknown density {self.density!r}; expected one of {DENSITIES}")

    def with_(self, **kw) -> "SampleSpec":
        return replace(self, **kw)


def _accept(density: str, x: np.ndarray, h: float, rng) -> np.ndarray:
    if density == "uniform":
        return np.ones(len(x), dtype=bool)
    if density == "gradient":
        # acceptance falls linearly from 1 at x = -h to 0.1 at x = +h
        p = 1.0 - 0.9 * (x + h) / (2.0 * h)
        return rng.random(len(x)) < p
    period = 2.0 * h / 5.0
    return np.mod(x + h, period) >= h / 5.0


def _disk_samples(spec: SampleSpec, rng, radius: float) -> np.ndarray:
    need = spec.n_points - 1
    out = []
    have, attempts = 0, 0
    budget = 100 * spec.n_points
    while have < need:
        if attempts >= budget:
            raise SamplingFailure(
                f"{spec.density} sampler accepted {have}/{need} points in {budget} attempts"
            )
        m = min(max(2 * (need - have), 16), budget - attempts)
        r = radius * np.sqrt(rng.random(m))
        t = 2.0 * np.pi * rng.random(m)
        x, y = r * np.cos(t), r * np.sin(t)
        ok = _accept(spec.density, x, radius, rng)
        attempts += m
        xy = np.column_stack([x, y])[ok]
        out.append(xy)
        have += len(xy)
    return np.concatenate(out)[:need]


def sample_patch(surface: AnalyticSurface, spec: SampleSpec):
    """Draw a noisy, tilted patch around the query of ``surface``.

    Returns ``(patch, gt_normal)``. Row 0 of the patch is the query point.
    Gaussian noise (std ``noise_sigma_rel`` times the clean patch's bounding
    box diagonal) is added to every height, the query included; the patch is
    then re-centered on the noisy query and rotated.
    """
    if spec.h >= surface.max_radius:
        raise ValueError(f"h={spec.h} exceeds the surface's domain radius {surface.max_radius}")
    rng = np.random.default_rng(spec.seed)
    xy = np.vstack([[0.0, 0.0], _disk_samples(spec, rng, spec.h)])
    z = surface.height(xy[:, 0], xy[:, 1])
    pts = np.column_stack([xy, z])
    if spec.noise_sigma_rel > 0.0:
        diag = float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))
        pts[:, 2] += rng.normal(0.0, spec.noise_sigma_rel * diag, len(pts))
        pts -= pts[0]
    else:
        # consume the same draws so noise level does not change the tilt axis
        rng.normal(0.0, 1.0, len(pts))
    gt = surface.normal(0.0, 0.0)

    rot = rotate_to_z(gt) if spec.pre_align else Rotation.identity()
    psi = 2.0 * np.pi * rng.random()
    tilt = Rotation.from_axis_angle([np.cos(psi), np.sin(psi), 0.0], np.radians(spec.tilt_deg))
    rot = tilt.compose(rot)
    if spec.pre_align or spec.tilt_deg != 0.0:
        pts = rot.apply(pts)
        gt = rot.apply(gt)
        gt = gt / np.linalg.norm(gt)
    patch = PatchNeighborhood(0, np.arange(len(pts)), pts)
    return patch, gt
