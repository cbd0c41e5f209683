"""Residual normal correction and the training-loss terms as plain scalars.

The consistency and regularization terms have no formula here; callers pass
them in as precomputed nonnegative numbers.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AntipodalPair, DegenerateSum, NegativeLoss
from .geometry import Z_AXIS, Rotation


@dataclass(frozen=True)
class LossWeights:
    lambda1: float = 0.25
    lambda2: float = 0.1
    lambda3: float = 2.0

    def __post_init__(self):
        for name in ("lambda1", "lambda2", "lambda3"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v >= 0.0):
                raise ValueError(f"{name} must be finite and nonnegative, got {v}")


@dataclass(frozen=True)
class LossBreakdown:
    l_normal: float
    l_con: float
    l_reg: float
    l_trans: float
    l_total: float


@dataclass(frozen=True)
class ResidualTerm:
    delta: np.ndarray

    def __post_init__(self):
        d = np.array(self.delta, dtype=float)
        if d.shape != (3,) or not np.all(np.isfinite(d)):
            raise ValueError(f"residual must be a finite 3-vector, got {self.delta!r}")
        d.setflags(write=False)
        object.__setattr__(self, "delta", d)


def apply_residual(rough, delta: ResidualTerm) -> np.ndarray:
    """``rough + delta``, renormalized to unit length.

    A zero residual returns ``rough`` itself (already unit), bit for bit.
    """
    rough = np.asarray(rough, dtype=float)
    if not np.any(delta.delta):
        return rough.copy()
    s = rough + delta.delta
    norm = np.linalg.norm(s)
    if norm < 1e-8:
        raise DegenerateSum(f"|rough + delta| = {norm:.3g} is too small to normalize")
    return s / norm


def sin_loss(gt, est) -> float:
    """Norm of the cross product of two unit vectors (sine of their angle)."""
    return float(np.linalg.norm(np.cross(gt, est)))


def normal_loss(gt, rough, refined) -> float:
    return sin_loss(gt, rough) + sin_loss(gt, refined)


def trans_loss(gt, t: Rotation) -> float:
    """Sine of the angle between the rotated normal ``t(gt)`` and +z."""
    return sin_loss(t.apply(gt), Z_AXIS)


def total_loss(
    l_normal: float,
    l_trans: float = 0.0,
    l_con: float = 0.0,
    l_reg: float = 0.0,
    lw: LossWeights = LossWeights(),
) -> LossBreakdown:
    parts = {"l_normal": l_normal, "l_con": l_con, "l_reg": l_reg, "l_trans": l_trans}
    for name, v in parts.items():
        if not np.isfinite(v) or v < 0.0:
            raise NegativeLoss(f"{name} must be finite and >= 0, got {v}")
    total = l_normal + lw.lambda1 * l_con + lw.lambda2 * l_reg + lw.lambda3 * l_trans
    return LossBreakdown(float(l_normal), float(l_con), float(l_reg), float(l_trans), float(total))


def oracle_residual(gt, rough) -> ResidualTerm:
    """The residual a perfect corrector would output: ``gt - rough``."""
    gt = np.asarray(gt, dtype=float)
    rough = np.asarray(rough, dtype=float)
    if np.linalg.norm(gt + rough) < 1e-8:
        raise AntipodalPair("ground truth and rough normal are antipodal")
    return ResidualTerm(gt - rough)
