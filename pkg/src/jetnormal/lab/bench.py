"""Monte-Carlo comparison of normal estimators on sampled analytic patches."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..alignment import pca_align, world_normal, z_align_iterate
from ..errors import JetNormalError
from ..geometry import Z_AXIS
from .metrics import MetricsReport, angle_error, metrics_report
from .sampling import SampleSpec, sample_patch

WEIGHTINGS = ("uniform", "gaussian", "irls")
PIPELINES = ("pca",) + tuple(
    f"jet-{w}/{mode}" for w in WEIGHTINGS for mode in ("single", "z-aligned")
)


def pca_normal(patch) -> np.ndarray:
    return pca_align(patch).inverse().apply(Z_AXIS)


def estimate_normal(patch, pipeline: str, order_n: int = 3) -> np.ndarray:
    """World-frame normal of ``patch`` (query at the origin) for a named pipeline.

    ``pca`` uses the least-variance axis. ``jet-<weights>/single`` fits once in
    the PCA frame, ``jet-<weights>/z-aligned`` iterates the z alignment with
    default tolerances, and ``jet-<weights>/none`` fits once in the patch's
    own frame.
    """
    if pipeline == "pca":
        return pca_normal(patch)
    try:
        head, mode = pipeline.split("/")
        weighting = head.split("-", 1)[1]
    except (ValueError, IndexError):
        raise ValueError(f"unknown pipeline {pipeline!r}") from None
    if weighting not in WEIGHTINGS:
        raise ValueError(f"unknown weighting in pipeline {pipeline!r}")
    if mode == "single":
        res = z_align_iterate(patch, weighting, order_n, max_iters=1)
    elif mode == "z-aligned":
        res = z_align_iterate(patch, weighting, order_n)
    elif mode == "none":
        res = z_align_iterate(patch, weighting, order_n, max_iters=1, start="identity")
    else:
        raise ValueError(f"unknown alignment mode in pipeline {pipeline!r}")
    return world_normal(res)


@dataclass(frozen=True)
class ProfileRow:
    lo_deg: float
    hi_deg: float
    mean_unaligned: float
    mean_aligned: float
    count: int
    failures: int = 0

    @property
    def empty(self) -> bool:
        return self.count == 0


def zangle_error_profile(
    surface,
    spec_template: SampleSpec,
    bins=tuple(range(0, 91, 10)),
    trials: int = 60,
    *,
    order_n: int = 3,
    weighting: str = "uniform",
    seed: int = 0,
):
    """Mean normal error per z-angle bin, without and with z alignment.

    ``bins`` are bin edges partitioning ``[0, 90]``. Trial ``t`` reuses the
    same sample seed and the same relative position inside every bin, so bins
    differ only in tilt. The unaligned estimate fits once in the tilted frame;
    the aligned one runs :func:`z_align_iterate` from the PCA frame.
    """
    edges = [float(b) for b in bins]
    if len(edges) < 2 or edges[0] != 0.0 or edges[-1] != 90.0 or any(b <= a for a, b in zip(edges, edges[1:])):
        raise ValueError("bins must be increasing edges from 0 to 90 degrees")
    offsets = np.random.default_rng(seed).random(trials)
    rows = []
    for lo, hi in zip(edges, edges[1:]):
        una, ali, fails = [], [], 0
        for t in range(trials):
            spec = spec_template.with_(tilt_deg=lo + (hi - lo) * offsets[t], seed=seed + t)
            patch, gt = sample_patch(surface, spec)
            try:
                n_u = world_normal(z_align_iterate(patch, weighting, order_n, max_iters=1, start="identity"))
                n_a = world_normal(z_align_iterate(patch, weighting, order_n))
            except JetNormalError:
                fails += 1
                continue
            una.append(angle_error(n_u, gt))
            ali.append(angle_error(n_a, gt))
        nan = float("nan")
        rows.append(ProfileRow(lo, hi, float(np.mean(una)) if una else nan,
                               float(np.mean(ali)) if ali else nan, len(una), fails))
    return rows


@dataclass(frozen=True)
class BenchRow:
    surface: str
    spec: SampleSpec
    pipeline: str
    metrics: MetricsReport
    failures: int


def compare_pipelines(surfaces: dict, specs, pipelines=PIPELINES, trials: int = 20, *, order_n: int = 3, seed: int = 0):
    """One :class:`BenchRow` per (surface, spec, pipeline).

    Every pipeline sees the same patches. Failed estimates are counted and
    left out of the metrics.
    """
    specs = list(specs)
    if not surfaces or not specs or not pipelines:
        raise ValueError("need at least one surface, one spec and one pipeline")
    rows = []
    for sname, surface in surfaces.items():
        for spec in specs:
            errs = {p: [] for p in pipelines}
            fails = dict.fromkeys(pipelines, 0)
            for t in range(trials):
                patch, gt = sample_patch(surface, spec.with_(seed=seed + t))
                for p in pipelines:
                    try:
                        errs[p].append(angle_error(estimate_normal(patch, p, order_n), gt))
                    except JetNormalError:
                        fails[p] += 1
            for p in pipelines:
                m = metrics_report(errs[p]) if errs[p] else MetricsReport(math.nan, {}, math.nan, 0)
                rows.append(BenchRow(sname, spec, p, m, fails[p]))
    return rows
