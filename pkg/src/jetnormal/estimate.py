"""Per-point normal estimation over a whole cloud."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .alignment import pca_align, world_normal, z_align_iterate
from .errors import JetNormalError
from .geometry import Z_AXIS, PointCloud, knn_patch

ALIGN_MODES = ("none", "pca", "z-iterate")


def estimate_point(cloud: PointCloud, i: int, k: int, order_n: int = 3, weights: str = "uniform",
                   align: str = "z-iterate", tol_deg: float = 0.5, max_iters: int = 5):
    """Normal at point ``i``; returns ``(normal, failed)``.

    A failed jet fit falls back to the PCA normal of the same patch, and a
    degenerate patch to +z.
    """
    patch = knn_patch(cloud, i, k)
    try:
        if align == "z-iterate":
            res = z_align_iterate(patch, weights, order_n, tol_deg, max_iters)
        elif align == "pca":
            res = z_align_iterate(patch, weights, order_n, max_iters=1)
        elif align == "none":
            res = z_align_iterate(patch, weights, order_n, max_iters=1, start="identity")
        else:
            raise ValueError(f"unknown align mode {align!r}")
        return world_normal(res), False
    except JetNormalError:
        pass
    try:
        return pca_align(patch).inverse().apply(Z_AXIS), True
    except JetNormalError:
        return Z_AXIS.copy(), True


_shared = {}


def _init_worker(points, opts):
    _shared["cloud"] = PointCloud(points)
    _shared["opts"] = opts


def _run_chunk(indices):
    cloud, opts = _shared["cloud"], _shared["opts"]
    return [estimate_point(cloud, int(i), **opts) for i in indices]


def estimate_normals(cloud: PointCloud, k: int, *, order_n: int = 3, weights: str = "uniform",
                     align: str = "z-iterate", tol_deg: float = 0.5, max_iters: int = 5, jobs: int = 1):
    """Normals for every point, in input order, plus the count of fallbacks.

    Results do not depend on ``jobs``; chunks are reassembled in order.
    """
    if not 1 <= k <= len(cloud):
        raise ValueError(f"k={k} must lie in [1, {len(cloud)}]")
    opts = dict(k=k, order_n=order_n, weights=weights, align=align, tol_deg=tol_deg, max_iters=max_iters)
    n = len(cloud)
    if jobs <= 1:
        results = [estimate_point(cloud, i, **opts) for i in range(n)]
    else:
        chunks = np.array_split(np.arange(n), jobs * 4)
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(np.asarray(cloud.points), opts)) as ex:
            results = [r for part in ex.map(_run_chunk, chunks) for r in part]
    normals = np.array([r[0] for r in results]).reshape(-1, 3)
    failures = sum(1 for r in results if r[1])
    return normals, failures
