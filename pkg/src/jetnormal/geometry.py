"""Core geometry: unit vectors, quaternion rotations, clouds and k-NN patches.

Points and vectors are plain ``numpy`` arrays of shape ``(3,)`` or ``(N, 3)``.
Containers are frozen dataclasses holding read-only arrays.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .errors import EmptyCloud, InvalidNeighborhood

Z_AXIS = np.array([0.0, 0.0, 1.0])


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


def unit(v, tol=1e-12):
    """Return ``v`` as a finite float array, checking it has unit norm."""
    v = np.asarray(v, dtype=float)
    if v.shape != (3,) or not np.all(np.isfinite(v)):
        raise ValueError(f"expected a finite 3-vector, got {v!r}")
    if abs(np.linalg.norm(v) - 1.0) > tol:
        raise ValueError(f"vector {v!r} is not unit length")
    return v


def normalize(v):
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v, axis=-1, keepdims=True)
    return v / n


@dataclass(frozen=True)
class Rotation:
    """Rotation stored as a unit quaternion ``(w, x, y, z)``.

    The quaternion is renormalized on construction. ``a.compose(b)`` is the
    rotation that applies ``b`` first and then ``a``.
    """

    quaternion: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.quaternion, dtype=float)
        if q.shape != (4,) or not np.all(np.isfinite(q)):
            raise ValueError(f"bad quaternion {q!r}")
        n = np.linalg.norm(q)
        if n == 0.0:
            raise ValueError("zero quaternion")
        q = q / n
        # canonical hemisphere: w >= 0 (q and -q are the same rotation)
        if q[0] < 0.0:
            q = -q
        object.__setattr__(self, "quaternion", _frozen(q))

    @classmethod
    def identity(cls) -> "Rotation":
        return cls(np.array([1.0, 0.0, 0.0, 0.0]))

    @classmethod
    def from_axis_angle(cls, axis, angle) -> "Rotation":
        axis = normalize(axis)
        half = 0.5 * angle
        return cls(np.concatenate([[np.cos(half)], np.sin(half) * axis]))

    @classmethod
    def from_matrix(cls, m) -> "Rotation":
        """Quaternion from a proper rotation matrix (Shepperd's method)."""
        m = np.asarray(m, dtype=float)
        tr = np.trace(m)
        diag = np.diag(m)
        i = int(np.argmax(np.concatenate([[tr], diag])))
        if i == 0:
            s = 2.0 * np.sqrt(1.0 + tr)
            q = [0.25 * s, (m[2, 1] - m[1, 2]) / s, (m[0, 2] - m[2, 0]) / s, (m[1, 0] - m[0, 1]) / s]
        elif i == 1:
            s = 2.0 * np.sqrt(1.0 + m[0, 0] - m[1, 1] - m[2, 2])
            q = [(m[2, 1] - m[1, 2]) / s, 0.25 * s, (m[0, 1] + m[1, 0]) / s, (m[0, 2] + m[2, 0]) / s]
        elif i == 2:
            s = 2.0 * np.sqrt(1.0 + m[1, 1] - m[0, 0] - m[2, 2])
            q = [(m[0, 2] - m[2, 0]) / s, (m[0, 1] + m[1, 0]) / s, 0.25 * s, (m[1, 2] + m[2, 1]) / s]
        else:
            s = 2.0 * np.sqrt(1.0 + m[2, 2] - m[0, 0] - m[1, 1])
            q = [(m[1, 0] - m[0, 1]) / s, (m[0, 2] + m[2, 0]) / s, (m[1, 2] + m[2, 1]) / s, 0.25 * s]
        return cls(np.array(q))

    @classmethod
    def random(cls, rng: np.random.Generator) -> "Rotation":
        """Uniformly distributed rotation."""
        return cls(rng.standard_normal(4))

    @cached_property
    def matrix(self) -> np.ndarray:
        w, x, y, z = self.quaternion
        m = np.array(
            [
                [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
                [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
                [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
            ]
        )
        m.setflags(write=False)
        return m

    def apply(self, v) -> np.ndarray:
        """Rotate a single vector ``(3,)`` or a stack of row vectors ``(N, 3)``."""
        v = np.asarray(v, dtype=float)
        return v @ self.matrix.T

    def compose(self, other: "Rotation") -> "Rotation":
        w1, x1, y1, z1 = self.quaternion
        w2, x2, y2, z2 = other.quaternion
        return Rotation(
            np.array(
                [
                    w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
                    w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
                    w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
                    w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
                ]
            )
        )

    def inverse(self) -> "Rotation":
        w, x, y, z = self.quaternion
        return Rotation(np.array([w, -x, -y, -z]))

    @property
    def angle(self) -> float:
        """Rotation angle in radians, in ``[0, pi]``."""
        w = min(1.0, abs(float(self.quaternion[0])))
        return 2.0 * float(np.arctan2(np.linalg.norm(self.quaternion[1:]), w))


def rotate_to_z(v) -> Rotation:
    """Minimal-angle rotation taking the unit vector ``v`` onto ``+z``.

    For ``v == -z`` exactly, where every horizontal axis is minimal, the
    half-turn about ``x`` is returned. Any other ``v``, however close to
    ``-z``, gets the rotation about ``v x z``, which stays
    exact because ``1 + v_z`` is computed without cancellation.
    """
    v = np.asarray(v, dtype=float)
    vx, vy, vz = v / np.linalg.norm(v)
    # v x z = (vy, -vx, 0)
    s2 = vx * vx + vy * vy
    if s2 == 0.0 and vz < 0.0:
        return Rotation(np.array([0.0, 1.0, 0.0, 0.0]))
    # w = 1 + vz, rewritten to avoid cancellation when vz ~ -1
    w = 1.0 + vz if vz >= 0.0 else s2 / (1.0 - vz)
    return Rotation(np.array([w, vy, -vx, 0.0]))


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray
    gt_normals: Optional[np.ndarray] = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, 3)
        if len(pts) == 0:
            raise EmptyCloud("point cloud has no points")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point cloud has non-finite coordinates")
        object.__setattr__(self, "points", _frozen(pts))
        if self.gt_normals is not None:
            nrm = np.asarray(self.gt_normals, dtype=float).reshape(-1, 3)
            if len(nrm) != len(pts):
                raise ValueError(
                    f"{len(nrm)} normals given for {len(pts)} points"
                )
            object.__setattr__(self, "gt_normals", _frozen(nrm))

    def __len__(self):
        return len(self.points)

    @cached_property
    def tree(self) -> cKDTree:
        return cKDTree(self.points)


@dataclass(frozen=True)
class PatchNeighborhood:
    """Neighbors of a query point in a frame centered on the query.

    ``scale_h`` is the largest distance from the origin among
    ``local_points`` (1 when every point sits on the origin).
    """

    query_index: int
    neighbor_indices: np.ndarray
    local_points: np.ndarray
    scale_h: float = field(init=False)

    def __post_init__(self):
        idx = np.asarray(self.neighbor_indices, dtype=np.int64).ravel()
        pts = np.asarray(self.local_points, dtype=float).reshape(-1, 3)
        if len(idx) != len(pts):
            raise InvalidNeighborhood("index and point counts differ")
        if self.query_index not in idx:
            raise InvalidNeighborhood("query point missing from its neighborhood")
        object.__setattr__(self, "neighbor_indices", _frozen(idx, np.int64))
        object.__setattr__(self, "local_points", _frozen(pts))
        h = float(np.max(np.linalg.norm(pts, axis=1))) if len(pts) else 0.0
        object.__setattr__(self, "scale_h", h if h > 0.0 else 1.0)

    @property
    def n_points(self) -> int:
        return len(self.local_points)

    @classmethod
    def from_local(cls, local_points, query_row=0) -> "PatchNeighborhood":
        """Wrap points already expressed relative to the query (row ``query_row``)."""
        pts = np.asarray(local_points, dtype=float).reshape(-1, 3)
        return cls(query_row, np.arange(len(pts)), pts)

    def without(self, i: int) -> "PatchNeighborhood":
        """Copy of the patch with row ``i`` removed (``i`` must not be the query)."""
        keep = np.ones(self.n_points, dtype=bool)
        keep[i] = False
        return PatchNeighborhood(
            self.query_index, self.neighbor_indices[keep], self.local_points[keep]
        )


def _distances(points, q):
    return np.sqrt(np.sum((points - q) ** 2, axis=1))


def knn_patch(cloud: PointCloud, query_index: int, k: int) -> PatchNeighborhood:
    """Exact ``k`` nearest neighbors of a cloud point, the query included.

    Equal distances are ordered by ascending point index, except that the
    query itself always comes first.
    """
    n = len(cloud)
    if not 0 <= query_index < n:
        raise IndexError(f"query index {query_index} out of range for {n} points")
    if not 1 <= k <= n:
        raise InvalidNeighborhood(f"k={k} must lie in [1, {n}]")
    q = cloud.points[query_index]
    if k == n:
        cand = np.arange(n)
    else:
        d, _ = cloud.tree.query(q, k=k)
        radius = float(np.atleast_1d(d)[-1])
        # widen so every point tied with the k-th distance is a candidate
        radius = radius * (1.0 + 1e-9) + 1e-300
        cand = np.asarray(cloud.tree.query_ball_point(q, radius), dtype=np.int64)
    dist = _distances(cloud.points[cand], q)
    # query first even among exact duplicates, then ascending index
    order = np.lexsort((cand, cand != query_index, dist))[:k]
    idx = cand[order]
    return PatchNeighborhood(query_index, idx, cloud.points[idx] - q)


def apply_rotation(r: Rotation, patch: PatchNeighborhood) -> PatchNeighborhood:
    return PatchNeighborhood(
        patch.query_index, patch.neighbor_indices, r.apply(patch.local_points)
    )
