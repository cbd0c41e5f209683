"""Slow, independent reference computations used only by the tests."""
import itertools

import numpy as np


def brute_knn(points, q_index, k):
    """k nearest by exhaustive distance sort; query first, then ascending index on ties."""
    points = np.asarray(points, dtype=float)
    q = points[q_index]
    d = np.sqrt(np.sum((points - q) ** 2, axis=1))
    keys = sorted(range(len(points)), key=lambda i: (d[i], i != q_index, i))
    return keys[:k]


def monomials_loop(x, y, n):
    """Row of monomials built by an explicit double loop."""
    row = []
    for k in range(n + 1):
        for j in range(k + 1):
            row.append(x ** (k - j) * y ** j)
    return row


def normal_equations_solve(points, w, n):
    """alpha = (M^T W M)^{-1} M^T W z, solved directly from the Gram matrix."""
    pts = np.asarray(points, dtype=float)
    m = np.array([monomials_loop(x, y, n) for x, y, _ in pts])
    g = m.T @ (w[:, None] * m)
    b = m.T @ (w * pts[:, 2])
    return np.linalg.solve(g, b)


def normal_of(alpha):
    u = np.array([-alpha[1], -alpha[2], 1.0])
    return u / np.linalg.norm(u)


def weighted_objective(points, w, alpha, n):
    pts = np.asarray(points, dtype=float)
    m = np.array([monomials_loop(x, y, n) for x, y, _ in pts])
    r = m @ alpha - pts[:, 2]
    return float(np.sum(w * r * r))


def central_difference(fun, w, i):
    """d fun / d w_i with step max(1e-6, 1e-6 w_i), clipped to keep w_i >= 0."""
    step = max(1e-6, 1e-6 * w[i])
    wp = w.copy()
    wm = w.copy()
    wp[i] += step
    wm[i] = max(0.0, w[i] - step)
    return (fun(wp) - fun(wm)) / (wp[i] - wm[i])


def hull_edges_bruteforce(xy, eps=1e-12):
    """Hull edges as (i, j) pairs with every point on the non-negative side."""
    xy = np.asarray(xy, dtype=float)
    edges = []
    for i, j in itertools.permutations(range(len(xy)), 2):
        a, b = xy[i], xy[j]
        if np.allclose(a, b):
            continue
        cross = (b[0] - a[0]) * (xy[:, 1] - a[1]) - (b[1] - a[1]) * (xy[:, 0] - a[0])
        scale = np.linalg.norm(b - a)
        if np.all(cross >= -eps * scale):
            # keep only edges whose endpoints are extreme along the line
            on = np.abs(cross) <= eps * scale
            t = (xy[on] - a) @ (b - a) / scale**2
            if t.min() >= -1e-12 and t.max() <= 1 + 1e-12:
                edges.append((i, j))
    return edges


def inscribed_diameter_grid(xy, n_grid=120, rounds=6):
    """Largest inscribed disk diameter by repeated local grid search."""
    xy = np.asarray(xy, dtype=float)
    anchors, normals = [], []
    for i, j in hull_edges_bruteforce(xy):
        a, b = xy[i], xy[j]
        t = (b - a) / np.linalg.norm(b - a)
        anchors.append(a)
        normals.append([-t[1], t[0]])  # left of a->b is inside
    anchors, normals = np.array(anchors), np.array(normals)
    offsets = np.sum(anchors * normals, axis=1)

    lo, hi = xy.min(axis=0), xy.max(axis=0)
    best = -np.inf
    center, half = (lo + hi) / 2, (hi - lo) / 2
    for _ in range(rounds):
        gx, gy = np.meshgrid(
            np.linspace(center[0] - half[0], center[0] + half[0], n_grid),
            np.linspace(center[1] - half[1], center[1] + half[1], n_grid),
        )
        grid = np.column_stack([gx.ravel(), gy.ravel()])
        clearance = (grid @ normals.T - offsets).min(axis=1)
        k = int(np.argmax(clearance))
        if clearance[k] > best:
            best, center = clearance[k], grid[k]
        half = half * 4.0 / n_grid
    return 2.0 * best


def diameter_bruteforce(xy):
    xy = np.asarray(xy, dtype=float)
    return max(np.linalg.norm(a - b) for a, b in itertools.combinations(xy, 2))
