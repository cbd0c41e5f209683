"""Analytic test surfaces with exact normals and exact Taylor jets.

Every surface is expressed as a height function over the parameter plane,
in coordinates centered on the query point: ``height(0, 0) == 0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial

import numpy as np
from scipy.special import binom

from ..jet import JetCoefficients, monomial_index, n_coefficients

KINDS = ("plane", "sphere", "monge_poly", "monge_trig")

# query location on sin(x)cos(y); away from the origin no Taylor term vanishes
DEFAULT_TRIG_ORIGIN = (0.5, 0.3)


@dataclass(frozen=True)
class AnalyticSurface:
    """A height function ``z = f(x, y)`` around a query point.

    kind / params
        ``plane``: ``a``, ``b`` with ``f = a x + b y``.
        ``sphere``: ``radius``; the query is the north pole.
        ``monge_poly``: ``coeffs`` mapping ``(i, j)`` to the coefficient of
        ``x^i y^j``; the query is the origin.
        ``monge_trig``: ``amplitude``, ``frequency`` and ``origin`` with
        ``f = A sin(w (x0 + x)) cos(w (y0 + y)) - f(x0, y0)``.
    """

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown surface kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "sphere" and not self.params.get("radius", 1.0) > 0:
            raise ValueError("sphere radius must be positive")

    # constructors -----------------------------------------------------------
    @classmethod
    def plane(cls, a=0.0, b=0.0):
        return cls("plane", {"a": float(a), "b": float(b)})

    @classmethod
    def sphere(cls, radius=1.0):
        return cls("sphere", {"radius": float(radius)})

    @classmethod
    def monge_poly(cls, coeffs):
        return cls("monge_poly", {"coeffs": {tuple(k): float(v) for k, v in dict(coeffs).items()}})

    @classmethod
    def monge_trig(cls, amplitude=1.0, frequency=1.0, origin=DEFAULT_TRIG_ORIGIN):
        return cls(
            "monge_trig",
            {"amplitude": float(amplitude), "frequency": float(frequency), "origin": tuple(map(float, origin))},
        )

    @property
    def max_radius(self) -> float:
        """Largest parameter-plane radius over which the height function is defined."""
        if self.kind == "sphere":
            return self.params["radius"]
        return np.inf

    # evaluation -------------------------------------------------------------
    def height(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        p = self.params
        if self.kind == "plane":
            return p["a"] * x + p["b"] * y
        if self.kind == "sphere":
            r = p["radius"]
            return np.sqrt(r * r - x * x - y * y) - r
        if self.kind == "monge_poly":
            z = np.zeros(np.broadcast(x, y).shape)
            for (i, j), c in p["coeffs"].items():
                if i + j > 0:
                    z = z + c * x**i * y**j
            return z
        a, w = p["amplitude"], p["frequency"]
        x0, y0 = p["origin"]
        return a * np.sin(w * (x0 + x)) * np.cos(w * (y0 + y)) - a * np.sin(w * x0) * np.cos(w * y0)

    def gradient(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        p = self.params
        if self.kind == "plane":
            shape = np.broadcast(x, y).shape
            return np.full(shape, p["a"]), np.full(shape, p["b"])
        if self.kind == "sphere":
            s = np.sqrt(p["radius"] ** 2 - x * x - y * y)
            return -x / s, -y / s
        if self.kind == "monge_poly":
            fx = np.zeros(np.broadcast(x, y).shape)
            fy = np.zeros_like(fx)
            for (i, j), c in p["coeffs"].items():
                if i > 0:
                    fx = fx + c * i * x ** (i - 1) * y**j
                if j > 0:
                    fy = fy + c * j * x**i * y ** (j - 1)
            return fx, fy
        a, w = p["amplitude"], p["frequency"]
        x0, y0 = p["origin"]
        u, v = w * (x0 + x), w * (y0 + y)
        return a * w * np.cos(u) * np.cos(v), -a * w * np.sin(u) * np.sin(v)

    def normal(self, x=0.0, y=0.0) -> np.ndarray:
        """Unit normal with positive z at parameter point(s) ``(x, y)``."""
        fx, fy = self.gradient(x, y)
        u = np.stack([-fx, -fy, np.ones_like(fx)], axis=-1)
        return u / np.linalg.norm(u, axis=-1, keepdims=True)

    def taylor(self, order_n: int) -> JetCoefficients:
        """Exact degree-``order_n`` Taylor jet of the height at the query."""
        c = np.zeros(n_coefficients(order_n))
        p = self.params
        if self.kind == "plane":
            c[1], c[2] = p["a"], p["b"]
        elif self.kind == "monge_poly":
            for (i, j), v in p["coeffs"].items():
                if 0 < i + j <= order_n:
                    c[monomial_index(i, j)] += v
        elif self.kind == "sphere":
            # R (sqrt(1 - rho^2/R^2) - 1) = R sum_{m>=1} binom(1/2, m) (-rho^2/R^2)^m
            r = p["radius"]
            for m in range(1, order_n // 2 + 1):
                scale = r * binom(0.5, m) * (-1.0) ** m / r ** (2 * m)
                for t in range(m + 1):
                    c[monomial_index(2 * (m - t), 2 * t)] += scale * comb(m, t)
        else:
            a, w = p["amplitude"], p["frequency"]
            x0, y0 = p["origin"]
            for k in range(1, order_n + 1):
                for j in range(k + 1):
                    i = k - j
                    dx = np.sin(w * x0 + i * np.pi / 2)
                    dy = np.cos(w * y0 + j * np.pi / 2)
                    c[monomial_index(i, j)] = a * w**k * dx * dy / (factorial(i) * factorial(j))
        return JetCoefficients(order_n, c)

    def polynomial_degree(self):
        """Total degree of the height function, or ``None`` if not a polynomial."""
        if self.kind == "plane":
            return 1
        if self.kind == "monge_poly":
            degs = [i + j for (i, j), v in self.params["coeffs"].items() if v != 0.0 and i + j > 0]
            return max(degs, default=0)
        return None
