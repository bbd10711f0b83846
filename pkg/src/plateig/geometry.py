"""Smooth closed boundary curves and their collocation grids.

All curves are 2*pi-periodic, counterclockwise, and analytic, so the
equispaced trapezoid rule converges spectrally on them.  Supported shapes:

    circle    x(t) = r (cos t, sin t)
    ellipse   x(t) = (a cos t, b sin t)
    deformed  x(t) = (0.75 cos t + eps cos 2t, sin t)
    peanut    x(t) = rho(t) (cos t, sin t),  rho(t) = sqrt(3 cos^2 t + 1) / 2
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "BoundaryCurve",
    "CollocationGrid",
    "make_curve",
    "grid",
    "area",
    "points_inside",
    "interior_points",
]

MIN_NODES = 16


@dataclass(frozen=True)
class BoundaryCurve:
    """Parametrized closed curve with two derivatives."""

    kind: str
    a: float = 1.0
    b: float = 1.0
    eps: float = 0.0

    def position(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "circle":
            return np.stack([self.a * np.cos(t), self.a * np.sin(t)], axis=-1)
        if self.kind == "ellipse":
            return np.stack([self.a * np.cos(t), self.b * np.sin(t)], axis=-1)
        if self.kind == "deformed":
            return np.stack(
                [0.75 * np.cos(t) + self.eps * np.cos(2 * t), np.sin(t)], axis=-1
            )
        rho = self._rho(t)
        return np.stack([rho * np.cos(t), rho * np.sin(t)], axis=-1)

    def velocity(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "circle":
            return np.stack([-self.a * np.sin(t), self.a * np.cos(t)], axis=-1)
        if self.kind == "ellipse":
            return np.stack([-self.a * np.sin(t), self.b * np.cos(t)], axis=-1)
        if self.kind == "deformed":
            return np.stack(
                [-0.75 * np.sin(t) - 2 * self.eps * np.sin(2 * t), np.cos(t)], axis=-1
            )
        rho, drho = self._rho(t), self._drho(t)
        return np.stack(
            [drho * np.cos(t) - rho * np.sin(t), drho * np.sin(t) + rho * np.cos(t)],
            axis=-1,
        )

    def acceleration(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "circle":
            return -self.position(t)
        if self.kind == "ellipse":
            return -self.position(t)
        if self.kind == "deformed":
            return np.stack(
                [-0.75 * np.cos(t) - 4 * self.eps * np.cos(2 * t), -np.sin(t)], axis=-1
            )
        rho, drho, ddrho = self._rho(t), self._drho(t), self._ddrho(t)
        return np.stack(
            [
                (ddrho - rho) * np.cos(t) - 2 * drho * np.sin(t),
                (ddrho - rho) * np.sin(t) + 2 * drho * np.cos(t),
            ],
            axis=-1,
        )

    def _rho(self, t):
        return 0.5 * np.sqrt(3 * np.cos(t) ** 2 + 1)

    def _drho(self, t):
        return -3 * np.sin(2 * t) / (8 * self._rho(t))

    def _ddrho(self, t):
        rho = self._rho(t)
        return -3 * np.cos(2 * t) / (4 * rho) - self._drho(t) ** 2 / rho


def make_curve(kind: str, **params) -> BoundaryCurve:
    """Build a validated BoundaryCurve.

    circle takes r, ellipse takes a and b, deformed takes eps, peanut takes
    no parameters.
    """
    allowed = {
        "circle": {"r"},
        "ellipse": {"a", "b"},
        "deformed": {"eps"},
        "peanut": set(),
    }
    if kind not in allowed:
        raise ValueError(f"unknown curve kind {kind!r}")
    extra = set(params) - allowed[kind]
    if extra:
        raise ValueError(f"{kind} does not take parameters {sorted(extra)}")
    if kind == "circle":
        r = float(params.get("r", 1.0))
        if r <= 0:
            raise ValueError("circle radius must be positive")
        return BoundaryCurve("circle", a=r)
    if kind == "ellipse":
        a = float(params.get("a", 1.0))
        b = float(params.get("b", 1.0))
        if a <= 0 or b <= 0:
            raise ValueError("ellipse semi-axes must be positive")
        return BoundaryCurve("ellipse", a=a, b=b)
    if kind == "deformed":
        eps = float(params.get("eps", 0.1))
        if not 0 <= eps <= 0.3:
            raise ValueError("deformation eps must lie in [0, 0.3]")
        return BoundaryCurve("deformed", eps=eps)
    return BoundaryCurve("peanut")


@dataclass(eq=False)
class CollocationGrid:
    """Equispaced parameter grid with pointwise geometry data."""

    curve: BoundaryCurve
    n: int
    t: np.ndarray
    points: np.ndarray
    normals: np.ndarray
    jacobians: np.ndarray
    curvatures: np.ndarray


def grid(curve: BoundaryCurve, n: int) -> CollocationGrid:
    """Collocation grid at t_j = 2 pi j / n.  n must be even and >= 16."""
    if n < MIN_NODES:
        raise ValueError(f"need at least {MIN_NODES} nodes, got {n}")
    if n % 2:
        raise ValueError(f"node count must be even, got {n}")
    t = 2 * np.pi * np.arange(n) / n
    p = curve.position(t)
    v = curve.velocity(t)
    a = curve.acceleration(t)
    jac = np.hypot(v[:, 0], v[:, 1])
    if np.any(jac <= 0):
        raise ValueError("degenerate parametrization: |x'(t)| vanishes")
    normals = np.stack([v[:, 1], -v[:, 0]], axis=-1) / jac[:, None]
    curv = (v[:, 0] * a[:, 1] - v[:, 1] * a[:, 0]) / jac**3
    return CollocationGrid(curve, n, t, p, normals, jac, curv)


def area(curve: BoundaryCurve, n: int = 4096) -> float:
    """Enclosed area via the shoelace integral (trapezoid rule)."""
    t = 2 * np.pi * np.arange(n) / n
    p = curve.position(t)
    v = curve.velocity(t)
    return float(0.5 * np.mean(p[:, 0] * v[:, 1] - p[:, 1] * v[:, 0]) * 2 * np.pi)


def points_inside(curve: BoundaryCurve, pts: np.ndarray, n_poly: int = 2048) -> np.ndarray:
    """Even-odd ray-casting test against a dense polygon sampling of the curve."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    poly = curve.position(2 * np.pi * np.arange(n_poly) / n_poly)
    x1, y1 = poly[:, 0], poly[:, 1]
    x2, y2 = np.roll(x1, -1), np.roll(y1, -1)
    px = pts[:, 0][:, None]
    py = pts[:, 1][:, None]
    crosses = (y1 > py) != (y2 > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        x_at = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
    hits = crosses & (px < x_at)
    return hits.sum(axis=1) % 2 == 1


def interior_points(
    curve: BoundaryCurve,
    count: int,
    rng: np.random.Generator,
    shrink: float = 0.9,
) -> np.ndarray:
    """Draw `count` points inside the curve, pulled toward the centroid.

    Rejection-samples the bounding box, keeps points that pass the interior
    test, then contracts each by `shrink` toward the centroid so none sits
    close to the boundary.  Deterministic for a given rng state.
    """
    if count < 1:
        raise ValueError("count must be positive")
    dense = curve.position(2 * np.pi * np.arange(1024) / 1024)
    lo, hi = dense.min(axis=0), dense.max(axis=0)
    centroid = dense.mean(axis=0)
    out = np.empty((count, 2))
    have = 0
    for _ in range(10_000):
        cand = rng.uniform(lo, hi, size=(4 * count, 2))
        cand = cand[points_inside(curve, cand)]
        cand = centroid + shrink * (cand - centroid)
        cand = cand[points_inside(curve, cand)]
        take = min(count - have, len(cand))
        out[have : have + take] = cand[:take]
        have += take
        if have == count:
            return out
    raise RuntimeError("interior point sampling failed to converge")
