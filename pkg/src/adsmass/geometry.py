"""The AdS hyperboloid, its static and conformal charts, and pointwise norms
of Killing fields.

A Killing field acts on ambient points by y -> M y (see ``so32.to_matrix``);
restricted to the quadric eta(y, y) = -1 this is tangent to it.
"""

from __future__ import annotations

from dataclasses import dataclass
import itertools

import numpy as np
from scipy.optimize import minimize

from .errors import ChartBoundary, NotTimelike
from .so32 import ETA, KillingField, to_matrix

QUADRIC_TOL = 1e-10


def quadric_residual(y) -> float:
    y = np.asarray(y, dtype=float)
    return float(y @ ETA @ y + 1.0)


@dataclass(frozen=True)
class HyperboloidPoint:
    y: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float).reshape(-1)
        if y.shape != (5,):
            raise ValueError("a hyperboloid point has 5 coordinates")
        if abs(quadric_residual(y)) > QUADRIC_TOL * max(1.0, float(y @ y)):
            raise ValueError(f"point is off the quadric (residual {quadric_residual(y):.3g})")
        object.__setattr__(self, "y", y)


@dataclass(frozen=True)
class StaticChartPoint:
    t: float
    r: float
    theta: float
    phi: float

    def __post_init__(self):
        if self.r < 0 or not 0 <= self.theta <= np.pi or not 0 <= self.phi < 2 * np.pi:
            raise ValueError("static chart needs r >= 0, theta in [0, pi], phi in [0, 2 pi)")


@dataclass(frozen=True)
class ConformalPoint:
    x: np.ndarray
    u: float

    def consistency_residual(self) -> float:
        x = np.asarray(self.x, dtype=float)
        return float(0.25 * (x[1:] @ x[1:] - x[0] ** 2) - 1.0 - self.u)


def _coords(y):
    return np.asarray(getattr(y, "y", y), dtype=float)


def embed_static(p: StaticChartPoint) -> HyperboloidPoint:
    ch = np.sqrt(1.0 + p.r * p.r)
    st = np.sin(p.theta)
    return HyperboloidPoint(np.array([
        ch * np.sin(p.t),
        p.r * st * np.sin(p.phi),
        p.r * st * np.cos(p.phi),
        p.r * np.cos(p.theta),
        ch * np.cos(p.t),
    ]))


def to_conformal(y, tol=1e-14) -> ConformalPoint:
    y = _coords(y)
    if abs(y[4] - 1.0) <= tol * max(1.0, abs(y[4])):
        raise ChartBoundary("y4 = 1 lies outside the conformal chart")
    u = 2.0 / (y[4] - 1.0)
    return ConformalPoint(-u * y[:4], float(u))


def from_conformal(p: ConformalPoint, tol=1e-14) -> HyperboloidPoint:
    if abs(p.u) <= tol:
        raise ChartBoundary("u = 0 lies outside the conformal chart")
    x = np.asarray(p.x, dtype=float)
    return HyperboloidPoint(np.append(-x / p.u, 2.0 / p.u + 1.0))


def eval_killing(K: KillingField, y) -> np.ndarray:
    return to_matrix(K) @ _coords(y)


def norm_minus(K: KillingField, y) -> float:
    """-eta(K, K) at y."""
    v = eval_killing(K, y)
    return float(-(v @ ETA @ v))


# ---------------------------------------------------------------------------
# sampling and minimization

def sample_static(rng, n, rmax=10.0) -> np.ndarray:
    """n hyperboloid points: t, r uniform and the angles uniform on the sphere."""
    t = rng.uniform(0.0, 2 * np.pi, n)
    r = rng.uniform(0.0, rmax, n)
    cos_th = rng.uniform(-1.0, 1.0, n)
    phi = rng.uniform(0.0, 2 * np.pi, n)
    sin_th = np.sqrt(1.0 - cos_th ** 2)
    ch = np.sqrt(1.0 + r * r)
    return np.stack([ch * np.sin(t), r * sin_th * np.sin(phi), r * sin_th * np.cos(phi),
                     r * cos_th, ch * np.cos(t)], axis=-1)


def _lift(z):
    # (t, x) in R^4 -> hyperboloid; the static chart with x = r * (unit vector)
    t, x = z[0], z[1:]
    ch = np.sqrt(1.0 + x @ x)
    return np.array([ch * np.sin(t), x[0], x[1], x[2], ch * np.cos(t)])


def _is_timelike(K: KillingField, tol=0.0) -> bool:
    A = abs(K.A)
    nb, nc, nd = (np.linalg.norm(v) for v in (K.B, K.C, K.D))
    s2 = K.scale() ** 2
    return bool(A - max(nb, nc, nd) > tol * K.scale()
                and A * A + nd * nd - nb * nb - nc * nc > tol * s2)


def closed_form_min_norm(K: KillingField) -> float:
    return float(K.A ** 2 + K.D @ K.D - K.B @ K.B - K.C @ K.C)


def min_norm(K: KillingField, starts=64, seed=0, rmax=10.0, refine=8) -> float:
    """Numerical minimum of -eta(K, K) over the hyperboloid.

    The ``refine`` lowest of ``starts`` random static-chart points are
    polished by BFGS in the unconstrained coordinates (t, r * n).
    """
    if not _is_timelike(K):
        raise NotTimelike("needs |A| > max(|B|, |C|, |D|) and A^2 + |D|^2 > |B|^2 + |C|^2")
    M = to_matrix(K)
    G = M.T @ ETA @ M

    def f(z):
        t, x = z[0], z[1:]
        ch = np.sqrt(1.0 + x @ x)
        st, ct = np.sin(t), np.cos(t)
        y = np.array([ch * st, x[0], x[1], x[2], ch * ct])
        Gy = G @ y
        # chain rule through the lift
        dt = ch * (ct * Gy[0] - st * Gy[4])
        dx = Gy[1:4] + x / ch * (st * Gy[0] + ct * Gy[4])
        return -(y @ Gy), -2.0 * np.append(dt, dx)

    rng = np.random.default_rng(seed)
    pts = sample_static(rng, starts, rmax)
    z0s = np.column_stack([np.arctan2(pts[:, 0], pts[:, 4]), pts[:, 1:4]])
    vals = -np.einsum("ni,ij,nj->n", pts, G, pts)
    best = float(vals.min())
    for i in np.argsort(vals, kind="stable")[:refine]:
        res = minimize(f, z0s[i], jac=True, method="BFGS", options={"gtol": 1e-10})
        best = min(best, float(res.fun))
    return best


def _wedge_components(alpha, N):
    """The 10 components (a<b<c) of alpha ^ dalpha, with dalpha_{bc} = -2 N_{bc}."""
    out = []
    for a, b, c in itertools.combinations(range(5), 3):
        out.append(-2.0 * (alpha[..., a] * N[b, c] + alpha[..., b] * N[c, a] + alpha[..., c] * N[a, b]))
    return np.stack(out, axis=-1)


def frobenius_residual(K: KillingField, samples=128, seed=0, rmax=10.0) -> float:
    """max |alpha ^ dalpha| over sampled points, where alpha = eta(K, .).

    K is scaled to unit max-entry and each point to unit Euclidean length,
    so the result is dimensionless.
    """
    s = float(np.max(np.abs(K.vector)))
    if s == 0.0:
        return 0.0
    N = ETA @ to_matrix(K / s)
    ys = sample_static(np.random.default_rng(seed), samples, rmax)
    ys = ys / np.linalg.norm(ys, axis=1, keepdims=True)
    alpha = ys @ N.T
    return float(np.max(np.abs(_wedge_components(alpha, N))))
