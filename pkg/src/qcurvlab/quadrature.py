"""Quadrature rules on S^n adapted to integrands with few symmetry axes.

Everything integrated in this laboratory is built from zonal profiles about a
handful of base points, so integrands depend on x only through the dot
products with a d-dimensional subspace V = span(axes).  Writing
x = (y, sqrt(1-|y|^2) xi), y in B^d, xi in S^{n-d}, the sphere measure reduces
to

    dV = (1 - |y|^2)^{(n-d-1)/2} dy dS^{n-d}(xi),

so an exact rule on the weighted d-ball (times vol(S^{n-d})) integrates them.
For d = n+1 (generic axes) a full tensor-product rule on S^n is used.

All rules integrate the constant 1 to vol(S^n) exactly; Gauss components make
them exact for polynomials on the sphere up to the requested degree.
"""

from __future__ import annotations

import numpy as np
from scipy.special import roots_jacobi

from .gegenbauer import sphere_volume

__all__ = ["SubspaceRule", "zonal_rule", "full_sphere_rule", "subspace_rule"]


class SubspaceRule:
    """Nodes/weights for integrands depending on dot products with a span.

    Attributes
    ----------
    frame : (d, n+1) orthonormal rows spanning the resolved subspace
    coords : (N, d) node coordinates in the frame (projections of x)
    weights : (N,) quadrature weights, summing to vol(S^n)
    """

    def __init__(self, n, frame, coords, weights):
        self.n = n
        self.frame = np.asarray(frame, dtype=float)
        self.coords = np.asarray(coords, dtype=float)
        self.weights = np.asarray(weights, dtype=float)

    @property
    def size(self):
        return self.weights.size

    def dot(self, p):
        """Array of p . x_i over the nodes; p must lie in the resolved span."""
        p = np.asarray(p, dtype=float)
        proj = self.frame.T @ (self.frame @ p)
        if np.linalg.norm(p - proj) > 1e-10 * max(1.0, np.linalg.norm(p)):
            raise ValueError(
                "vector is outside the subspace resolved by this quadrature rule"
            )
        return self.coords @ (self.frame @ p)

    def covers(self, p):
        p = np.asarray(p, dtype=float)
        proj = self.frame.T @ (self.frame @ p)
        return np.linalg.norm(p - proj) <= 1e-10 * max(1.0, np.linalg.norm(p))

    def integrate(self, values):
        return float(np.dot(self.weights, values))


def _jacobi01(npts, alpha, beta):
    """Gauss-Jacobi rule for int_0^1 s^beta (1-s)^alpha f(s) ds."""
    x, w = roots_jacobi(npts, alpha, beta)
    s = 0.5 * (x + 1.0)
    w = w * 0.5 ** (alpha + beta + 1)
    return s, w


def _gauss_interval(npts, alpha):
    """Gauss rule for int_{-1}^1 (1-u^2)^alpha f(u) du."""
    u, w = roots_jacobi(npts, alpha, alpha)
    return u, w


def _surface_rule(m, degree):
    """Tensor rule on S^m exact for polynomials of total degree <= degree.

    Returns (points (N, m+1), weights (N,)).
    """
    if m == 0:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if m == 1:
        nphi = max(degree + 1, 4)
        ang = 2.0 * np.pi * (np.arange(nphi) + 0.5) / nphi
        pts = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        return pts, np.full(nphi, 2.0 * np.pi / nphi)
    nu = max((degree + 2) // 2, 2)
    u, wu = _gauss_interval(nu, (m - 2) / 2.0)
    sub_pts, sub_w = _surface_rule(m - 1, degree)
    s = np.sqrt(np.clip(1.0 - u * u, 0.0, None))
    pts = np.concatenate(
        [
            np.repeat(u, sub_pts.shape[0])[:, None],
            (s[:, None, None] * sub_pts[None, :, :]).reshape(-1, m),
        ],
        axis=1,
    )
    w = (wu[:, None] * sub_w[None, :]).ravel()
    return pts, w


def full_sphere_rule(n, degree):
    """Product quadrature over all of S^n (frame = identity)."""
    pts, w = _surface_rule(n, degree)
    return SubspaceRule(n, np.eye(n + 1), pts, w)


def zonal_rule(n, npts, axis):
    """Gauss rule for zonal integrands: int f(axis.x) dV on S^n."""
    axis = np.asarray(axis, dtype=float)
    u, w = _gauss_interval(npts, (n - 2) / 2.0)
    w = w * sphere_volume(n - 1)
    return SubspaceRule(n, axis[None, :] / np.linalg.norm(axis), u[:, None], w)


def _ball_rule(n, d, degree):
    """Weighted rule on B^d for the reduction of S^n integrals.

    int_{B^d} g(y) (1-|y|^2)^{(n-d-1)/2} dy * vol(S^{n-d})
    """
    beta = (n - d - 1) / 2.0
    if d == 1:
        u, w = _gauss_interval(max((degree + 2) // 2, 2), beta)
        return u[:, None], w * sphere_volume(n - 1)
    nr = max((degree + 2) // 2, 2)
    # radial: substitute s = r^2, int_0^1 r^{d-1}(1-r^2)^beta dr = 1/2 int s^{(d-2)/2}(1-s)^beta ds
    s, ws = _jacobi01(nr, beta, (d - 2) / 2.0)
    r = np.sqrt(s)
    ws = 0.5 * ws
    sph_pts, sph_w = _surface_rule(d - 1, degree)
    pts = (r[:, None, None] * sph_pts[None, :, :]).reshape(-1, d)
    w = (ws[:, None] * sph_w[None, :]).ravel() * sphere_volume(n - d)
    return pts, w


def subspace_rule(n, axes, degree):
    """Quadrature rule resolving all the given axes/directions.

    Parameters
    ----------
    n : sphere dimension
    axes : iterable of vectors in R^{n+1}; their span defines the resolved
        subspace.  Nearly dependent vectors are collapsed (svd cutoff 1e-12).
    degree : requested polynomial exactness (also controls node counts for
        the smooth-integrand use of the rule).
    """
    mat = np.array([np.asarray(a, dtype=float) for a in axes])
    if mat.ndim != 2 or mat.shape[1] != n + 1:
        raise ValueError("axes must be vectors in R^{n+1}")
    u_, sv, vt = np.linalg.svd(mat, full_matrices=False)
    rank = int(np.sum(sv > 1e-12 * sv[0])) if sv.size else 0
    rank = max(rank, 1)
    frame = vt[:rank]
    if rank == n + 1:
        return full_sphere_rule(n, degree)
    if rank == 1:
        rule = zonal_rule(n, max((degree + 2) // 2, 2), frame[0])
        return rule
    coords, w = _ball_rule(n, rank, degree)
    return SubspaceRule(n, frame, coords, w)
