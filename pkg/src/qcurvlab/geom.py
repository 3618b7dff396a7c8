"""Elementary geometry of the unit sphere S^n in R^{n+1}.

Points are unit vectors of length n+1.  Tangent vectors at p live in the
hyperplane p-perp of R^{n+1}.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "unit",
    "north_pole",
    "random_point",
    "geodesic_distance",
    "tangent_frame",
    "exp_map",
    "log_map",
    "parallel_transport",
    "rotation_from_to",
    "random_rotation",
]


def unit(v):
    v = np.asarray(v, dtype=float)
    nrm = np.linalg.norm(v)
    if nrm == 0.0:
        raise ValueError("zero vector has no direction")
    return v / nrm


def north_pole(n):
    p = np.zeros(n + 1)
    p[0] = 1.0
    return p


def random_point(n, rng):
    return unit(rng.standard_normal(n + 1))


def geodesic_distance(p, q):
    return float(np.arccos(np.clip(np.dot(p, q), -1.0, 1.0)))


def tangent_frame(p):
    """Orthonormal basis of the tangent space at p, shape (n, n+1).

    Deterministic for a given p: completes p by Householder reflection of the
    standard basis.
    """
    p = unit(p)
    dim = p.size
    e0 = np.zeros(dim)
    e0[0] = 1.0
    v = p + np.sign(p[0] if p[0] != 0 else 1.0) * e0
    v /= np.linalg.norm(v)
    house = np.eye(dim) - 2.0 * np.outer(v, v)
    # column 0 of house is -sign*p; the remaining columns span p-perp
    frame = house[:, 1:].T.copy()
    return frame


def exp_map(p, v):
    """Geodesic exponential: start at p with tangent velocity v."""
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    s = np.linalg.norm(v)
    if s < 1e-300:
        return p.copy()
    return np.cos(s) * p + np.sin(s) * (v / s)


def log_map(p, q):
    """Inverse of exp_map: tangent vector at p pointing to q."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    c = np.clip(np.dot(p, q), -1.0, 1.0)
    th = np.arccos(c)
    w = q - c * p
    nw = np.linalg.norm(w)
    if nw < 1e-300:
        return np.zeros_like(p)
    return th * w / nw


def parallel_transport(p, q, v):
    """Parallel transport of tangent vector v along the geodesic p -> q."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    v = np.asarray(v, dtype=float)
    c = np.dot(p, q)
    if c <= -1.0 + 1e-14:
        raise ValueError("transport to the antipode is not unique")
    w = v - np.dot(q, v) / (1.0 + c) * (p + q)
    return w


def rotation_from_to(p, q):
    """Rotation matrix of R^{n+1} mapping p to q, identity on span(p,q)-perp."""
    p = unit(p)
    q = unit(q)
    c = np.dot(p, q)
    if c >= 1.0 - 1e-15:
        return np.eye(p.size)
    if c <= -1.0 + 1e-15:
        raise ValueError("antipodal rotation is not unique; compose two rotations")
    # Rodrigues in the 2-plane spanned by p, w
    w = unit(q - c * p)
    s = np.sqrt(max(0.0, 1.0 - c * c))
    rot = np.eye(p.size)
    rot += (c - 1.0) * (np.outer(p, p) + np.outer(w, w))
    rot += s * (np.outer(w, p) - np.outer(p, w))
    return rot


def random_rotation(n, rng):
    """Haar-ish random rotation of R^{n+1} via QR of a Gaussian matrix."""
    mat = rng.standard_normal((n + 1, n + 1))
    q, r = np.linalg.qr(mat)
    q *= np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q
