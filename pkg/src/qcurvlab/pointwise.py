"""Pointwise zonal functions (not band-limited).

Conformal factors, truncated bubbles and Green/regular-part evaluations are
smooth zonal functions of the polar angle about a base point but have
unbounded harmonic content; they are carried as angle profiles and only enter
computations pointwise (inside quadratures) or through Galerkin projections.
"""

from __future__ import annotations

import numpy as np

__all__ = ["ZonalPointwise"]


class ZonalPointwise:
    """f(x) = profile(theta(a, x)) with optional analytic theta-derivative."""

    def __init__(self, axis, profile, dprofile=None, name=""):
        self.axis = np.asarray(axis, dtype=float)
        self.axis = self.axis / np.linalg.norm(self.axis)
        self.profile = profile
        self.dprofile = dprofile
        self.name = name

    def theta(self, points):
        pts = np.asarray(points, dtype=float)
        dots = np.clip(pts @ self.axis, -1.0, 1.0)
        return np.arccos(dots)

    def eval(self, points):
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        th = self.theta(np.atleast_2d(pts))
        vals = self.profile(th)
        return float(vals[0]) if single else vals

    def eval_theta(self, theta):
        return self.profile(np.asarray(theta, dtype=float))

    def eval_rule(self, rule):
        dots = np.clip(rule.dot(self.axis), -1.0, 1.0)
        return self.profile(np.arccos(dots))

    def deriv_theta(self, theta):
        if self.dprofile is None:
            raise ValueError(f"profile {self.name!r} carries no derivative")
        return self.dprofile(np.asarray(theta, dtype=float))

    def __call__(self, points):
        return self.eval(points)
