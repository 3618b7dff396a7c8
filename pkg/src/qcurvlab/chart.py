"""Stereographic chart and conformal normal factor on the sphere backend.

For a base point a the chart is the stereographic projection from the
antipode scaled so that the pulled-back round metric is conformally flat with
factor psi(y) = (1 + |y|^2/4)^{-1}: chart coordinates of x are

    y(x) = 2 x_perp / (1 + a.x),      |y| = 2 tan(theta/2),

and the flattened metric g_a = e^{2 u_a} g with u_a = -2 log cos(theta/2) is
*exactly* the flat dy^2 on the chart, with u_a(a) = 0 and grad u_a(a) = 0, so
the chart Laplacian at the center agrees with the ambient one.  The factor is
tapered to zero far from a by a flat smoothstep so that e^{n u_a} stays
integrable on the closed sphere; determinant-one normal coordinates hold on
the chart window where the taper is off.
"""

from __future__ import annotations

import numpy as np

from . import geom
from .cutoff import smooth_step
from .errors import SyntheticBackendError
from .pointwise import ZonalPointwise

__all__ = ["StereoChart", "conformal_factor", "chart_distance_profile"]


class StereoChart:
    """Chart data for a base point on S^n."""

    def __init__(self, model, a):
        self.model = model
        self.a = geom.unit(np.asarray(a, dtype=float))
        self.frame = geom.tangent_frame(self.a)

    def coords(self, x):
        """Chart coordinates y(x), shape (..., n)."""
        x = np.asarray(x, dtype=float)
        dots = x @ self.a
        perp = x - np.multiply.outer(dots, self.a)
        y = 2.0 * perp / (1.0 + dots)[..., None]
        return y @ self.frame.T

    def point(self, y):
        """Inverse chart map."""
        y = np.asarray(y, dtype=float)
        amb = y @ self.frame
        q = np.sum(y * y, axis=-1) / 4.0
        x = (np.multiply.outer(1.0 - q, self.a) + amb) / (1.0 + q)[..., None]
        return x

    def radius(self, x):
        """Chart distance d_{g_a}(a, x) = |y(x)| = 2 tan(theta/2)."""
        x = np.asarray(x, dtype=float)
        dots = np.clip(x @ self.a, -1.0, 1.0)
        return 2.0 * np.sqrt((1.0 - dots) / (1.0 + dots))

    @staticmethod
    def radius_of_theta(theta):
        return 2.0 * np.tan(np.asarray(theta, dtype=float) / 2.0)

    @staticmethod
    def theta_of_radius(r):
        return 2.0 * np.arctan(np.asarray(r, dtype=float) / 2.0)


def _taper(theta, th_flat, th_far):
    return 1.0 - smooth_step((np.asarray(theta) - th_flat) / (th_far - th_flat))


def conformal_factor(model, a, rho=0.5):
    """Conformal normal factor u_a and chart for the sphere backend.

    Returns (u_a as a pointwise zonal function, chart).  The factor equals
    -2 log cos(theta/2) (exactly flattening the metric, det g_a = 1) out to a
    chart radius comfortably beyond 2 rho, then tapers smoothly to zero.

    Raises on the synthetic backend, which carries no geometry.
    """
    if model.backend != "sphere":
        raise SyntheticBackendError("conformal normal factor requires the sphere backend")
    chart = StereoChart(model, a)
    th_flat = 2.0 * np.arctan(1.2 * rho)
    th_far = min(2.0 * np.arctan(5.0 * rho), 2.9)
    if th_far <= th_flat + 0.1:
        th_far = min(th_flat + 0.2, 3.05)

    def profile(theta):
        theta = np.asarray(theta, dtype=float)
        base = -2.0 * np.log(np.cos(theta / 2.0))
        return base * _taper(theta, th_flat, th_far)

    def dprofile(theta):
        theta = np.asarray(theta, dtype=float)
        base = -2.0 * np.log(np.cos(theta / 2.0))
        dbase = np.tan(theta / 2.0)
        tap = _taper(theta, th_flat, th_far)
        h = 1e-6
        dtap = (_taper(theta + h, th_flat, th_far) - _taper(theta - h, th_flat, th_far)) / (2 * h)
        return dbase * tap + base * dtap

    ua = ZonalPointwise(a, profile, dprofile, name="conformal_factor")
    return ua, chart


def chart_distance_profile(cutoff):
    """theta -> chi_rho(2 tan(theta/2)): cutoff-capped chart distance."""

    def profile(theta):
        return cutoff.eval(2.0 * np.tan(np.asarray(theta, dtype=float) / 2.0))

    return profile
