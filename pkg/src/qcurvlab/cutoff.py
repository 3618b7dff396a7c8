"""Smooth cutoff chi_rho used in the logarithmic splitting of the Green's
function and in the truncated bubble.

chi_rho(t) = t on [0, rho], = 2 rho for t >= 2 rho, takes values in
[rho, 2 rho] on the transition window and is monotone nondecreasing and C-inf.
The transition derivative is built as chi'(rho(1+v)) ~ (1 - S(v)) + c B(v)
where S is the flat-ended smoothstep, B the standard bump, and the overall
normalization fixes chi(2 rho) = 2 rho exactly.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import quad

from .errors import ValidationError

__all__ = ["smooth_step", "CutoffProfile"]


def _ramp(x):
    """exp(-1/x) for x > 0, zero otherwise (C-inf flat at 0)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def smooth_step(x):
    """C-inf monotone step: 0 for x <= 0, 1 for x >= 1, flat to all orders."""
    x = np.asarray(x, dtype=float)
    a = _ramp(x)
    b = _ramp(1.0 - x)
    return a / (a + b + 1e-300)


def _bump(v):
    v = np.asarray(v, dtype=float)
    out = np.zeros_like(v)
    inside = (v > 0) & (v < 1)
    out[inside] = np.exp(-1.0 / (v[inside] * (1.0 - v[inside])))
    return out


_BUMP_MASS = quad(lambda v: float(_bump(v)), 0.0, 1.0, epsabs=1e-14, epsrel=1e-13)[0]


def _transition_slope(v):
    """Unnormalized chi' on the transition window, flat at both ends."""
    return (1.0 - smooth_step(v)) + 0.5 / _BUMP_MASS * _bump(v)


class CutoffProfile:
    """chi_rho with cached grid values of the profile and its derivatives."""

    def __init__(self, rho, eta=None, rho_max=2.0, grid_n=4001):
        if rho <= 0:
            raise ValidationError("cutoff radius rho must be positive")
        if rho >= rho_max:
            raise ValidationError(f"rho must stay below {rho_max} (chart validity window)")
        if eta is not None and not 0 < 2 * eta < rho:
            raise ValidationError("separation scale must satisfy 0 < 2 eta < rho")
        self.rho = float(rho)
        self.eta = eta
        if grid_n % 2 == 0:
            grid_n += 1
        v = np.linspace(0.0, 1.0, grid_n)
        slope = _transition_slope(v)
        h = v[1] - v[0]
        # composite Simpson cumulative on even indices, trapezoid fill between
        cum = np.zeros_like(v)
        pair = (h / 3.0) * (slope[0:-2:2] + 4.0 * slope[1::2] + slope[2::2])
        cum[2::2] = np.cumsum(pair)
        cum[1::2] = cum[0:-1:2] + 0.5 * h * (slope[0:-1:2] + slope[1::2])
        norm = cum[-1]
        cum /= norm
        slope /= norm
        self._v = v
        self._cum = cum
        self._slope = slope
        self._d2 = np.gradient(slope, v) / self.rho
        # cached 1-D grid of the profile and derivatives (t, chi, chi', chi'')
        self.grid_t = self.rho * (1.0 + v)
        self.grid_chi = self.rho * (1.0 + cum)
        self.grid_dchi = slope
        self.grid_d2chi = self._d2

    def __call__(self, t):
        return self.eval(t)

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise ValidationError("cutoff argument must be nonnegative")
        scalar = t.ndim == 0
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty_like(t)
        lo = t <= self.rho
        hi = t >= 2.0 * self.rho
        mid = ~(lo | hi)
        out[lo] = t[lo]
        out[hi] = 2.0 * self.rho
        if np.any(mid):
            w = t[mid] / self.rho - 1.0
            out[mid] = self.rho * (1.0 + np.interp(w, self._v, self._cum))
        return float(out[0]) if scalar else out

    def deriv(self, t):
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        out = np.zeros_like(t)
        out[t <= self.rho] = 1.0
        mid = (t > self.rho) & (t < 2.0 * self.rho)
        if np.any(mid):
            w = t[mid] / self.rho - 1.0
            out[mid] = np.interp(w, self._v, self._slope)
        return float(out[0]) if scalar else out

    def deriv2(self, t):
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        out = np.zeros_like(t)
        mid = (t > self.rho) & (t < 2.0 * self.rho)
        if np.any(mid):
            w = t[mid] / self.rho - 1.0
            out[mid] = np.interp(w, self._v, self._d2)
        return float(out[0]) if scalar else out
