"""Green's function of P^n(.) + Q^n/m with mass (n-1)! omega_n, its
logarithmic splitting and the regular part H.

The zonal expansion about the base point has coefficients
``t_k = (n-1)! N_k / mu_k`` on the normalized kernels Ct_k.  The band
k <= kmax is summed directly with the model spectrum (synthetic edits
included); the k > kmax tail uses the round-sphere spectrum and is summed in
closed form through the Gegenbauer generating function:

    sum_{k>K} c_k C_k^nu(u) = int_0^1 w(s) [Phi_nu(s,u) - P_K(s,u)] ds,

where c_k (the coefficient of the *raw* Gegenbauer polynomial) is expanded in
partial fractions sum A/(k+b)^{p+1} and w(s) = sum A s^{b-1}(-log s)^p / p!.
This makes G, H and their first two u-derivatives available to near
round-off accuracy at any angle, which the reduced functional needs (H(a,a),
Delta H(a,a), Delta G at separated points).

Splitting convention: the chart distance about a is d = 2 tan(theta/2)
(stereographic chart in which the pulled-back metric is exactly flat and the
conformal factor is 1 with vanishing gradient at a), and

    G(a, x) = log(1 / chi_rho^2(d)) + H(a, x).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, log, pi, tan

import numpy as np
from numpy.polynomial import chebyshev as npcheb

from .errors import ResolutionError, SyntheticBackendError, ValidationError
from .cutoff import CutoffProfile
from .gegenbauer import (
    ctilde_norm,
    gegenbauer_raw,
    green_tail_weight_terms,
    harmonic_multiplicity,
)

__all__ = ["GreenProfile", "GreenPair", "green_profile", "green_pair", "regular_part_probe"]

_NEAR_THETA = 0.35          # switch angle between near-diagonal and far representations
_FIT_WINDOW = (0.03, 0.62)  # theta window for the even near-diagonal fit
_FIT_DEGREE = 9             # polynomial degree in theta^2


def _gauss_panels(breaks, npts=16):
    x, w = np.polynomial.legendre.leggauss(npts)
    nodes, weights = [], []
    for a, b in zip(breaks[:-1], breaks[1:]):
        nodes.append(0.5 * (b - a) * x + 0.5 * (a + b))
        weights.append(0.5 * (b - a) * w)
    return np.concatenate(nodes), np.concatenate(weights)


class GreenProfile:
    """Zonal profile machinery for one model (cached on the model)."""

    def __init__(self, model):
        self.model = model
        n = model.n
        K = model.kmax
        self.nu = (n - 1) / 2.0
        norms = np.array([ctilde_norm(n, k) for k in range(K + 1)], dtype=float)
        nk = np.array([harmonic_multiplicity(n, k) for k in range(K + 1)], dtype=float)
        t = np.zeros(K + 1)
        t[1:] = factorial(n - 1) * nk[1:] / model.mu[1:]
        self.t_band = t                      # coefficients of Ct_k, k <= K
        self.raw_band = t / norms            # coefficients of raw C_k^nu
        self.tail_terms = green_tail_weight_terms(n)
        self._snodes, self._sweights = self._build_s_rule(K)
        self._build_near()
        self._build_far()

    # -- tail machinery ----------------------------------------------------

    def _build_s_rule(self, K):
        s_lo = np.exp(-36.0 / (K + 1))
        width = 1.0 - s_lo
        breaks = [s_lo]
        w = width
        while w > 1e-9:
            w *= 0.5
            breaks.append(1.0 - w)
        breaks.append(1.0)
        return _gauss_panels(np.array(breaks), npts=16)

    def _tail(self, us, nder=0):
        """sum_{k>K} c_k^{round} C_k^nu(u) and u-derivatives, batched in u."""
        model = self.model
        n, K = model.n, model.kmax
        nu = self.nu
        s = self._snodes
        w = np.zeros_like(s)
        for amp, b, p in self.tail_terms:
            term = amp * s ** (b - 1)
            if p > 0:
                term = term * (-np.log(s)) ** p / factorial(p)
            w += term
        us = np.atleast_1d(np.asarray(us, dtype=float))
        out = []
        # remainder R_K and derivatives: run raw recurrences at nu, nu+1, nu+2
        # vectorized over the (s-nodes, u-batch) grid
        sg = s[:, None]
        ug = us[None, :]
        wsw = (self._sweights * w)[:, None]
        fac = 1.0
        for order in range(nder + 1):
            if order > 0:
                fac *= 2.0 * (nu + order - 1.0)
            kk = K - order
            nup = nu + order
            quad = 1.0 - 2.0 * sg * ug + sg * sg
            phi = quad ** (-nup)
            if kk >= 0:
                dm2 = np.ones_like(quad)
                acc = dm2.copy()
                dm1 = None
                if kk >= 1:
                    dm1 = 2.0 * nup * ug * sg
                    acc = acc + dm1
                for i in range(2, kk + 1):
                    d = (
                        2.0 * ug * (i + nup - 1.0) * sg * dm1
                        - (i + 2.0 * nup - 2.0) * sg * sg * dm2
                    ) / i
                    acc += d
                    dm2, dm1 = dm1, d
                phi = phi - acc
            phi *= fac * sg ** order
            out.append(np.einsum("sj,sj->j", np.broadcast_to(wsw, phi.shape), phi))
        return out if nder > 0 else out[0]

    def _band_tables(self, us, nder=0):
        model = self.model
        n, K = model.n, model.kmax
        nu = self.nu
        us = np.atleast_1d(np.asarray(us, dtype=float))
        vals = []
        fac = 1.0
        for order in range(nder + 1):
            if order > 0:
                fac *= 2.0 * (nu + order - 1.0)
            if K - order >= 0:
                raw = gegenbauer_raw(nu + order, K - order, us)
                coef = self.raw_band[order:]
                vals.append(fac * coef @ raw)
            else:
                vals.append(np.zeros_like(us))
        return vals

    def exact(self, us, nder=0):
        """G and u-derivatives by direct band sum + analytic tail (slow path)."""
        us = np.atleast_1d(np.asarray(us, dtype=float))
        band = self._band_tables(us, nder)
        tail = self._tail(us, nder)
        if nder == 0:
            return band[0] + tail
        return [b + t for b, t in zip(band, tail)]

    # -- near-diagonal representation ---------------------------------------

    def _build_near(self):
        lo, hi = _FIT_WINDOW
        m = 2 * (_FIT_DEGREE + 1)
        thetas = 0.5 * (hi + lo) + 0.5 * (hi - lo) * np.cos(
            np.pi * (np.arange(m) + 0.5) / m
        )
        g = self.exact(np.cos(thetas))
        hvals = g + 2.0 * np.log(2.0 * np.tan(thetas / 2.0))
        vander = np.vander(thetas ** 2, _FIT_DEGREE + 1, increasing=True)
        coef, res, *_ = np.linalg.lstsq(vander, hvals, rcond=None)
        self.near_coef = coef
        fitres = np.max(np.abs(vander @ coef - hvals))
        self.near_fit_residual = float(fitres)
        self.h_diag = float(coef[0])
        # Delta_{g_a} H(a,a) = n * d^2H/dtheta^2(0) = 2n c_2
        self.lap_h_diag = float(2.0 * self.model.n * coef[1])

    def _near_h(self, theta, nder=0):
        """H_near(theta) = G + 2 log(2 tan(theta/2)) as even polynomial fit."""
        t2 = theta * theta
        c = self.near_coef
        val = np.polynomial.polynomial.polyval(t2, c)
        if nder == 0:
            return val
        dc = c[1:] * np.arange(1, c.size)
        d_dt2 = np.polynomial.polynomial.polyval(t2, dc)
        dval = 2.0 * theta * d_dt2
        if nder == 1:
            return val, dval
        ddc = dc[1:] * np.arange(1, dc.size)
        dd = np.polynomial.polynomial.polyval(t2, ddc)
        d2val = 2.0 * d_dt2 + 4.0 * t2 * dd
        return val, dval, d2val

    # -- far representation ---------------------------------------------------

    def _build_far(self):
        ucut = np.cos(_NEAR_THETA)
        deg = self.model.kmax + 120
        j = np.arange(deg + 1)
        x = np.cos(np.pi * (j + 0.5) / (deg + 1))
        us = 0.5 * (ucut - (-1.0)) * x + 0.5 * (ucut + (-1.0))
        b = self.exact(us) + np.log(1.0 - us)
        self._far_dom = (-1.0, float(ucut))
        self._far_coef = npcheb.chebfit(x, b, deg)
        self._far_c1 = npcheb.chebder(self._far_coef)
        self._far_c2 = npcheb.chebder(self._far_c1)
        # interpolation sanity at midpoints
        mid = 0.5 * (us[:-1] + us[1:])
        err = np.max(np.abs(self._far_b(mid) - (self.exact(mid) + np.log(1.0 - mid))))
        self.far_fit_residual = float(err)

    def _to_x(self, u):
        a, b = self._far_dom
        return (2.0 * u - (a + b)) / (b - a)

    def _far_b(self, u, der=0):
        x = self._to_x(u)
        c = (self._far_coef, self._far_c1, self._far_c2)[der]
        scale = (2.0 / (self._far_dom[1] - self._far_dom[0])) ** der
        return npcheb.chebval(x, c) * scale

    # -- public evaluations ---------------------------------------------------

    def green(self, u, nder=0):
        """G(u) and u-derivatives, u = cos(geodesic angle), vectorized."""
        u = np.atleast_1d(np.asarray(u, dtype=float))
        out = [np.empty_like(u) for _ in range(nder + 1)]
        near = u > np.cos(_NEAR_THETA)
        far = ~near
        if np.any(far):
            uf = u[far]
            bvals = [self._far_b(uf, der=d) for d in range(nder + 1)]
            out[0][far] = bvals[0] - np.log(1.0 - uf)
            if nder >= 1:
                out[1][far] = bvals[1] + 1.0 / (1.0 - uf)
            if nder >= 2:
                out[2][far] = bvals[2] + 1.0 / (1.0 - uf) ** 2
        if np.any(near):
            un = np.clip(u[near], -1.0, 1.0)
            theta = np.arccos(un)
            theta = np.maximum(theta, 1e-154)
            hs = self._near_h(theta, nder=nder)
            hs = (hs,) if nder == 0 else hs
            # G = H_near - 2 log(2 tan(theta/2));  u-derivatives by chain rule
            logd = 2.0 * np.log(2.0 * np.tan(theta / 2.0))
            out[0][near] = hs[0] - logd
            if nder >= 1:
                sin = np.sin(theta)
                dtheta_du = -1.0 / sin
                dlogd_dth = 2.0 / sin
                gth = hs[1] - dlogd_dth
                out[1][near] = gth * dtheta_du
            if nder >= 2:
                cos = un
                gth2 = hs[2] + 2.0 * cos / sin ** 2
                # d2G/du2 = gth2 (dth/du)^2 + gth * d2th/du2; d2th/du2 = -cos/sin^3
                out[2][near] = gth2 / sin ** 2 - gth * cos / sin ** 3
        if nder == 0:
            return out[0]
        return out

    def h_chart(self, r, cutoff):
        """H(a, x) as a function of the chart radius r = 2 tan(theta/2)."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        theta = 2.0 * np.arctan(r / 2.0)
        u = np.cos(theta)
        g = self.green(u)
        chi = cutoff.eval(r)
        return g + 2.0 * np.log(chi)

    def g_chart(self, r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        theta = 2.0 * np.arctan(r / 2.0)
        return self.green(np.cos(theta))

    def laplacian_green_at(self, u):
        """(1-u^2) G'' - n u G' : Delta (in either argument's chart, at its
        center) of the Green's function at angular separation arccos(u)."""
        g0, g1, g2 = self.green(u, nder=2)
        u = np.atleast_1d(np.asarray(u, dtype=float))
        return (1.0 - u * u) * g2 - self.model.n * u * g1


def green_profile(model):
    """Profile cache, one per model object."""
    prof = getattr(model, "_green_profile", None)
    if prof is None:
        model.require_invertible()
        prof = GreenProfile(model)
        object.__setattr__(model, "_green_profile", prof)
    return prof


@dataclass
class GreenPair:
    """Green's function G(a, .) and regular part H(a, .) for a base point."""

    model: object
    a: np.ndarray
    cutoff: CutoffProfile
    field: object          # band-limited G(a,.) as a Field
    profile: GreenProfile
    grid_r: np.ndarray     # chart radii of the zonal grid
    grid_h: np.ndarray     # H(a,.) on the zonal grid
    h_diag: float
    tail_rel: float

    def g_at_point(self, x):
        u = float(np.clip(np.dot(self.a, x), -1.0, 1.0))
        return float(self.profile.green(u)[0])

    def h_at(self, r):
        """H(a, x) at chart radius r (pointwise, beyond band accuracy)."""
        return self.profile.h_chart(r, self.cutoff)

    def h_at_point(self, x):
        u = float(np.clip(np.dot(self.a, x), -1.0, 1.0))
        theta = np.arccos(u)
        r = 2.0 * np.tan(theta / 2.0)
        return float(self.h_at(r)[0])


def _tail_energy_rel(model):
    """Relative L2 weight of the neglected band k > kmax (round spectrum)."""
    n, K = model.n, model.kmax
    kk = np.arange(1, K + 1, dtype=float)

    def l2sq(ks, mus):
        nk = np.array([harmonic_multiplicity(n, int(k)) for k in ks])
        return np.sum(nk / mus ** 2)

    mus_band = model.mu[1:]
    band = l2sq(np.arange(1, K + 1), mus_band)
    ktail = np.arange(K + 1, 4 * K + 200)
    from .gegenbauer import gjms_eigenvalue_sphere

    mus_tail = np.array([gjms_eigenvalue_sphere(n, int(k)) for k in ktail])
    tail = l2sq(ktail, mus_tail)
    return float(np.sqrt(tail / (band + tail)))


def green_pair(model, a, cutoff, band=None, tail_threshold=1e-3):
    """Construct the GreenPair at base point a.

    The returned ``field`` carries the band-limited Galerkin coefficients
    (n-1)! omega_n s_k / mu_k about a; pointwise evaluations of G and H use
    the tail-accelerated profile so the splitting identity holds to round-off.
    """
    from .fields import Field

    if isinstance(cutoff, (int, float)):
        cutoff = CutoffProfile(float(cutoff))
    a = np.asarray(a, dtype=float)
    a = a / np.linalg.norm(a)
    if model.backend == "synthetic" and not model.is_axis_point(a, tol=1e-10):
        raise SyntheticBackendError(
            "synthetic backend supports Green pairs at +-axis base points only"
        )
    model.require_invertible()
    tail_rel = _tail_energy_rel(model)
    if tail_rel > tail_threshold:
        raise ResolutionError(
            f"band kmax={model.kmax} under-resolves the Green's function "
            f"(tail energy {tail_rel:.2e} > {tail_threshold:.0e}); increase k_max"
        )
    band = band or model.kmax
    prof = green_profile(model)
    kappa1 = factorial(model.n - 1) * model.omega_n
    coef = np.zeros(model.kmax + 1)
    coef[1:band + 1] = kappa1 * model.basis_scale[1:band + 1] / model.mu[1:band + 1]
    field = Field.zonal(model, a, coef)
    rule = model.zonal_quadrature(axis=a)
    theta = np.arccos(np.clip(rule.coords[:, 0], -1.0, 1.0))
    grid_r = 2.0 * np.tan(theta / 2.0)
    grid_h = prof.h_chart(grid_r, cutoff)
    return GreenPair(
        model=model,
        a=a,
        cutoff=cutoff,
        field=field,
        profile=prof,
        grid_r=grid_r,
        grid_h=grid_h,
        h_diag=prof.h_diag,
        tail_rel=tail_rel,
    )


def regular_part_probe(pair, radii, fd_step=None):
    """Sup/Lipschitz table of H near the base point on shrinking circles.

    Returns a list of rows {radius, sup_h, grad_h}; raises ResolutionError
    when a radius falls below the resolved angular scale.
    """
    rows = []
    model = pair.model
    resol = 2.0 * pi / model.kmax
    for r in radii:
        if r > pair.cutoff.rho:
            raise ValidationError("probe radii must stay within the chart window (<= rho)")
        if r < resol / 8.0:
            raise ResolutionError(
                f"probe radius {r:.3g} below grid resolution {resol:.3g}"
            )
        h = fd_step or max(1e-5, 1e-3 * r)
        h = min(h, 0.4 * r)
        vals = pair.h_at(np.array([r - h, r, r + h]))
        rows.append(
            {
                "radius": float(r),
                "sup_h": float(abs(vals[1])),
                "grad_h": float(abs((vals[2] - vals[0]) / (2.0 * h))),
            }
        )
    return rows


def write_green_profile_csv(pair, path):
    """CSV dump of (d(a,x), G, logpart, H) along the zonal grid."""
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dist", "G", "logpart", "H"])
        r = pair.grid_r
        chi = pair.cutoff.eval(r)
        logpart = np.log(1.0 / chi ** 2)
        g = logpart + pair.grid_h
        for i in range(r.size):
            writer.writerow(
                [
                    f"{r[i]:.17g}",
                    f"{g[i]:.17g}",
                    f"{logpart[i]:.17g}",
                    f"{pair.grid_h[i]:.17g}",
                ]
            )
