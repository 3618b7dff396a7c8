"""Gegenbauer / zonal-harmonic primitives on the round n-sphere.

Conventions used throughout the package:

* ``S^n`` is the unit sphere in ``R^{n+1}``, ``n`` even, with volume
  ``omega_n = vol(S^n)``.
* Degree-k spherical harmonics have multiplicity ``N_k`` and Laplacian
  eigenvalue ``lam_k = k(k+n-1)`` (for ``-Delta``).
* The zonal kernel of degree k is expressed through the normalized
  Gegenbauer polynomial ``Ct_k(u) = C_k^nu(u) / C_k^nu(1)`` with
  ``nu = (n-1)/2``, so that ``Ct_k(1) = 1`` and the addition theorem reads
  ``sum_j Y_kj(x) Y_kj(y) = (N_k/omega_n) Ct_k(x.y)``.
* The critical GJMS operator of order n on the round sphere acts on degree-k
  harmonics with eigenvalue ``mu_k = prod_{j=0}^{n/2-1} (lam_k + j(n-1-j))``;
  at n=4 this is the Paneitz operator ``Delta^2 - 2 Delta`` with
  ``mu_k = lam_k^2 + 2 lam_k``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, gamma, pi

import numpy as np

__all__ = [
    "sphere_volume",
    "harmonic_multiplicity",
    "laplacian_eigenvalue",
    "gjms_eigenvalue_sphere",
    "ctilde_norm",
    "ctilde_dn_at_one",
    "ctilde_table",
    "gegenbauer_raw",
    "green_tail_weight_terms",
]


def sphere_volume(d):
    """Volume of the unit d-sphere S^d in R^{d+1}."""
    return 2.0 * pi ** ((d + 1) / 2.0) / gamma((d + 1) / 2.0)


def harmonic_multiplicity(n, k):
    """Dimension N_k of the degree-k spherical harmonics on S^n."""
    if k == 0:
        return 1
    return comb(k + n, k) - comb(k + n - 2, k - 2)


def laplacian_eigenvalue(n, k):
    """Eigenvalue of -Delta on degree-k harmonics of S^n."""
    return float(k * (k + n - 1))


def gjms_eigenvalue_sphere(n, k):
    """Round-sphere eigenvalue of the order-n GJMS operator on degree k.

    Product of shifted Laplacians: prod_{j=0}^{n/2-1} (lam_k + j(n-1-j)).
    Exact integer arithmetic, returned as float.
    """
    lam = k * (k + n - 1)
    out = 1
    for j in range(n // 2):
        out *= lam + j * (n - 1 - j)
    return float(out)


def ctilde_norm(n, k):
    """C_k^nu(1) with nu=(n-1)/2, i.e. binom(k+n-2, k)."""
    return comb(k + n - 2, k)


def ctilde_dn_at_one(n, k, order):
    """d^order/du^order of Ct_k at u=1 (exact, as float).

    Uses d/du C_k^nu = 2 nu C_{k-1}^{nu+1}, hence
    Ct_k^{(p)}(1) = 2^p (nu)_p C_{k-p}^{nu+p}(1) / C_k^nu(1).
    """
    nu = Fraction(n - 1, 2)
    if order > k:
        return 0.0
    fac = Fraction(1)
    for i in range(order):
        fac *= 2 * (nu + i)
    # C_{k-p}^{nu+p}(1) = binom(k-p + 2(nu+p) - 1, k-p)
    top = comb(k - order + n - 2 + 2 * order, k - order)
    return float(fac * top / ctilde_norm(n, k))


def gegenbauer_raw(nu, kmax, u):
    """Raw Gegenbauer values C_k^nu(u) for k=0..kmax.

    Parameters
    ----------
    nu : float
    kmax : int
    u : array_like in [-1, 1]

    Returns
    -------
    (kmax+1, *u.shape) array.
    """
    u = np.asarray(u, dtype=float)
    out = np.empty((kmax + 1,) + u.shape)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = 2.0 * nu * u
    for k in range(2, kmax + 1):
        out[k] = (2.0 * u * (k + nu - 1.0) * out[k - 1] - (k + 2.0 * nu - 2.0) * out[k - 2]) / k
    return out


def ctilde_table(n, kmax, u, nder=0):
    """Normalized zonal polynomials Ct_k(u) and u-derivatives.

    Returns a list ``[val, d1, d2, ...]`` of ``(kmax+1, *u.shape)`` arrays up
    to derivative order ``nder``.  Derivatives use the parameter-shift
    identity d/du C_k^nu = 2 nu C_{k-1}^{nu+1}.
    """
    u = np.asarray(u, dtype=float)
    nu = (n - 1) / 2.0
    norms = np.array([ctilde_norm(n, k) for k in range(kmax + 1)], dtype=float)
    tables = []
    fac = 1.0
    for p in range(nder + 1):
        if p > 0:
            fac *= 2.0 * (nu + p - 1.0)
        raw = gegenbauer_raw(nu + p, kmax - p, u) if kmax - p >= 0 else np.zeros((0,) + u.shape)
        tab = np.zeros((kmax + 1,) + u.shape)
        if kmax - p >= 0:
            tab[p:] = fac * raw
        tab /= norms.reshape((-1,) + (1,) * u.ndim)
        tables.append(tab)
    return tables


@lru_cache(maxsize=None)
def green_tail_weight_terms(n):
    """Partial-fraction data for the round-sphere Green coefficient tail.

    The Green's function of P^n + Q^n/m on the round sphere (resonance m=1)
    has the zonal expansion ``G = sum_{k>=1} c_k C_k^nu(u)`` with raw
    coefficient ``c_k = (n-1)! N_k / (mu_k C_k^nu(1))``, a rational function
    of k whose poles are simple or double at nonpositive integers.  This
    returns terms (A, b, p) such that

        c_k = sum A / (k + b)^(p+1),

    so tails can be summed through the Gegenbauer generating function via
        1/(k+b)^(p+1) = int_0^1 s^{k+b-1} (-log s)^p / p! ds.
    """
    import sympy as sp

    k = sp.symbols("k")
    lam = k * (k + n - 1)
    mu = sp.prod([lam + j * (n - 1 - j) for j in range(n // 2)])
    nk = sp.binomial(k + n, n) - sp.binomial(k + n - 2, n)
    c1 = sp.binomial(k + n - 2, n - 2)
    ck = sp.factorial(n - 1) * nk / (mu * c1)
    parts = sp.apart(sp.simplify(sp.nsimplify(sp.expand(ck))), k)
    terms = []
    for term in sp.Add.make_args(parts):
        num, den = sp.fraction(sp.together(term))
        poly = sp.Poly(den, k)
        deg = poly.degree()
        if deg == 0:
            if sp.simplify(term) != 0:
                raise ValueError("unexpected polynomial part in tail weight")
            continue
        # den = lead * (k + b)^deg
        lead = poly.LC()
        roots = sp.roots(poly, k)
        if len(roots) != 1:
            raise ValueError("tail weight denominator not a pure power")
        root, mult = next(iter(roots.items()))
        b = -root
        if b < 0 or int(b) != b:
            raise ValueError("tail weight pole not a nonpositive integer")
        amp = sp.simplify(num / lead)
        if amp.free_symbols:
            raise ValueError("tail weight amplitude not constant")
        terms.append((float(amp), int(b), int(mult) - 1))
    return tuple(terms)
