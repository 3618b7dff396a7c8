"""Operator primitives: GJMS apply/invert, sign-reversed operator, conformal
Laplacian, Q-weighted averages.

All operators act diagonally on harmonic degrees; fields are band-limited by
construction so the action is exact (no discretization error beyond
round-off).
"""

from __future__ import annotations

import numpy as np

from .errors import SolvabilityError
from .fields import Field

__all__ = [
    "apply_gjms",
    "invert_gjms",
    "pn_plus_apply",
    "pn_inner",
    "conformal_laplacian_apply",
    "q_average",
]

MEAN_ZERO = "mean_zero"
Q_MEAN_ZERO = "q_mean_zero"


def apply_gjms(model, u):
    """P^n u: diagonal action of the GJMS spectrum; annihilates constants."""
    if u.model is not model:
        raise_dim(u, model)
    return u.apply_diag(model.mu, const_factor=0.0)


def invert_gjms(model, f, normalization=Q_MEAN_ZERO, tol=1e-8):
    """Solve P^n u = f with the requested average of u set to zero.

    Preconditions: f integrates to zero (within tol * ||f||); all mu_k != 0
    for k >= 1.  For the constant-Q backends here the two normalizations
    coincide (mean and Q-mean agree on every field).
    """
    if f.model is not model:
        raise_dim(f, model)
    if normalization not in (MEAN_ZERO, Q_MEAN_ZERO):
        raise ValueError(f"unknown normalization {normalization!r}")
    model.require_invertible()
    fnorm = f.norm()
    if abs(f.integral()) > tol * max(fnorm, 1e-300):
        raise SolvabilityError(
            "right-hand side has nonzero mean: constants are not in the range of P^n"
        )
    inv = np.zeros(model.kmax + 1)
    inv[1:] = 1.0 / model.mu[1:]
    return f.apply_diag(inv, const_factor=0.0)


def pn_plus_apply(model, u):
    """Sign-reversed operator: P^n with negative eigenvalues flipped.

    Equals P^n u - 2 sum_r mu_r <u, v_r> v_r over the stored negative
    eigenpairs; diagonal |mu_k| per degree.
    """
    if u.model is not model:
        raise_dim(u, model)
    return u.apply_diag(model.mu_plus, const_factor=0.0)


def pn_inner(model, u, v, tol=1e-8):
    """<P^{n,+} u, v>: inner product on the Q-mean-zero subspace."""
    for w in (u, v):
        if abs(w.q_average()) > tol * max(w.norm(), 1e-300):
            raise SolvabilityError(
                "pn_inner requires Q-mean-zero fields; subtract the Q-average first"
            )
    return pn_plus_apply(model, u).inner(v)


def pn_norm(model, u, tol=1e-8):
    return float(np.sqrt(max(pn_inner(model, u, u, tol=tol), 0.0)))


def conformal_laplacian_apply(model, u):
    """L_g u = -Delta u + ((n-2)/(4(n-1))) R_g u."""
    if u.model is not model:
        raise_dim(u, model)
    factor = model.n * (model.n - 2) / 4.0
    return u.apply_diag(model.conformal_laplacian_eigs, const_factor=factor)


def q_average(model, u):
    """Average of u against Q^n dV / kappa (equals the mean for constant Q)."""
    if u.model is not model:
        raise_dim(u, model)
    return u.q_average()


def raise_dim(u, model):
    from .errors import DimensionMismatchError

    raise DimensionMismatchError(
        f"field on {u.model.backend}(n={u.model.n}, kmax={u.model.kmax}) "
        f"does not belong to {model.backend}(n={model.n}, kmax={model.kmax})"
    )
