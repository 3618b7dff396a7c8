"""Scalar fields as finite mixtures of zonal harmonics about a few axes.

Every field arising in this laboratory (prescribed functions, Green's
functions, projected bubbles and their parameter derivatives, negative
eigenmodes) is a sum of components of two kinds, plus a constant:

* zonal about a base point p:      sum_k c_k  s_k Ct_k(p.x)
* first azimuthal about (p, e):    sum_k c_k  s_k Ct_k'(p.x) (e.x) / sqrt(Ct_k'(1))

with s_k = sqrt(N_k/omega_n), e a unit tangent at p.  Both families are
L2-orthonormal within a fixed (axis, kind) sector; each component of degree k
is an eigenfunction of every spectral operator, so operator application is
diagonal and all L2 inner products between components are closed-form
contractions of the reproducing kernel (no quadrature, no aliasing).

The second kind arises as d/ds [zonal about p(s)] for a moving base point;
fit Jacobians and bubble center derivatives live there.

Synthetic backend: fields are restricted to the zonal sector about the model
axis (one mode per degree, see model docs); directional components and
off-axis zonal components are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, SyntheticBackendError, ValidationError
from .gegenbauer import ctilde_dn_at_one, ctilde_table

__all__ = ["Component", "Field"]

_AXIS_TOL = 1e-13


@dataclass
class Component:
    axis: np.ndarray          # unit vector in R^{n+1}
    coef: np.ndarray          # (kmax+1,), coef[0] == 0 (constants live on Field)
    direction: np.ndarray | None = None   # unit tangent at axis for the azimuthal kind

    @property
    def is_zonal(self):
        return self.direction is None

    def copy(self):
        return Component(
            self.axis.copy(),
            self.coef.copy(),
            None if self.direction is None else self.direction.copy(),
        )


def _flip_axis(comp):
    """Rewrite a component about -axis as one about +axis.

    Ct_k(-u) = (-1)^k Ct_k(u) and Ct_k'(-u) = (-1)^{k-1} Ct_k'(u).
    """
    k = np.arange(comp.coef.size)
    if comp.is_zonal:
        signs = np.where(k % 2 == 0, 1.0, -1.0)
    else:
        signs = np.where(k % 2 == 1, 1.0, -1.0)
    return Component(-comp.axis, comp.coef * signs, comp.direction)


class Field:
    """Immutable-by-convention scalar field on the model manifold."""

    def __init__(self, model, const=0.0, comps=()):
        self.model = model
        self.const = float(const)
        merged = []
        for comp in comps:
            self._check_component(comp)
            merged.append(comp)
        self.comps = self._merge(merged)

    # ---- construction helpers ------------------------------------------

    def _check_component(self, comp):
        model = self.model
        if comp.coef.shape != (model.kmax + 1,):
            raise DimensionMismatchError(
                f"coefficient length {comp.coef.size} does not match band {model.kmax + 1}"
            )
        if comp.coef[0] != 0.0:
            raise ValidationError("degree-0 coefficient must sit in Field.const")
        if model.backend == "synthetic":
            if comp.direction is not None:
                raise SyntheticBackendError(
                    "synthetic backend supports only zonal components about its axis"
                )
            if abs(abs(float(np.dot(comp.axis, model.axis))) - 1.0) > 1e-10:
                raise SyntheticBackendError(
                    "synthetic backend supports only components about +-axis"
                )

    @staticmethod
    def _merge(comps):
        out = []
        for comp in comps:
            if not np.any(comp.coef):
                continue
            placed = False
            for other in out:
                if (comp.direction is None) != (other.direction is None):
                    continue
                dot = float(np.dot(comp.axis, other.axis))
                cand = comp
                if dot < -1.0 + _AXIS_TOL:
                    cand = _flip_axis(comp)
                    dot = float(np.dot(cand.axis, other.axis))
                if dot > 1.0 - _AXIS_TOL:
                    if cand.direction is None and other.direction is None:
                        other.coef = other.coef + cand.coef
                        placed = True
                        break
                    if cand.direction is not None and other.direction is not None:
                        ddot = float(np.dot(cand.direction, other.direction))
                        if ddot > 1.0 - _AXIS_TOL:
                            other.coef = other.coef + cand.coef
                            placed = True
                            break
                        if ddot < -1.0 + _AXIS_TOL:
                            other.coef = other.coef - cand.coef
                            placed = True
                            break
            if not placed:
                out.append(comp.copy())
        return tuple(out)

    @classmethod
    def zeros(cls, model):
        return cls(model, 0.0, ())

    @classmethod
    def constant(cls, model, value):
        return cls(model, value, ())

    @classmethod
    def zonal(cls, model, axis, coef):
        coef = np.asarray(coef, dtype=float)
        if coef.size < model.kmax + 1:
            coef = np.concatenate([coef, np.zeros(model.kmax + 1 - coef.size)])
        const = coef[0] / np.sqrt(model.omega_n)
        coef = coef.copy()
        coef[0] = 0.0
        axis = np.asarray(axis, dtype=float) / np.linalg.norm(axis)
        return cls(model, const, (Component(axis, coef),))

    @classmethod
    def harmonic(cls, model, axis, k, amplitude=1.0):
        """amplitude times the L2-normalized zonal harmonic of degree k about axis."""
        coef = np.zeros(model.kmax + 1)
        coef[k] = amplitude
        return cls.zonal(model, axis, coef)

    @classmethod
    def azimuthal(cls, model, axis, direction, coef):
        """Component of the moving-axis kind (see module docstring)."""
        coef = np.asarray(coef, dtype=float).copy()
        if coef.size < model.kmax + 1:
            coef = np.concatenate([coef, np.zeros(model.kmax + 1 - coef.size)])
        coef[0] = 0.0
        axis = np.asarray(axis, dtype=float) / np.linalg.norm(axis)
        direction = np.asarray(direction, dtype=float)
        direction = direction - np.dot(direction, axis) * axis
        nrm = np.linalg.norm(direction)
        if nrm < 1e-14:
            raise ValidationError("azimuthal direction must have a tangential part")
        return cls(model, 0.0, (Component(axis, coef, direction / nrm),))

    # ---- algebra ---------------------------------------------------------

    def _require_same_model(self, other):
        if other.model is not self.model:
            raise DimensionMismatchError("fields live on different models")

    def __add__(self, other):
        if np.isscalar(other):
            return Field(self.model, self.const + float(other), self.comps)
        self._require_same_model(other)
        return Field(self.model, self.const + other.const, self.comps + other.comps)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (other * -1.0 if isinstance(other, Field) else -other)

    def __mul__(self, scalar):
        scalar = float(scalar)
        comps = tuple(
            Component(c.axis, c.coef * scalar, c.direction) for c in self.comps
        )
        return Field(self.model, self.const * scalar, comps)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    # ---- spectral action ---------------------------------------------------

    def apply_diag(self, eigs, const_factor=0.0):
        """Apply an operator diagonal on degrees: coefficient k scales by eigs[k]."""
        eigs = np.asarray(eigs, dtype=float)
        comps = tuple(
            Component(c.axis, c.coef * eigs, c.direction) for c in self.comps
        )
        return Field(self.model, self.const * const_factor, comps)

    # ---- inner products ------------------------------------------------------

    def inner(self, other):
        """L2(S^n) inner product, closed form."""
        self._require_same_model(other)
        model = self.model
        total = self.const * other.const * model.volume
        kmax = model.kmax
        dp1 = None
        for a in self.comps:
            for b in other.comps:
                c = float(np.dot(a.axis, b.axis))
                c = min(1.0, max(-1.0, c))
                if a.is_zonal and b.is_zonal:
                    tab = _ct_scalar(model.n, kmax, c)[0]
                    total += float(np.dot(a.coef * b.coef, tab))
                elif a.is_zonal != b.is_zonal:
                    zon, azi = (a, b) if a.is_zonal else (b, a)
                    d1 = _ct_scalar(model.n, kmax, c, nder=1)[1]
                    dp1 = _dprime1(model) if dp1 is None else dp1
                    geo = float(np.dot(azi.direction, zon.axis))
                    total += float(np.dot(zon.coef * azi.coef, d1 / np.sqrt(dp1))) * geo
                else:
                    tabs = _ct_scalar(model.n, kmax, c, nder=2)
                    d1 = tabs[1]
                    d2 = tabs[2]
                    dp1 = _dprime1(model) if dp1 is None else dp1
                    ge = float(np.dot(a.direction, b.axis))
                    gf = float(np.dot(b.direction, a.axis))
                    gef = float(np.dot(a.direction, b.direction))
                    total += float(
                        np.dot(a.coef * b.coef, (d2 * ge * gf + d1 * gef) / dp1)
                    )
        return total

    def norm(self):
        return float(np.sqrt(max(self.inner(self), 0.0)))

    def integral(self):
        return self.const * self.model.volume

    def mean(self):
        return self.const

    def q_average(self):
        """Average against Q dV / kappa; equals the plain mean for constant Q."""
        return self.const

    # ---- pointwise evaluation -------------------------------------------------

    def eval(self, points):
        """Values at points, shape (..., n+1)."""
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)
        model = self.model
        out = np.full(pts.shape[0], self.const)
        scale = model.basis_scale
        for comp in self.comps:
            dots = np.clip(pts @ comp.axis, -1.0, 1.0)
            if comp.is_zonal:
                tab = ctilde_table(model.n, model.kmax, dots)[0]
                out += (comp.coef * scale) @ tab
            else:
                tab = ctilde_table(model.n, model.kmax, dots, nder=1)[1]
                w = (comp.coef * scale / np.sqrt(_dprime1(model))) @ tab
                out += w * (pts @ comp.direction)
        return out[0] if single else out

    def eval_rule(self, rule):
        """Values at the nodes of a SubspaceRule (axes must be resolved)."""
        model = self.model
        out = np.full(rule.size, self.const)
        scale = model.basis_scale
        for comp in self.comps:
            dots = np.clip(rule.dot(comp.axis), -1.0, 1.0)
            if comp.is_zonal:
                tab = ctilde_table(model.n, model.kmax, dots)[0]
                out += (comp.coef * scale) @ tab
            else:
                tab = ctilde_table(model.n, model.kmax, dots, nder=1)[1]
                w = (comp.coef * scale / np.sqrt(_dprime1(model))) @ tab
                out += w * rule.dot(comp.direction)
        return out

    # ---- chart derivatives at a base point ------------------------------------

    def chart_gradient(self, p, frame=None):
        """Gradient at p in an orthonormal tangent frame (flat-chart = ambient
        tangential gradient at the chart center)."""
        from . import geom

        p = np.asarray(p, dtype=float)
        if frame is None:
            frame = geom.tangent_frame(p)
        model = self.model
        scale = model.basis_scale
        grad = np.zeros(model.n + 1)
        for comp in self.comps:
            c = float(np.clip(np.dot(comp.axis, p), -1.0, 1.0))
            if comp.is_zonal:
                d1 = _ct_scalar(model.n, model.kmax, c, nder=1)[1]
                fprime = float(np.dot(comp.coef * scale, d1))
                grad += fprime * (comp.axis - c * p)
            else:
                tabs = _ct_scalar(model.n, model.kmax, c, nder=2)
                d1 = tabs[1]
                d2 = tabs[2]
                wts = comp.coef * scale / np.sqrt(_dprime1(model))
                f1 = float(np.dot(wts, d1))
                f2 = float(np.dot(wts, d2))
                ep = float(np.dot(comp.direction, p))
                grad += f2 * ep * (comp.axis - c * p) + f1 * (
                    comp.direction - ep * p
                )
        return frame @ grad

    def laplacian_at(self, p):
        """Delta_g of the field at p (equals the flat-chart Laplacian at the
        chart center).  Exact: each degree-k component is an eigenfunction."""
        return float(self.apply_diag(-self.model.lam).eval(p))

    # ---- diagnostics ----------------------------------------------------------

    def band_energy(self):
        """Per-degree L2 energy (sums component couplings crudely by sector)."""
        model = self.model
        energy = np.zeros(model.kmax + 1)
        for comp in self.comps:
            energy[1:] += comp.coef[1:] ** 2
        energy[0] += self.const ** 2 * model.volume
        return energy

    @property
    def axisymmetric(self):
        axes = [c for c in self.comps if not c.is_zonal]
        if axes:
            return False
        if not self.comps:
            return True
        a0 = self.comps[0].axis
        return all(
            abs(abs(float(np.dot(c.axis, a0))) - 1.0) < 1e-12 for c in self.comps
        )

    def __repr__(self):
        kinds = ",".join("zonal" if c.is_zonal else "azim" for c in self.comps)
        return f"Field(const={self.const:.3g}, comps=[{kinds}])"



def _ct_scalar(n, kmax, c, nder=0):
    """Ctilde tables at a scalar argument, as 1-D (kmax+1,) arrays."""
    tabs = ctilde_table(n, kmax, np.array([c]), nder=nder)
    return [t[:, 0] for t in tabs]

def _dprime1(model):
    """Ct_k'(1) per degree (= lam_k / n); cached on the model object."""
    cached = getattr(model, "_ctilde_dp1", None)
    if cached is None:
        cached = np.array(
            [ctilde_dn_at_one(model.n, k, 1) for k in range(model.kmax + 1)]
        )
        cached[0] = 1.0  # unused; avoids divide-by-zero
        object.__setattr__(model, "_ctilde_dp1", cached)
    return cached
