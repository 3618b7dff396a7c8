"""Model geometries: the round even sphere and the synthetic-spectrum backend.

Both backends share the round-sphere zonal machinery.  The sphere backend is
the genuine S^n with full harmonic multiplicities; the synthetic backend is a
desk-scale spectral model built on the zonal sector about a fixed axis, with
one mode per degree, user-edited eigenvalues (negative ones allowed) and the
constant Q-curvature rescaled to a requested resonance integer m.  The
synthetic backend is the only way to exercise mbar >= 1 and m >= 2 paths.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import factorial

import numpy as np

from . import geom
from .errors import DegenerateSpectrumError, ValidationError
from .gegenbauer import (
    gjms_eigenvalue_sphere,
    harmonic_multiplicity,
    laplacian_eigenvalue,
    sphere_volume,
)
from .quadrature import zonal_rule

__all__ = ["ManifoldModel", "round_sphere", "synthetic_model", "model_from_json"]


@dataclass(eq=False, frozen=True)
class ManifoldModel:
    """Immutable model geometry; shareable across threads.

    Fields
    ------
    backend : "sphere" or "synthetic"
    n : even dimension >= 4 (also the order of the GJMS operator)
    kmax : harmonic band limit of the analysis grid
    mu : (kmax+1,) GJMS eigenvalues per degree, mu[0] = 0 (kernel = constants)
    multiplicity : (kmax+1,) eigenspace dimensions (sphere: N_k; synthetic: 1)
    resonance_m : integer m with kappa = (n-1)! m omega_n
    chi : Euler characteristic used by the degree formulas
    axis : symmetry axis of the synthetic backend (north pole by default)
    overrides : record of the synthetic spectrum edits ((k, mu_k) pairs)
    """

    backend: str
    n: int
    kmax: int
    mu: np.ndarray
    multiplicity: np.ndarray
    resonance_m: int
    chi: int
    axis: np.ndarray
    overrides: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.n < 4 or self.n % 2 != 0:
            raise ValidationError("dimension n must be even and >= 4")
        if self.kmax < 4:
            raise ValidationError("kmax too small (need >= 4)")
        if self.backend not in ("sphere", "synthetic"):
            raise ValidationError("backend must be 'sphere' or 'synthetic'")
        if abs(self.mu[0]) > 0:
            raise ValidationError("mu_0 must vanish (kernel = constants)")
        if self.backend == "sphere":
            if self.resonance_m != 1:
                raise ValidationError("sphere backend has resonance m = 1")
            if self.overrides:
                raise ValidationError("sphere backend takes no spectrum overrides")
        self.mu.setflags(write=False)
        self.multiplicity.setflags(write=False)
        self.axis.setflags(write=False)

    # --- scalar invariants -------------------------------------------------

    @property
    def omega_n(self):
        return sphere_volume(self.n)

    @property
    def volume(self):
        return sphere_volume(self.n)

    @property
    def kappa(self):
        """Total Q-curvature: (n-1)! m omega_n."""
        return float(factorial(self.n - 1)) * self.resonance_m * self.omega_n

    @property
    def q_constant(self):
        """The constant Q-curvature field value: kappa / volume."""
        return self.kappa / self.volume

    @property
    def scalar_curvature(self):
        return float(self.n * (self.n - 1))

    @property
    def injectivity_radius(self):
        return float(np.pi)

    @property
    def mbar(self):
        return int(np.sum(self.multiplicity[self.mu < 0]))

    @property
    def negative_modes(self):
        """Stored eigenpairs (mu_r, degree k_r), sorted mu_1 <= ... < 0."""
        pairs = [(float(self.mu[k]), int(k)) for k in range(1, self.kmax + 1) if self.mu[k] < 0]
        pairs.sort()
        return tuple(pairs)

    # --- spectral tables ---------------------------------------------------

    def degrees(self):
        return np.arange(self.kmax + 1)

    @property
    def lam(self):
        """-Delta eigenvalues per degree."""
        k = np.arange(self.kmax + 1, dtype=float)
        return k * (k + self.n - 1)

    @property
    def mu_plus(self):
        """Spectrum of the sign-reversed operator P^{n,+}."""
        return np.abs(self.mu)

    @property
    def conformal_laplacian_eigs(self):
        return self.lam + self.n * (self.n - 2) / 4.0

    @property
    def basis_scale(self):
        """s_k with Ztilde_k(x) = s_k Ct_k(axis.x), L2-orthonormal."""
        nk = np.array([harmonic_multiplicity(self.n, k) for k in range(self.kmax + 1)])
        return np.sqrt(nk / self.omega_n)

    def gjms_round(self, k):
        return gjms_eigenvalue_sphere(self.n, k)

    def require_invertible(self):
        bad = np.nonzero(self.mu[1:] == 0.0)[0]
        if bad.size:
            raise DegenerateSpectrumError(
                f"mu_k vanishes at degrees {list(bad + 1)}; operator not invertible"
            )

    # --- grids ---------------------------------------------------------------

    def zonal_quadrature(self, npts=None, axis=None):
        """Gauss rule exact for zonal polynomial products up to degree 2*kmax
        (with the default node count kmax+1)."""
        if npts is None:
            npts = self.kmax + 1
        if axis is None:
            axis = self.axis
        return zonal_rule(self.n, npts, axis)

    def is_axis_point(self, a, tol=1e-12):
        return abs(abs(float(np.dot(a, self.axis))) - 1.0) <= tol


def round_sphere(n=4, kmax=60):
    """The round unit S^n, n even: m = 1, mbar = 0, constant Q = (n-1)!."""
    mu = np.array([gjms_eigenvalue_sphere(n, k) for k in range(kmax + 1)])
    mult = np.array([harmonic_multiplicity(n, k) for k in range(kmax + 1)])
    return ManifoldModel(
        backend="sphere",
        n=n,
        kmax=kmax,
        mu=mu,
        multiplicity=mult,
        resonance_m=1,
        chi=2,
        axis=geom.north_pole(n),
    )


def synthetic_model(n=4, kmax=60, overrides=(), resonance_m=1, chi=2, axis=None):
    """Zonal-sector spectral model with user-edited eigenvalues.

    ``overrides`` is an iterable of (degree, mu) pairs, degree within the
    band; negative values populate the stored negative eigenpairs (one mode
    per degree).  The constant Q-curvature is rescaled so that
    kappa = (n-1)! * resonance_m * omega_n.
    """
    if axis is None:
        axis = geom.north_pole(n)
    axis = geom.unit(np.asarray(axis, dtype=float))
    mu = np.array([gjms_eigenvalue_sphere(n, k) for k in range(kmax + 1)])
    ov = []
    for k, val in overrides:
        k = int(k)
        if not 1 <= k <= kmax:
            raise ValidationError(f"override degree {k} outside band [1, {kmax}]")
        mu[k] = float(val)
        ov.append((k, float(val)))
    return ManifoldModel(
        backend="synthetic",
        n=n,
        kmax=kmax,
        mu=mu,
        multiplicity=np.ones(kmax + 1, dtype=int),
        resonance_m=int(resonance_m),
        chi=int(chi),
        axis=axis,
        overrides=tuple(ov),
    )


def model_from_json(doc):
    """Build a model from its JSON description.

    Schema: {"backend": "sphere"|"synthetic", "n": int, "k_max": int,
             "spectrum_overrides": [[k, mu], ...], "resonance_m": int,
             "chi": int (optional, synthetic only)}
    """
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    try:
        backend = doc["backend"]
        n = int(doc.get("n", 4))
        kmax = int(doc.get("k_max", 60))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed model description: {exc}") from exc
    if backend == "sphere":
        if doc.get("spectrum_overrides"):
            raise ValidationError("sphere backend takes no spectrum overrides")
        if int(doc.get("resonance_m", 1)) != 1:
            raise ValidationError("sphere backend has resonance m = 1")
        return round_sphere(n=n, kmax=kmax)
    if backend == "synthetic":
        return synthetic_model(
            n=n,
            kmax=kmax,
            overrides=[(int(k), float(v)) for k, v in doc.get("spectrum_overrides", [])],
            resonance_m=int(doc.get("resonance_m", 1)),
            chi=int(doc.get("chi", 2)),
        )
    raise ValidationError(f"unknown backend {backend!r}")
