"""Radial conformal metrics on the unit disc.

A metric is described by its conformal density p(r) > 0, so that the
surface element is p(r) (dx^2 + dy^2).  Besides the density itself, each
metric knows its closed-form geometry (area, Gaussian and total curvature)
and the weight-flattening change of coordinates z <-> r with

    z(r) = (1/c) * integral_0^r s p(s) ds,   c = area / (2 pi),

which maps [0, 1] onto [0, 1] and turns the radial eigenproblems into
flat-weight ones with coefficient w(z) = r(z)^2 p(r(z)).
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, interpolate, optimize

from .errors import QuadratureError

__all__ = [
    "alpha",
    "ConcentratedMetric",
    "FlatDiscMetric",
    "CustomMetric",
    "GeometryReport",
    "geometry_report",
]

# Below this the exp(z/alpha) paths would overflow long before the metric
# is physically interesting, so delta is clamped.
DELTA_FLOOR = 1e-12


def alpha(delta):
    """Normalizing factor 1/log((1+delta)/delta) fixing the area to pi."""
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return 1.0 / math.log1p(1.0 / delta)


def _check_radius(r):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0.0) or np.any(r > 1.0):
        raise ValueError("radius must lie in [0, 1]")
    return r


def _check_z(z):
    z = np.asarray(z, dtype=float)
    if np.any(z < 0.0) or np.any(z > 1.0):
        raise ValueError("z must lie in [0, 1]")
    return z


def _quad(f, a, b, tol=1e-12):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(f, a, b, epsabs=tol, epsrel=tol, limit=200)
        except (integrate.IntegrationWarning, Exception) as exc:
            if isinstance(exc, QuadratureError):
                raise
            raise QuadratureError(f"quadrature failed on [{a}, {b}]: {exc}") from exc
    return val


class _RadialMetric:
    """Shared numerical fallbacks; subclasses override with closed forms."""

    def density(self, r):
        raise NotImplementedError

    def area(self):
        return self.area_quadrature()

    def area_quadrature(self):
        """Adaptive quadrature of 2 pi * int_0^1 r p(r) dr."""
        return 2.0 * math.pi * _quad(lambda s: s * float(self.density(s)), 0.0, 1.0)

    def total_curvature(self):
        return self.total_curvature_quadrature()

    def total_curvature_quadrature(self):
        """Adaptive quadrature of the curvature integral int K p dA."""
        def f(s):
            return s * float(self.density(s)) * float(self.gaussian_curvature(s))

        return 2.0 * math.pi * _quad(f, 0.0, 1.0, tol=1e-10)

    def gaussian_curvature(self, r):
        raise NotImplementedError

    def z_of_r(self, r):
        raise NotImplementedError

    def r_of_z(self, z):
        raise NotImplementedError

    def transformed_coefficient(self, z):
        """Flattened-coordinate coefficient w(z) = r(z)^2 p(r(z))."""
        z = _check_z(z)
        r = self.r_of_z(z)
        return r * r * self.density(r)


@dataclass(frozen=True)
class ConcentratedMetric(_RadialMetric):
    """One-parameter family p(r) = alpha / (r^2 + delta), area pi.

    The density concentrates at the origin as delta -> 0, which drives the
    invariant eigenvalues to zero while the non-invariant ones blow up.
    """

    delta: float

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.delta < DELTA_FLOOR:
            object.__setattr__(self, "delta", DELTA_FLOOR)

    @property
    def alpha(self):
        return alpha(self.delta)

    def density(self, r):
        r = _check_radius(r)
        return self.alpha / (r * r + self.delta)

    def area(self):
        return math.pi

    def total_curvature(self):
        return 2.0 * math.pi / (1.0 + self.delta)

    def gaussian_curvature(self, r):
        r = _check_radius(r)
        return 2.0 * self.delta / (r * r + self.delta) * math.log1p(1.0 / self.delta)

    def z_of_r(self, r):
        r = _check_radius(r)
        return self.alpha * np.log1p(r * r / self.delta)

    def r_of_z(self, z):
        z = _check_z(z)
        return np.sqrt(self.delta * np.expm1(z / self.alpha))

    def transformed_coefficient(self, z):
        z = _check_z(z)
        return -self.alpha * np.expm1(-z / self.alpha)


@dataclass(frozen=True)
class FlatDiscMetric(_RadialMetric):
    """The Euclidean unit disc, p(r) = 1."""

    def density(self, r):
        r = _check_radius(r)
        return np.ones_like(r)

    def area(self):
        return math.pi

    def total_curvature(self):
        return 0.0

    def gaussian_curvature(self, r):
        r = _check_radius(r)
        return np.zeros_like(r)

    def z_of_r(self, r):
        r = _check_radius(r)
        return r * r

    def r_of_z(self, z):
        z = _check_z(z)
        return np.sqrt(z)

    def transformed_coefficient(self, z):
        return _check_z(z) * 1.0


class CustomMetric(_RadialMetric):
    """A user-supplied radial density, analytic or tabulated.

    Analytic densities are given as a callable r -> p(r); tabulated ones as
    a monotone-r sample table interpolated with a cubic spline.  The z <-> r
    transform is built from a dense cumulative integral of s p(s); r_of_z
    falls back to bisection on the monotone map.
    """

    _SAMPLES = 4096

    def __init__(self, density=None, table=None):
        if (density is None) == (table is None):
            raise ValueError("provide exactly one of density= or table=")
        if table is not None:
            r_tab = np.asarray(table[0], dtype=float)
            p_tab = np.asarray(table[1], dtype=float)
            if r_tab.ndim != 1 or r_tab.shape != p_tab.shape or len(r_tab) < 4:
                raise ValueError("table needs matching 1-d arrays with >= 4 rows")
            if not (r_tab[0] == 0.0 and r_tab[-1] == 1.0 and np.all(np.diff(r_tab) > 0)):
                raise ValueError("table radii must increase strictly from 0 to 1")
            if np.any(p_tab <= 0):
                raise ValueError("density must be positive")
            self._table = (r_tab, p_tab)
            self._spline = interpolate.CubicSpline(r_tab, p_tab)
            self._p = None
        else:
            self._table = None
            self._spline = None
            self._p = density
        grid = np.linspace(0.0, 1.0, self._SAMPLES + 1)
        vals = self.density(grid)
        if np.any(~np.isfinite(vals[1:])) or np.any(vals[1:] <= 0):
            raise ValueError("density must be positive and finite on (0, 1]")
        # cumulative integral of s p(s) for the coordinate transform
        sp = interpolate.CubicSpline(grid, grid * vals)
        cum = sp.antiderivative()
        self._c = float(cum(1.0))
        if not np.isfinite(self._c) or self._c <= 0:
            raise QuadratureError("r * density(r) is not integrable on (0, 1)")
        self._cum = cum

    @classmethod
    def from_csv(cls, path):
        """Two-column CSV (r, p) with strictly increasing r from 0 to 1."""
        rows = []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().lower() in ("r", "#"):
                    continue
                rows.append((float(row[0]), float(row[1])))
        if not rows:
            raise ValueError(f"no samples in {path}")
        r_tab, p_tab = map(np.array, zip(*rows))
        return cls(table=(r_tab, p_tab))

    def density(self, r):
        r = _check_radius(r)
        if self._p is not None:
            out = np.asarray(self._p(r), dtype=float)
        else:
            out = np.asarray(self._spline(r), dtype=float)
        return out

    def gaussian_curvature(self, r):
        """K = -(1/2p) (d2/dr2 + (1/r) d/dr) log p, by centered differences."""
        r = np.atleast_1d(_check_radius(r))
        if self._table is not None and len(self._table[0]) < 8:
            raise ValueError("table too coarse for curvature differences")
        h = 1e-4 if self._table is None else max(1e-4, float(np.diff(self._table[0]).max()))
        out = np.empty_like(r)
        for i, ri in enumerate(r):
            hi = min(h, max(ri, h) / 2, (1.0 - ri) / 2 if ri < 1.0 else h)
            hi = max(hi, 1e-6)
            if ri < hi:
                # even extension: (1/r) d log p /dr -> d2 log p / dr2 at 0
                lp0 = math.log(float(self.density(0.0)))
                lp1 = math.log(float(self.density(hi)))
                d2 = 2.0 * (lp1 - lp0) / hi**2
                out[i] = -d2 / float(self.density(0.0))
            else:
                a, b = ri - hi, min(ri + hi, 1.0)
                hi = (b - a) / 2
                lpm, lp0, lpp = (math.log(float(self.density(x))) for x in (a, ri, b))
                d2 = (lpp - 2 * lp0 + lpm) / hi**2
                d1 = (lpp - lpm) / (2 * hi)
                out[i] = -(d2 + d1 / ri) / (2.0 * float(self.density(ri)))
        return out if out.size > 1 else float(out[0])

    def z_of_r(self, r):
        r = _check_radius(r)
        z = np.asarray(self._cum(r), dtype=float) / self._c
        return np.clip(z, 0.0, 1.0)

    def r_of_z(self, z):
        z = np.atleast_1d(_check_z(z))
        out = np.empty_like(z)
        for i, zi in enumerate(z):
            if zi <= 0.0:
                out[i] = 0.0
            elif zi >= 1.0:
                out[i] = 1.0
            else:
                out[i] = optimize.bisect(
                    lambda r: float(self.z_of_r(r)) - zi, 0.0, 1.0, xtol=1e-13
                )
        return out if out.size > 1 else float(out[0])

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)


@dataclass(frozen=True)
class GeometryReport:
    """Closed-form and sampled geometry of a metric."""

    area: float
    total_curvature: float
    curvature_samples: list = field(default_factory=list)


def geometry_report(spec, n_samples=33):
    r = np.linspace(0.0, 1.0, n_samples)
    k = np.atleast_1d(spec.gaussian_curvature(r))
    return GeometryReport(
        area=spec.area(),
        total_curvature=spec.total_curvature(),
        curvature_samples=list(zip(r.tolist(), k.tolist())),
    )
