"""Geometric structure of eigenfunctions: nodal circles and hot spots.

For a separated eigenfunction phi(r) cos(k theta) the nodal set is the
union of circles at the radial zeros of phi and, for k >= 1, of 2k
diameters; invariant eigenpairs (k = 0) therefore have purely circular
nodal sets.  The hot-spot report locates the extrema of the radial
profile, with the sign convention phi > 0 near the origin already applied
by the solver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .solver import EigenPair

__all__ = [
    "NodalReport",
    "HotSpotReport",
    "DiscField",
    "nodal_radii",
    "nodal_report",
    "nodal_domain_count",
    "hot_spot",
    "monotonicity_check",
    "field_on_disc",
]

# bracketing samples below this fraction of the max are treated as
# eigenvector tail noise, not certified zeros
_ZERO_GATE = 1e-9


@dataclass(frozen=True)
class NodalReport:
    radii: tuple
    domain_count: int
    touches_boundary: bool


@dataclass(frozen=True)
class HotSpotReport:
    argmax_r: float
    max_value: float
    argmin_r: float
    min_value: float
    interior_max: bool


@dataclass(frozen=True)
class DiscField:
    r: np.ndarray
    theta: np.ndarray
    values: np.ndarray  # shape (len(r), len(theta))


def nodal_radii(pair: EigenPair, spec=None):
    """Radii in (0, 1) where the radial profile vanishes.

    Sign changes of the samples are refined by bisection on the linear
    interpolant; zeros are only certified when both bracketing samples
    exceed the noise gate.
    """
    phi = pair.phi_r
    n = pair.n
    r = np.linspace(0.0, 1.0, n + 1)
    gate = _ZERO_GATE * np.max(np.abs(phi))
    radii = []
    for i in range(n):
        a, b = phi[i], phi[i + 1]
        if abs(a) <= gate or abs(b) <= gate:
            continue
        if a * b < 0:
            lo, hi = r[i], r[i + 1]
            flo = a
            while hi - lo > 1e-10:
                mid = 0.5 * (lo + hi)
                fm = np.interp(mid, r, phi)
                if flo * fm <= 0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            radii.append(0.5 * (lo + hi))
    return radii


def _radial_zero_count(pair):
    return len(nodal_radii(pair))


def nodal_domain_count(pair: EigenPair):
    """Nodal domains of the 2-D eigenfunction (cos representative)."""
    zeros = _radial_zero_count(pair)
    if pair.k == 0:
        return zeros + 1
    return 2 * pair.k * (zeros + 1)


def nodal_report(pair: EigenPair, spec=None):
    radii = nodal_radii(pair, spec)
    dr = 1.0 / pair.n
    gate = _ZERO_GATE * np.max(np.abs(pair.phi_r))
    touches = bool(radii) and radii[-1] >= 1.0 - dr
    if abs(pair.phi_r[-1]) <= gate and pair.bc.value == "neumann":
        touches = True
    return NodalReport(
        radii=tuple(radii), domain_count=nodal_domain_count(pair), touches_boundary=touches
    )


def _refine_extremum(r, vals, i):
    """Quadratic fit through the three samples around a discrete extremum."""
    if i == 0 or i == len(r) - 1:
        return r[i], vals[i]
    y0, y1, y2 = vals[i - 1], vals[i], vals[i + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom == 0.0:
        return r[i], vals[i]
    shift = 0.5 * (y0 - y2) / denom
    shift = float(np.clip(shift, -1.0, 1.0))
    h = r[1] - r[0]
    return r[i] + shift * h, y1 - 0.25 * (y0 - y2) * shift


def hot_spot(pair: EigenPair, spec=None):
    """Extrema of the radial profile of an invariant eigenpair."""
    phi = pair.phi_r
    n = pair.n
    r = np.linspace(0.0, 1.0, n + 1)
    if np.max(phi) - np.min(phi) <= 1e-9 * max(np.max(np.abs(phi)), 1e-300):
        # constant mode: degenerate by convention
        v = float(phi[0])
        return HotSpotReport(0.0, v, 0.0, v, False)
    imax = int(np.argmax(phi))
    imin = int(np.argmin(phi))
    rmax, vmax = _refine_extremum(r, phi, imax)
    rmin, vmin = _refine_extremum(r, phi, imin)
    return HotSpotReport(
        argmax_r=float(rmax),
        max_value=float(vmax),
        argmin_r=float(rmin),
        min_value=float(vmin),
        interior_max=bool(rmax < 1.0 - 1.0 / n),
    )


def monotonicity_check(pair: EigenPair, tol=1e-10):
    """True iff the radial profile is nonincreasing up to the tolerance."""
    scale = np.max(np.abs(pair.phi_r))
    return bool(np.all(np.diff(pair.phi_r) <= tol * max(scale, 1.0)))


def field_on_disc(pair: EigenPair, angular="cos", grid=(129, 64)):
    """Sample u(r, theta) = phi(r) * cos/sin(k theta) on a polar grid."""
    if angular not in ("cos", "sin"):
        raise ValueError("angular must be 'cos' or 'sin'")
    n_r, n_theta = grid
    r = np.linspace(0.0, 1.0, n_r)
    theta = np.linspace(0.0, 2.0 * np.pi, n_theta, endpoint=False)
    r_nodes = np.linspace(0.0, 1.0, pair.n + 1)
    phi = np.interp(r, r_nodes, pair.phi_r)
    if pair.k == 0:
        ang = np.ones_like(theta)
    elif angular == "cos":
        ang = np.cos(pair.k * theta)
    else:
        ang = np.sin(pair.k * theta)
    return DiscField(r=r, theta=theta, values=np.outer(phi, ang))
