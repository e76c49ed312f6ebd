"""Independent eigenvalue oracle by Prufer-angle shooting in r.

Integrates the phase of (r phi', phi) for the radial equation

    (r phi')' + [lambda r p(r) - k^2 / r] phi = 0

from an inner truncation radius to r = 1.  The angle is advanced in
t = log r, where the regular singular point at the origin becomes a tame
equilibrium of the phase equation and a fixed-step integrator is safe:

    d theta / dt = cos^2 theta - k^2 sin^2 theta + lambda r^2 p(r) sin^2 theta.

Interior zeros of phi are upward crossings of multiples of pi, so the
zero count is monotone in lambda and eigenvalues can be bisected on the
terminal angle.  Only eigenvalues and zero counts are produced; this
module exists to cross-validate the finite-element solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import BracketError, SolverError
from .metric import CustomMetric, FlatDiscMetric, ConcentratedMetric
from .solver import BoundaryCondition

__all__ = ["ShootingConfig", "count_zeros", "eigenvalue_by_bisection", "terminal_angle"]

_KIND_FLAT = 0
_KIND_CONCENTRATED = 1
_KIND_TABLE = 2

_EMPTY = np.empty(0)


@dataclass(frozen=True)
class ShootingConfig:
    r_min: float = 1e-6
    ode_tol: float = 1e-9
    bisect_tol: float = 1e-10
    n_steps: int = 100_000

    def __post_init__(self):
        if not 0.0 < self.r_min <= 1e-4:
            raise ValueError("r_min must be in (0, 1e-4]")
        if self.ode_tol <= 0 or self.bisect_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.n_steps < 100:
            raise ValueError("n_steps too small")


@njit(cache=True)
def _theta_end(lam, k, kind, a, delta, tab_r, tab_p, t_min, n_steps):
    # classic RK4 on the phase equation in t = log r
    if k == 0:
        th = math.pi / 2.0
    else:
        th = math.atan2(1.0, float(k))
    h = -t_min / n_steps
    t = t_min
    kk = float(k * k)
    for _ in range(n_steps):
        r0 = math.exp(t)
        rm = math.exp(t + 0.5 * h)
        r1 = math.exp(t + h)
        if kind == _KIND_CONCENTRATED:
            q0 = lam * a * r0 * r0 / (r0 * r0 + delta)
            qm = lam * a * rm * rm / (rm * rm + delta)
            q1 = lam * a * r1 * r1 / (r1 * r1 + delta)
        elif kind == _KIND_FLAT:
            q0 = lam * r0 * r0
            qm = lam * rm * rm
            q1 = lam * r1 * r1
        else:
            q0 = lam * r0 * r0 * np.interp(r0, tab_r, tab_p)
            qm = lam * rm * rm * np.interp(rm, tab_r, tab_p)
            q1 = lam * r1 * r1 * np.interp(r1, tab_r, tab_p)
        c = math.cos(th)
        s = math.sin(th)
        k1 = c * c - kk * s * s + q0 * s * s
        c = math.cos(th + 0.5 * h * k1)
        s = math.sin(th + 0.5 * h * k1)
        k2 = c * c - kk * s * s + qm * s * s
        c = math.cos(th + 0.5 * h * k2)
        s = math.sin(th + 0.5 * h * k2)
        k3 = c * c - kk * s * s + qm * s * s
        c = math.cos(th + h * k3)
        s = math.sin(th + h * k3)
        k4 = c * c - kk * s * s + q1 * s * s
        th = th + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += h
    return th


def _metric_args(spec):
    if isinstance(spec, ConcentratedMetric):
        return _KIND_CONCENTRATED, spec.alpha, spec.delta, _EMPTY, _EMPTY
    if isinstance(spec, FlatDiscMetric):
        return _KIND_FLAT, 0.0, 0.0, _EMPTY, _EMPTY
    if isinstance(spec, CustomMetric):
        r = np.linspace(0.0, 1.0, 8193)
        return _KIND_TABLE, 0.0, 0.0, r, np.asarray(spec.density(r), dtype=float)
    raise TypeError(f"unsupported metric type {type(spec).__name__}")


def terminal_angle(spec, k, lam, cfg=ShootingConfig(), n_steps=None):
    """Prufer angle at r = 1; strictly increasing in lam."""
    kind, a, delta, tr, tp = _metric_args(spec)
    steps = cfg.n_steps if n_steps is None else n_steps
    th = _theta_end(float(lam), int(k), kind, a, delta, tr, tp, math.log(cfg.r_min), steps)
    if not math.isfinite(th):
        raise SolverError(f"phase integration diverged at lambda={lam}, k={k}")
    return th


def count_zeros(spec, k, bc, lam, cfg=ShootingConfig()):
    """Number of interior zeros of phi on (0, 1) at the given lambda."""
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    th = terminal_angle(spec, k, lam, cfg)
    # zeros are strict upward crossings of multiples of pi; a terminal
    # angle exactly on a multiple (a Dirichlet eigenvalue) is the boundary
    # zero, not an interior one
    return max(int(math.floor((th - 1e-9) / math.pi)), 0)


def _target(k, j, bc):
    if bc is BoundaryCondition.DIRICHLET:
        return j * math.pi
    return (2 * j - 1) * math.pi / 2.0


def eigenvalue_by_bisection(spec, k, j, bc, cfg=ShootingConfig()):
    """The j-th eigenvalue of mode k, bisected on the terminal angle.

    The bracket is grown geometrically; monotonicity of the angle in
    lambda guarantees it contains exactly one crossing of the target.
    """
    if j < 1:
        raise ValueError("j must be >= 1")
    target = _target(k, j, bc)
    lo, hi = 0.0, 0.0
    th0 = terminal_angle(spec, k, 0.0, cfg)
    if th0 >= target - 1e-12:
        return 0.0  # the k=0 Neumann constant mode
    guess = 4.0
    for _ in range(80):
        if terminal_angle(spec, k, guess, cfg) > target:
            hi = guess
            break
        lo = guess
        guess *= 2.0
    else:
        raise BracketError(
            f"no bracket for eigenvalue k={k}, j={j} below lambda={guess}"
        )
    while hi - lo > cfg.bisect_tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if terminal_angle(spec, k, mid, cfg) > target:
            hi = mid
        else:
            lo = mid
    lam = 0.5 * (lo + hi)
    # step-doubling check on the integrator at the converged eigenvalue
    th1 = terminal_angle(spec, k, lam, cfg)
    th2 = terminal_angle(spec, k, lam, cfg, n_steps=2 * cfg.n_steps)
    if abs(th1 - th2) > cfg.ode_tol:
        raise SolverError(
            f"integrator not converged at k={k}, j={j}: dtheta={abs(th1 - th2):.3e}"
        )
    return lam
