"""Finite-element eigensolver for the separated radial problems.

For a radial density p(r) the Laplace-Beltrami eigenproblem on the disc
separates into one-dimensional problems indexed by the angular mode k.
The invariant branch k = 0 is discretized in the flattened coordinate z,
where the mass is the flat L^2(dz) inner product and the stiffness carries
the bounded coefficient w(z) = r(z)^2 p(r(z)); this keeps the small-delta
mass concentration near the origin fully resolved on a uniform grid.

Modes k >= 1 are discretized in the original radial coordinate.  Their
eigenfunctions behave like r^k at the origin and are smooth in r, whereas
in z they pick up a z^(k/2) endpoint singularity that costs an order of
convergence for odd k; solving in r keeps the scheme uniformly second
order (see the convergence tests).

Both branches use piecewise-linear elements with two-point Gauss
quadrature, a lumped (row-sum) mass so the generalized problem reduces to
a standard symmetric tridiagonal one, and a final Rayleigh-quotient
evaluation of each eigenvector against the consistent mass, which removes
the lumping error from the reported eigenvalue.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import SolverError

__all__ = [
    "BoundaryCondition",
    "ModeProblem",
    "EigenPair",
    "AssembledOperators",
    "assemble",
    "solve_lowest",
    "eigenfunction_in_r",
]

_GAUSS_LO = 0.5 - 0.5 / math.sqrt(3.0)
_GAUSS_HI = 0.5 + 0.5 / math.sqrt(3.0)


class BoundaryCondition(enum.Enum):
    """Condition at the outer boundary r = 1.

    The inner end is not user-choosable: the k = 0 problem takes the
    natural (no essential constraint) condition realizing phi'(0) = 0,
    while k >= 1 forces phi(0) = 0.
    """

    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"


@dataclass(frozen=True)
class ModeProblem:
    """One angular mode k with its boundary condition and grid."""

    metric: object
    k: int
    bc: BoundaryCondition
    n: int = 4096

    def __post_init__(self):
        if self.k < 0:
            raise ValueError(f"angular mode must be nonnegative, got {self.k}")
        if self.n < 16:
            raise ValueError(f"need at least 16 grid intervals, got {self.n}")


@dataclass
class AssembledOperators:
    """Tridiagonal stiffness + diagonal lumped mass on the full node set.

    coordinate is 'z' for k = 0 and 'r' for k >= 1.  free = (i0, i1) is the
    half-open node range remaining after essential conditions are
    eliminated.  The consistent mass (mass_diag, mass_off) is kept for the
    Rayleigh-quotient correction of eigenvalues.
    """

    problem: ModeProblem
    coordinate: str
    grid: np.ndarray
    stiff_diag: np.ndarray
    stiff_off: np.ndarray
    mass_lumped: np.ndarray
    mass_diag: np.ndarray
    mass_off: np.ndarray
    free: tuple

    @property
    def dimension(self):
        return self.free[1] - self.free[0]

    def reduced(self):
        i0, i1 = self.free
        return (
            self.stiff_diag[i0:i1],
            self.stiff_off[i0 : i1 - 1],
            self.mass_lumped[i0:i1],
            self.mass_diag[i0:i1],
            self.mass_off[i0 : i1 - 1],
        )

    def apply_stiffness(self, v):
        i0, i1 = self.free
        d, e = self.stiff_diag[i0:i1], self.stiff_off[i0 : i1 - 1]
        out = d * v
        out[:-1] += e * v[1:]
        out[1:] += e * v[:-1]
        return out

    def apply_mass(self, v, lumped=False):
        i0, i1 = self.free
        if lumped:
            return self.mass_lumped[i0:i1] * v
        d, e = self.mass_diag[i0:i1], self.mass_off[i0 : i1 - 1]
        out = d * v
        out[:-1] += e * v[1:]
        out[1:] += e * v[:-1]
        return out


@dataclass
class EigenPair:
    """One eigenvalue with its radial eigenfunction in both coordinates.

    psi_z holds psi on the uniform z-grid, normalized to trapezoid
    int psi^2 dz = 1 with the first nonzero sample from z = 0 positive;
    phi_r holds phi(r) = psi(z(r)) on the uniform r-grid.
    """

    value: float
    k: int
    j: int
    bc: BoundaryCondition
    psi_z: np.ndarray
    phi_r: np.ndarray
    metric: object
    n: int


def _hat_products(a, b, h, f):
    """Gauss-2 element integrals of f times the three hat products."""
    x1 = a + _GAUSS_LO * h
    x2 = a + _GAUSS_HI * h
    f1, f2 = f(x1), f(x2)
    lo1, lo2 = (b - x1) / h, (b - x2) / h
    hi1, hi2 = (x1 - a) / h, (x2 - a) / h
    ll = (h / 2) * (f1 * lo1 * lo1 + f2 * lo2 * lo2)
    lr = (h / 2) * (f1 * lo1 * hi1 + f2 * lo2 * hi2)
    rr = (h / 2) * (f1 * hi1 * hi1 + f2 * hi2 * hi2)
    return ll, lr, rr


def _accumulate(n, stiff, pot_ll, pot_lr, pot_rr, m_ll, m_lr, m_rr):
    sd = np.zeros(n + 1)
    so = np.empty(n)
    sd[:-1] += stiff + pot_ll
    sd[1:] += stiff + pot_rr
    so[:] = -stiff + pot_lr
    md = np.zeros(n + 1)
    md[:-1] += m_ll
    md[1:] += m_rr
    mo = m_lr.copy()
    ml = md.copy()
    ml[:-1] += m_lr
    ml[1:] += m_lr
    return sd, so, ml, md, mo


def assemble(problem: ModeProblem) -> AssembledOperators:
    """Build the tridiagonal stiffness/mass pair for one angular mode."""
    spec, k, n = problem.metric, problem.k, problem.n
    grid = np.linspace(0.0, 1.0, n + 1)
    h = 1.0 / n
    a, b = grid[:-1], grid[1:]
    zero = np.zeros(n)

    if k == 0:
        area = spec.area()
        coef = 4.0 * math.pi**2 / area**2
        x1 = a + _GAUSS_LO * h
        x2 = a + _GAUSS_HI * h
        w1 = np.asarray(spec.transformed_coefficient(x1), dtype=float)
        w2 = np.asarray(spec.transformed_coefficient(x2), dtype=float)
        if np.any(w1[1:] <= 0) or np.any(w2 <= 0):
            raise SolverError("degenerate metric: w(z) vanishes inside an element")
        stiff = coef * (w1 + w2) / (2.0 * h)
        m_ll = np.full(n, h / 3)
        m_lr = np.full(n, h / 6)
        m_rr = np.full(n, h / 3)
        sd, so, ml, md, mo = _accumulate(n, stiff, zero, zero, zero, m_ll, m_lr, m_rr)
        coordinate = "z"
    else:
        x1 = a + _GAUSS_LO * h
        x2 = a + _GAUSS_HI * h
        stiff = (x1 + x2) / (2.0 * h)
        kk = float(k * k)
        p_ll, p_lr, p_rr = _hat_products(a, b, h, lambda x: 1.0 / x)
        m_ll, m_lr, m_rr = _hat_products(
            a, b, h, lambda x: x * np.asarray(spec.density(x), dtype=float)
        )
        if np.any(m_ll + m_lr + m_rr <= 0):
            raise SolverError("degenerate metric: density vanishes inside an element")
        sd, so, ml, md, mo = _accumulate(
            n, stiff, kk * p_ll, kk * p_lr, kk * p_rr, m_ll, m_lr, m_rr
        )
        coordinate = "r"

    i0 = 0 if k == 0 else 1
    i1 = n if problem.bc is BoundaryCondition.DIRICHLET else n + 1
    return AssembledOperators(
        problem=problem,
        coordinate=coordinate,
        grid=grid,
        stiff_diag=sd,
        stiff_off=so,
        mass_lumped=ml,
        mass_diag=md,
        mass_off=mo,
        free=(i0, i1),
    )


def lowest_modes(ops: AssembledOperators, count: int):
    """Eigenvalues/vectors of the lumped tridiagonal problem (internal).

    Returns lumped eigenvalues and vectors on the free nodes, vectors
    orthonormal in the lumped mass inner product.  The lumped eigenvalues
    are exactly those of the discrete semigroup used by the heat module.
    """
    sd, so, ml, _, _ = ops.reduced()
    s = 1.0 / np.sqrt(ml)
    try:
        vals, vecs = eigh_tridiagonal(
            sd * s * s, so * s[:-1] * s[1:], select="i", select_range=(0, count - 1)
        )
    except np.linalg.LinAlgError as exc:
        p = ops.problem
        raise SolverError(
            f"tridiagonal eigensolver failed for mode k={p.k}, n={p.n}"
        ) from exc
    return vals, vecs * s[:, None]


def solve_lowest(problem: ModeProblem, count: int):
    """The `count` smallest eigenpairs of one angular mode, ascending.

    Eigenvalues are Rayleigh quotients of the discrete eigenvectors
    against the consistent mass, which restores clean second-order
    accuracy; eigenvector j has exactly j-1 interior sign changes.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if count > problem.n // 4:
        raise ValueError(
            f"count={count} too large for n={problem.n} (resolution guard n/4)"
        )
    ops = assemble(problem)
    _, vecs = lowest_modes(ops, count)
    spec, n = problem.metric, problem.n
    grid = ops.grid
    i0, i1 = ops.free

    pairs = []
    for j in range(count):
        v = vecs[:, j]
        lam = float(v @ ops.apply_stiffness(v) / (v @ ops.apply_mass(v)))
        full = np.zeros(n + 1)
        full[i0:i1] = v
        if ops.coordinate == "z":
            psi_z = full
            r_grid = grid
            phi_r = np.interp(spec.z_of_r(r_grid), grid, psi_z)
        else:
            phi_full = full
            z_nodes = np.asarray(spec.z_of_r(grid), dtype=float)
            psi_z = np.interp(grid, z_nodes, phi_full)
            phi_r = phi_full
        nrm = math.sqrt(np.trapezoid(psi_z * psi_z, dx=1.0 / n))
        psi_z = psi_z / nrm
        phi_r = phi_r / nrm
        sign = _leading_sign(psi_z)
        psi_z *= sign
        phi_r *= sign
        pairs.append(
            EigenPair(
                value=max(lam, 0.0),
                k=problem.k,
                j=j + 1,
                bc=problem.bc,
                psi_z=psi_z,
                phi_r=phi_r,
                metric=spec,
                n=n,
            )
        )
    return pairs


def _leading_sign(psi):
    tol = 1e-8 * np.max(np.abs(psi))
    for v in psi:
        if abs(v) > tol:
            return 1.0 if v > 0 else -1.0
    return 1.0


def eigenfunction_in_r(pair: EigenPair, spec):
    """phi(r) = psi(z(r)) on the uniform r-grid, from the stored psi."""
    if spec != pair.metric:
        raise ValueError("eigenpair was computed for a different metric")
    r = np.linspace(0.0, 1.0, pair.n + 1)
    z = np.asarray(spec.z_of_r(r), dtype=float)
    zgrid = np.linspace(0.0, 1.0, pair.n + 1)
    return r, np.interp(z, zgrid, pair.psi_z)


def sign_changes(values, noise=1e-9):
    """Count interior sign changes, ignoring samples below the noise gate."""
    vals = np.asarray(values)
    kept = vals[np.abs(vals) > noise * np.max(np.abs(vals))]
    return int(np.count_nonzero(np.diff(np.sign(kept)) != 0))
