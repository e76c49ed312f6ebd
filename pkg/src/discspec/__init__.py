"""Spectral toolkit for radially symmetric conformal metrics on the disc.

Computes Dirichlet and Neumann eigenvalues/eigenfunctions of the
Laplace-Beltrami operator for densities p(r) on the unit disc, verifies
the closed-form bounds of the delta-family p = alpha / (r^2 + delta), and
exhibits the resulting simple second eigenvalues with closed nodal
circles and interior hot spots.
"""

from .analysis import (
    DiscField,
    HotSpotReport,
    NodalReport,
    field_on_disc,
    hot_spot,
    monotonicity_check,
    nodal_domain_count,
    nodal_radii,
    nodal_report,
)
from .errors import BracketError, QuadratureError, SolverError
from .heat import (
    HeatProblem,
    HeatState,
    evolve_cn,
    evolve_spectral,
    generic_initial_modes,
    hot_spot_trajectory,
)
from .metric import (
    CustomMetric,
    FlatDiscMetric,
    ConcentratedMetric,
    GeometryReport,
    alpha,
    geometry_report,
)
from .shooting import ShootingConfig, count_zeros, eigenvalue_by_bisection
from .solver import (
    BoundaryCondition,
    EigenPair,
    ModeProblem,
    assemble,
    eigenfunction_in_r,
    solve_lowest,
)
from .spectrum import (
    BoundsReport,
    SpectrumEntry,
    SpectrumTable,
    assemble_spectrum,
    crossing_delta,
    mode_truncation,
    dominance_threshold,
    verify_bounds,
)

__version__ = "0.1.0"
