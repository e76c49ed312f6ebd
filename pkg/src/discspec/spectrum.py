"""Full 2-D spectra, multiplicity bookkeeping and the closed-form bounds.

Eigenvalues of the disc problem are the union over angular modes k of the
1-D mode spectra; k = 0 entries are the S^1-invariant (simple) branch and
every k >= 1 entry appears with multiplicity two, carried by the pair
phi(r) cos(k theta), phi(r) sin(k theta).  The potential term of the
flattened Rayleigh quotient is bounded below by k^2 / max w, which gives a
provable mode cutoff for any finite eigenvalue budget and, for the
concentrated family, all the closed-form estimates verified here:

    lambda_j^0 <= alpha (2j-1)^2 pi^2        (Dirichlet invariant, upper)
    mu_j^0     <= 4 alpha (j-1)^2 pi^2       (Neumann invariant, upper)
    lambda_1^k >= k^2 / alpha                (non-invariant, lower)
    mu_j       <= lambda_j                   (Neumann vs Dirichlet)
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import BracketError
from .metric import ConcentratedMetric
from .solver import BoundaryCondition, ModeProblem, solve_lowest

__all__ = [
    "SpectrumEntry",
    "SpectrumTable",
    "BoundRecord",
    "BoundsReport",
    "mode_truncation",
    "assemble_spectrum",
    "verify_bounds",
    "dominance_threshold",
    "crossing_delta",
]


@dataclass(frozen=True)
class SpectrumEntry:
    value: float
    k: int
    j: int
    multiplicity: int
    invariant: bool


@dataclass
class SpectrumTable:
    """Merged 2-D spectrum, ascending, one row per eigenvalue counted
    with multiplicity (so each k >= 1 pair contributes two rows)."""

    entries: list
    metric: object
    bc: BoundaryCondition
    mode_cutoff: int
    per_mode: int

    def values(self):
        return np.array([e.value for e in self.entries])


@dataclass(frozen=True)
class BoundRecord:
    name: str
    lhs: float
    rhs: float
    satisfied: bool
    margin: float


@dataclass
class BoundsReport:
    records: list = field(default_factory=list)

    @property
    def all_satisfied(self):
        return all(r.satisfied for r in self.records)


def _potential_floor(spec, n=4096):
    """Lower-bound coefficient c with lambda_1^k >= c k^2."""
    if isinstance(spec, ConcentratedMetric):
        return 1.0 / spec.alpha
    z = np.linspace(0.0, 1.0, n + 1)[1:]
    w = np.asarray(spec.transformed_coefficient(z), dtype=float)
    return 1.0 / float(np.max(w))


def mode_truncation(spec, budget):
    """Smallest K with (K+1)^2 / max w > budget: no omitted mode can
    contribute an eigenvalue <= budget."""
    if budget <= 0:
        return 0
    c = _potential_floor(spec)
    return max(int(math.floor(math.sqrt(budget / c))), 0)


def _solve_mode(spec, k, bc, n, count):
    return solve_lowest(ModeProblem(metric=spec, k=k, bc=bc, n=n), count)


def _merge(mode_pairs, m):
    rows = []
    for k, pairs in mode_pairs.items():
        for p in pairs:
            mult = 1 if k == 0 else 2
            for _ in range(mult):
                rows.append(
                    SpectrumEntry(
                        value=p.value, k=k, j=p.j, multiplicity=mult, invariant=(k == 0)
                    )
                )
    rows.sort(key=lambda e: (e.value, e.k, e.j))
    return rows


def assemble_spectrum(spec, bc, m, n=4096, threads=1):
    """At least the first m eigenvalues of the 2-D problem, counted with
    multiplicity, with a provably sufficient mode cutoff.

    The cutoff is iterated to a fixed point: start at K = 4, read off the
    current m-th value, and enlarge K until the k^2 lower bound shows all
    omitted modes exceed it.
    """
    if m < 1:
        raise ValueError("m must be positive")
    per_mode = min(m, n // 4)
    cutoff = 4
    mode_pairs = {}
    for _ in range(64):
        missing = [k for k in range(cutoff + 1) if k not in mode_pairs]
        if missing:
            if threads > 1:
                with ThreadPoolExecutor(max_workers=threads) as pool:
                    for k, pairs in zip(
                        missing,
                        pool.map(lambda k: _solve_mode(spec, k, bc, n, per_mode), missing),
                    ):
                        mode_pairs[k] = pairs
            else:
                for k in missing:
                    mode_pairs[k] = _solve_mode(spec, k, bc, n, per_mode)
        rows = _merge(mode_pairs, m)
        budget = rows[m - 1].value
        needed = mode_truncation(spec, budget * (1.0 + 1e-9))
        if needed <= cutoff:
            return SpectrumTable(
                entries=rows[:m], metric=spec, bc=bc, mode_cutoff=cutoff, per_mode=per_mode
            )
        cutoff = needed
    raise BracketError("mode cutoff iteration did not stabilize")


def verify_bounds(spec, jmax=5, kmax=5, n=4096):
    """Evaluate every closed-form estimate against computed eigenvalues.

    Failures are reported in the records, never raised; margins are
    rhs - lhs for upper bounds and lhs - rhs for lower bounds.
    """
    if not isinstance(spec, ConcentratedMetric):
        raise ValueError("the bound suite is defined for the concentrated family")
    a = spec.alpha
    slack = 1e-8
    records = []

    def upper(name, lhs, rhs):
        records.append(
            BoundRecord(name, lhs, rhs, lhs <= rhs + slack * max(1.0, abs(rhs)), rhs - lhs)
        )

    def lower(name, lhs, rhs):
        records.append(
            BoundRecord(name, lhs, rhs, lhs >= rhs - slack * max(1.0, abs(rhs)), lhs - rhs)
        )

    dir_inv = _solve_mode(spec, 0, BoundaryCondition.DIRICHLET, n, jmax)
    neu_inv = _solve_mode(spec, 0, BoundaryCondition.NEUMANN, n, jmax)
    for j in range(1, jmax + 1):
        upper(
            f"dirichlet_invariant_upper_j{j}",
            dir_inv[j - 1].value,
            a * (2 * j - 1) ** 2 * math.pi**2,
        )
        upper(
            f"neumann_invariant_upper_j{j}",
            neu_inv[j - 1].value,
            4.0 * a * (j - 1) ** 2 * math.pi**2,
        )
    for k in range(1, kmax + 1):
        lam1k = _solve_mode(spec, k, BoundaryCondition.DIRICHLET, n, 1)[0].value
        lower(f"noninvariant_lower_k{k}", lam1k, k * k / a)
    dir_tab = assemble_spectrum(spec, BoundaryCondition.DIRICHLET, jmax, n=n)
    neu_tab = assemble_spectrum(spec, BoundaryCondition.NEUMANN, jmax, n=n)
    for j in range(1, jmax + 1):
        upper(
            f"neumann_le_dirichlet_j{j}",
            neu_tab.entries[j - 1].value,
            dir_tab.entries[j - 1].value,
        )
    return BoundsReport(records=records)


def dominance_threshold(j):
    """Sufficient delta below which the j-th invariant eigenvalue is
    smaller than the first non-invariant one: 1 / (e^((2j-1) pi) - 1)."""
    if j < 1:
        raise ValueError("j must be >= 1")
    return 1.0 / math.expm1((2 * j - 1) * math.pi)


def crossing_delta(m, bc, delta_range=(1e-6, 1.0), n=2048, tol=1e-10, max_iter=40):
    """Bisect (in log10 delta) the crossing of the m-th invariant and the
    first non-invariant eigenvalue of the concentrated family."""

    def gap(delta):
        spec = ConcentratedMetric(delta)
        inv = _solve_mode(spec, 0, bc, n, m)[m - 1].value
        non = _solve_mode(spec, 1, bc, n, 1)[0].value
        return inv - non

    lo, hi = delta_range
    if not 0 < lo < hi:
        raise ValueError("delta_range must be increasing and positive")
    f_lo, f_hi = gap(lo), gap(hi)
    if f_lo >= 0 or f_hi <= 0:
        raise BracketError(
            f"no eigenvalue crossing in delta range [{lo}, {hi}] "
            f"(gap {f_lo:.3g} .. {f_hi:.3g})"
        )
    llo, lhi = math.log10(lo), math.log10(hi)
    for _ in range(max_iter):
        lmid = 0.5 * (llo + lhi)
        if gap(10.0**lmid) > 0:
            lhi = lmid
        else:
            llo = lmid
        if 10.0**lhi - 10.0**llo <= tol * 10.0**llo:
            break
    return 10.0 ** (0.5 * (llo + lhi))
