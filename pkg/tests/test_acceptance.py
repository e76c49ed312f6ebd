"""Acceptance suite: ten end-to-end checks with pinned tolerances.

Each test prints exactly one PASS/FAIL line with its runtime.  Expected
eigenvalues come from the independent Bessel oracle (flat disc) or from
the Prufer shooting oracle (general metrics); closed-form bounds and
thresholds are evaluated from their published formulas.
"""

import time
import warnings

import numpy as np
import pytest

import oracles
from discspec import (
    BoundaryCondition,
    BracketError,
    FlatDiscMetric,
    ConcentratedMetric,
    HeatProblem,
    ModeProblem,
    alpha,
    assemble_spectrum,
    crossing_delta,
    eigenvalue_by_bisection,
    evolve_cn,
    evolve_spectral,
    generic_initial_modes,
    hot_spot,
    hot_spot_trajectory,
    monotonicity_check,
    nodal_report,
    dominance_threshold,
    solve_lowest,
    verify_bounds,
)
from discspec.shooting import ShootingConfig, terminal_angle

FLAT = FlatDiscMetric()
D = BoundaryCondition.DIRICHLET
N = BoundaryCondition.NEUMANN


class _Criterion:
    """Times a criterion body and prints its single PASS/FAIL line."""

    def __init__(self, number, label, cap_seconds):
        self.number = number
        self.label = label
        self.cap = cap_seconds
        self.checks = []

    def check(self, ok, detail):
        self.checks.append((bool(ok), detail))

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        ok = exc_type is None and all(c for c, _ in self.checks) and elapsed < self.cap
        status = "PASS" if ok else "FAIL"
        failed = "; ".join(d for c, d in self.checks if not c)
        if exc_type is not None:
            failed = (failed + "; " if failed else "") + f"raised {exc_type.__name__}"
        tail = f" [{failed}]" if failed else ""
        print(
            f"ACCEPTANCE {self.number:2d} ({self.label}): {status} "
            f"({elapsed:.2f}s / cap {self.cap:.0f}s){tail}",
            flush=True,
        )
        if exc_type is not None:
            return False
        assert all(c for c, _ in self.checks), failed
        assert elapsed < self.cap, f"runtime {elapsed:.2f}s exceeds cap {self.cap}s"
        return False


def _solve(spec, k, bc, n, count):
    return solve_lowest(ModeProblem(metric=spec, k=k, bc=bc, n=n), count)


def test_acceptance_01_flat_disc_oracle():
    with _Criterion(1, "flat-disc oracle", 2.0) as crit:
        lam0 = _solve(FLAT, 0, D, 4096, 1)[0].value
        lam1 = _solve(FLAT, 1, D, 4096, 1)[0].value
        ref0 = oracles.flat_dirichlet(0, 1)
        ref1 = oracles.flat_dirichlet(1, 1)
        crit.check(abs(lam0 - ref0) / ref0 <= 1e-4, f"lambda_1^0 = {lam0:.8f} vs {ref0:.8f}")
        crit.check(abs(lam1 - ref1) / ref1 <= 1e-4, f"lambda_1^1 = {lam1:.8f} vs {ref1:.8f}")


def test_acceptance_02_bound_suite():
    with _Criterion(2, "closed-form bound suite", 30.0) as crit:
        for delta in (1.0, 0.1, 0.01, 1e-3, 1e-4):
            report = verify_bounds(ConcentratedMetric(delta), jmax=5, kmax=5, n=4096)
            bad = [r.name for r in report.records if not r.satisfied]
            crit.check(report.all_satisfied, f"delta={delta}: violated {bad}")


def test_acceptance_03_separation_at_small_delta():
    with _Criterion(3, "invariant separation", 10.0) as crit:
        spec = ConcentratedMetric(5e-5)
        table = assemble_spectrum(spec, D, 3, n=4096)
        first_two = table.entries[:2]
        crit.check(
            all(e.k == 0 and e.multiplicity == 1 for e in first_two),
            f"first two Dirichlet entries k={[e.k for e in first_two]}",
        )
        lam2_inv = _solve(spec, 0, D, 4096, 2)[1].value
        lam1_non = _solve(spec, 1, D, 4096, 1)[0].value
        crit.check(
            lam1_non - lam2_inv > 0,
            f"gap lambda_1^1 - lambda_2^0 = {lam1_non - lam2_inv:.4f}",
        )
        neu = assemble_spectrum(ConcentratedMetric(1e-3), N, 2, n=4096)
        second = neu.entries[1]
        crit.check(
            second.k == 0 and second.multiplicity == 1,
            f"second Neumann entry k={second.k}, mult={second.multiplicity}",
        )


def test_acceptance_04_nodal_geometry():
    with _Criterion(4, "nodal circles and hot spot", 10.0) as crit:
        spec = ConcentratedMetric(1e-3)
        pair = _solve(spec, 0, N, 4096, 2)[1]
        rep = nodal_report(pair, spec)
        crit.check(
            len(rep.radii) == 1 and 0.0 < rep.radii[0] < 1.0 and not rep.touches_boundary,
            f"nodal radii {rep.radii}, touches={rep.touches_boundary}",
        )
        crit.check(monotonicity_check(pair, tol=1e-10), "radial profile not nonincreasing")
        hs = hot_spot(pair)
        crit.check(
            hs.interior_max and hs.argmax_r < 1e-3,
            f"hot spot at r={hs.argmax_r:.2e}, interior={hs.interior_max}",
        )
        pair3 = _solve(ConcentratedMetric(1e-6), 0, N, 4096, 3)[2]
        rep3 = nodal_report(pair3, None)
        crit.check(
            len(rep3.radii) == 2 and rep3.domain_count == 3,
            f"j=3: {len(rep3.radii)} circles, {rep3.domain_count} domains",
        )


def test_acceptance_05_crossing_consistency():
    with _Criterion(5, "eigenvalue crossing", 60.0) as crit:
        delta2 = crossing_delta(2, D, delta_range=(1e-6, 1.0), n=2048)
        crit.check(
            delta2 >= dominance_threshold(2),
            f"delta*_2 = {delta2:.4e} < threshold {dominance_threshold(2):.4e}",
        )
        half = delta2 / 2
        lam2 = _solve(ConcentratedMetric(half), 0, D, 2048, 2)[1].value
        lam11 = _solve(ConcentratedMetric(half), 1, D, 2048, 1)[0].value
        crit.check(lam2 < lam11, f"at delta*/2: lambda_2^0={lam2:.4f} vs lambda_1^1={lam11:.4f}")
        # m=1: the first Dirichlet eigenvalue is invariant for every delta,
        # so the gap never changes sign and any crossing lies above the
        # whole range; that places delta*_1 >= 1.0 >= dominance_threshold(1).
        with pytest.raises(BracketError):
            crossing_delta(1, D, delta_range=(1e-3, 1.0), n=1024, tol=1e-3)
        for delta in (dominance_threshold(1), 1.0):
            lam1 = _solve(ConcentratedMetric(delta), 0, D, 2048, 1)[0].value
            lam11 = _solve(ConcentratedMetric(delta), 1, D, 2048, 1)[0].value
            crit.check(
                lam1 < lam11,
                f"delta={delta:.4e}: lambda_1^0={lam1:.4f} not below lambda_1^1={lam11:.4f}",
            )


def test_acceptance_06_oracle_equivalence():
    # warm the jitted phase integrator outside the timed region
    terminal_angle(ConcentratedMetric(0.01), 0, 1.0, ShootingConfig(), n_steps=200)
    with _Criterion(6, "solver vs shooting oracle", 30.0) as crit:
        spec = ConcentratedMetric(0.01)
        for k in range(4):
            fe = [p.value for p in _solve(spec, k, D, 8192, 5)]
            for j in range(1, 6):
                sh = eigenvalue_by_bisection(spec, k, j, D)
                rel = abs(fe[j - 1] - sh) / sh
                crit.check(rel <= 1e-6, f"k={k}, j={j}: rel err {rel:.2e}")


def test_acceptance_07_convergence_order():
    with _Criterion(7, "second-order convergence", 10.0) as crit:
        ref = _solve(FLAT, 0, D, 16384, 1)[0].value
        errors = [abs(_solve(FLAT, 0, D, n, 1)[0].value - ref) for n in (512, 1024, 2048)]
        for (e1, e2), n in zip(zip(errors, errors[1:]), (512, 1024)):
            ratio = e1 / e2
            crit.check(3.6 <= ratio <= 4.4, f"n={n}->{2*n}: error ratio {ratio:.3f}")


def test_acceptance_08_geometry_closed_forms():
    with _Criterion(8, "geometry quadrature", 2.0) as crit:
        for delta in (1.0, 0.01):
            spec = ConcentratedMetric(delta)
            area = spec.area_quadrature()
            curv = spec.total_curvature_quadrature()
            crit.check(abs(area - np.pi) <= 1e-10, f"delta={delta}: area err {abs(area-np.pi):.2e}")
            target = 2 * np.pi / (1 + delta)
            crit.check(
                abs(curv - target) <= 1e-8, f"delta={delta}: curvature err {abs(curv-target):.2e}"
            )
            samples = np.asarray(spec.gaussian_curvature(np.linspace(0.0, 1.0, 65)))
            crit.check(np.all(samples > 0), f"delta={delta}: K not positive everywhere")


def test_acceptance_09_hot_spot_dynamics():
    with _Criterion(9, "hot-spot dynamics", 60.0) as crit:
        spec = ConcentratedMetric(1e-3)
        prob = HeatProblem(
            spec=spec,
            modes=generic_initial_modes(),
            t_end=2.0,
            output_times=[0.0, 0.5, 1.0, 1.5, 2.0],
            n=2048,
        )
        cn = evolve_cn(prob, dt=1e-3)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            spectral = evolve_spectral(prob, cutoff=(8, 16))
        gap = float(np.max(np.abs(spectral[1].field - cn[1].field)))
        crit.check(gap <= 1e-4, f"spectral vs CN at t=0.5: {gap:.2e}")
        traj = hot_spot_trajectory(cn)
        crit.check(
            traj[-1][1] <= 1e-3,
            f"concentrated-family hot spot at t=2: r={traj[-1][1]:.4f}",
        )
        contents = [s.content for s in cn]
        drift = max(abs(c - contents[0]) for c in contents) / abs(contents[0])
        crit.check(drift <= 1e-8, f"heat content drift {drift:.2e}")

        flat_prob = HeatProblem(
            spec=FLAT,
            modes=generic_initial_modes(),
            t_end=2.0,
            output_times=[0.0, 1.0, 2.0],
            n=2048,
        )
        flat_traj = hot_spot_trajectory(evolve_cn(flat_prob, dt=1e-3))
        crit.check(
            flat_traj[-1][1] >= 0.99,
            f"flat-disc hot spot at t=2: r={flat_traj[-1][1]:.4f}",
        )


def test_acceptance_10_vanishing_invariant_spectrum():
    with _Criterion(10, "vanishing invariant spectrum", 10.0) as crit:
        values = []
        for delta in (1e-2, 1e-4, 1e-6):
            lam = _solve(ConcentratedMetric(delta), 0, D, 4096, 1)[0].value
            bound = alpha(delta) * np.pi**2
            crit.check(lam < bound, f"delta={delta}: lambda_1^0={lam:.4f} vs alpha pi^2={bound:.4f}")
            values.append(lam)
        crit.check(
            values[0] > values[1] > values[2],
            f"not strictly decreasing: {values}",
        )
