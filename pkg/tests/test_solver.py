"""Finite-element eigensolver against the flat-disc Bessel oracle."""

import numpy as np
import pytest

import oracles
from discspec import (
    BoundaryCondition,
    FlatDiscMetric,
    ConcentratedMetric,
    ModeProblem,
    assemble,
    eigenfunction_in_r,
    solve_lowest,
)

FLAT = FlatDiscMetric()
D = BoundaryCondition.DIRICHLET
N = BoundaryCondition.NEUMANN


def test_flat_dirichlet_invariant_eigenvalues():
    pairs = solve_lowest(ModeProblem(metric=FLAT, k=0, bc=D, n=2048), 3)
    for j, pair in enumerate(pairs, start=1):
        assert pair.value == pytest.approx(oracles.flat_dirichlet(0, j), rel=1e-5)
        assert pair.j == j and pair.k == 0


def test_flat_dirichlet_k1_eigenvalue():
    pair = solve_lowest(ModeProblem(metric=FLAT, k=1, bc=D, n=2048), 1)[0]
    assert pair.value == pytest.approx(oracles.flat_dirichlet(1, 1), rel=2e-6)


def test_flat_neumann_spectrum():
    pairs = solve_lowest(ModeProblem(metric=FLAT, k=0, bc=N, n=1024), 2)
    assert pairs[0].value == pytest.approx(0.0, abs=1e-10)
    k1 = solve_lowest(ModeProblem(metric=FLAT, k=1, bc=N, n=2048), 1)[0]
    assert k1.value == pytest.approx(oracles.flat_neumann_k1(), rel=2e-6)


def test_eigenvalues_ascending_and_zero_counts():
    pairs = solve_lowest(ModeProblem(metric=ConcentratedMetric(0.1), k=0, bc=D, n=1024), 4)
    values = [p.value for p in pairs]
    assert values == sorted(values)
    for j, pair in enumerate(pairs, start=1):
        interior = pair.psi_z[np.abs(pair.psi_z) > 1e-8 * np.max(np.abs(pair.psi_z))]
        changes = int(np.count_nonzero(np.diff(np.sign(interior)) != 0))
        assert changes == j - 1


def test_eigenfunction_normalization_and_sign():
    pair = solve_lowest(ModeProblem(metric=ConcentratedMetric(0.01), k=0, bc=D, n=1024), 1)[0]
    norm = np.trapezoid(pair.psi_z**2, dx=1.0 / pair.n)
    assert norm == pytest.approx(1.0, rel=1e-12)
    # first nonzero sample positive
    nz = pair.psi_z[np.abs(pair.psi_z) > 1e-8 * np.max(np.abs(pair.psi_z))]
    assert nz[0] > 0


def test_dirichlet_boundary_value_and_k_origin_value():
    pair = solve_lowest(ModeProblem(metric=FLAT, k=0, bc=D, n=512), 1)[0]
    assert pair.psi_z[-1] == 0.0 and pair.phi_r[-1] == 0.0
    pair1 = solve_lowest(ModeProblem(metric=FLAT, k=2, bc=D, n=512), 1)[0]
    assert pair1.phi_r[0] == 0.0


def test_eigenfunction_in_r_matches_stored_profile():
    spec = ConcentratedMetric(0.1)
    pair = solve_lowest(ModeProblem(metric=spec, k=0, bc=D, n=1024), 1)[0]
    r, phi = eigenfunction_in_r(pair, spec)
    np.testing.assert_allclose(phi, pair.phi_r, atol=1e-10)
    with pytest.raises(ValueError):
        eigenfunction_in_r(pair, ConcentratedMetric(0.2))


def test_assemble_shapes_and_free_ranges():
    ops = assemble(ModeProblem(metric=FLAT, k=0, bc=N, n=64))
    assert ops.coordinate == "z" and ops.free == (0, 65) and ops.dimension == 65
    ops = assemble(ModeProblem(metric=FLAT, k=1, bc=D, n=64))
    assert ops.coordinate == "r" and ops.free == (1, 64)
    # Neumann k=0 stiffness annihilates constants (exact content conservation)
    ops = assemble(ModeProblem(metric=ConcentratedMetric(1e-3), k=0, bc=N, n=128))
    ones = np.ones(ops.dimension)
    assert np.max(np.abs(ops.apply_stiffness(ones))) < 1e-10


def test_input_validation():
    with pytest.raises(ValueError):
        ModeProblem(metric=FLAT, k=-1, bc=D)
    with pytest.raises(ValueError):
        ModeProblem(metric=FLAT, k=0, bc=D, n=8)
    with pytest.raises(ValueError):
        solve_lowest(ModeProblem(metric=FLAT, k=0, bc=D, n=64), 0)
    with pytest.raises(ValueError):
        solve_lowest(ModeProblem(metric=FLAT, k=0, bc=D, n=64), 17)  # > n // 4
