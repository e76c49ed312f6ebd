"""Merged 2-D spectra, multiplicity bookkeeping and closed-form bounds."""

import math

import pytest

import oracles
from discspec import (
    BoundaryCondition,
    FlatDiscMetric,
    ConcentratedMetric,
    assemble_spectrum,
    crossing_delta,
    mode_truncation,
    dominance_threshold,
    verify_bounds,
)

FLAT = FlatDiscMetric()
D = BoundaryCondition.DIRICHLET
N = BoundaryCondition.NEUMANN


def test_mode_truncation_reference_points():
    assert mode_truncation(ConcentratedMetric(1e-3), 10.0) == 1
    assert mode_truncation(ConcentratedMetric(1.0), 100.0) == 12
    assert mode_truncation(ConcentratedMetric(1e-3), 0.0) == 0


def test_flat_spectrum_values_and_multiplicities():
    table = assemble_spectrum(FLAT, D, 6, n=2048)
    expected = [
        (oracles.flat_dirichlet(0, 1), 0, 1),
        (oracles.flat_dirichlet(1, 1), 1, 2),
        (oracles.flat_dirichlet(1, 1), 1, 2),
        (oracles.flat_dirichlet(2, 1), 2, 2),
        (oracles.flat_dirichlet(2, 1), 2, 2),
        (oracles.flat_dirichlet(0, 2), 0, 1),
    ]
    assert len(table.entries) == 6
    for entry, (value, k, mult) in zip(table.entries, expected):
        assert entry.value == pytest.approx(value, rel=1e-5)
        assert entry.k == k and entry.multiplicity == mult
        assert entry.invariant == (k == 0)
    values = table.values()
    assert (values[1:] >= values[:-1]).all()


def test_threads_do_not_change_the_table():
    t1 = assemble_spectrum(ConcentratedMetric(0.1), D, 5, n=512, threads=1)
    t2 = assemble_spectrum(ConcentratedMetric(0.1), D, 5, n=512, threads=3)
    assert [e.value for e in t1.entries] == [e.value for e in t2.entries]


def test_small_delta_spectrum_is_invariant_dominated():
    # far below the j=2 threshold the first two Dirichlet entries are k=0
    table = assemble_spectrum(ConcentratedMetric(5e-5), D, 3, n=2048)
    assert [e.k for e in table.entries[:2]] == [0, 0]
    assert all(e.multiplicity == 1 for e in table.entries[:2])


def test_verify_bounds_all_satisfied():
    report = verify_bounds(ConcentratedMetric(0.1), jmax=3, kmax=3, n=1024)
    assert report.all_satisfied
    names = {r.name for r in report.records}
    assert "dirichlet_invariant_upper_j1" in names
    assert "noninvariant_lower_k3" in names
    assert "neumann_le_dirichlet_j2" in names
    assert all(r.margin >= -1e-8 for r in report.records)


def test_verify_bounds_requires_concentrated():
    with pytest.raises(ValueError):
        verify_bounds(FLAT)


def test_dominance_threshold_values():
    assert dominance_threshold(1) == pytest.approx(1.0 / (math.exp(math.pi) - 1.0), rel=1e-14)
    assert dominance_threshold(2) == pytest.approx(1.0 / (math.exp(3 * math.pi) - 1.0), rel=1e-14)
    with pytest.raises(ValueError):
        dominance_threshold(0)


def test_crossing_delta_is_above_threshold():
    delta_star2 = crossing_delta(2, D, delta_range=(1e-6, 1.0), n=512, tol=1e-4)
    assert dominance_threshold(2) <= delta_star2 < 1.0


def test_crossing_m1_has_no_sign_change():
    # the first Dirichlet eigenvalue is always invariant, so the m=1 gap
    # never changes sign and the bracket check must report it
    from discspec import BracketError

    with pytest.raises(BracketError):
        crossing_delta(1, D, delta_range=(1e-3, 1.0), n=256, tol=1e-3)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        assemble_spectrum(FLAT, D, 0)
    with pytest.raises(ValueError):
        crossing_delta(1, D, delta_range=(1.0, 0.5))
