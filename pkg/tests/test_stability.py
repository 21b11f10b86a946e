import csv
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ppsonet import kernels
from ppsonet.stability import (ReducedParams, analyze, coefficient_matrix, eigenvalues,
                               paper_stability, region_grid, simulate_full, simulate_trajectory,
                               spectral_radius_stable, summarize_schedule, sweep_trajectories,
                               write_region_csv)


def test_matrix_examples():
    rep = analyze(0.0, 1.0)
    np.testing.assert_array_equal(rep.G, [[0, -1], [0, 0]])
    assert (rep.trace, rep.determinant) == (0.0, 0.0)
    rep = analyze(0.5, 2.0)
    assert rep.trace == pytest.approx(-0.5) and rep.determinant == pytest.approx(0.5)
    np.testing.assert_array_equal(coefficient_matrix(1.0, 0.0), [[1, 0], [1, 1]])


def test_eigenvalue_examples():
    assert eigenvalues(coefficient_matrix(0.0, 1.0)) == (0, 0)
    assert eigenvalues(coefficient_matrix(1.0, 0.0)) == (1, 1)
    lam = eigenvalues(coefficient_matrix(0.7, 1.5))
    assert lam[0].imag != 0 and lam[0] == lam[1].conjugate()
    assert abs(lam[0]) == pytest.approx(math.sqrt(0.7), abs=1e-12)


@pytest.mark.parametrize("omega,psi,stable", [(0.5, 2.0, True), (-0.1, 2.0, False), (0.8, 1.65, False)])
def test_paper_stability_examples(omega, psi, stable):
    assert paper_stability(omega, psi) is stable


@pytest.mark.parametrize("omega,psi,radius,stable", [(0.7, 1.5, math.sqrt(0.7), True),
                                                     (1.0, 0.0, 1.0, False), (0.0, 1.0, 0.0, True)])
def test_spectral_radius_examples(omega, psi, radius, stable):
    r, s = spectral_radius_stable(omega, psi)
    assert r == pytest.approx(radius, abs=1e-12)
    assert s is stable


@settings(max_examples=200, deadline=None)
@given(st.floats(-2, 2), st.floats(-1, 5))
def test_vieta(omega, psi):
    l1, l2 = eigenvalues(coefficient_matrix(omega, psi))
    assert abs((l1 + l2) - (omega + 1 - psi)) < 1e-9
    assert abs(l1 * l2 - omega) < 1e-9


@settings(max_examples=100, deadline=None)
@given(st.floats(-2, 2), st.floats(-1, 5))
def test_eigenvalues_match_numpy(omega, psi):
    ours = sorted(eigenvalues(coefficient_matrix(omega, psi)), key=lambda z: (z.real, z.imag))
    ref = sorted(np.linalg.eigvals(coefficient_matrix(omega, psi)), key=lambda z: (z.real, z.imag))
    # repeated roots are ill-conditioned, so compare the polynomial residual too
    for z in ours:
        assert abs(z * z - (omega + 1 - psi) * z + omega) < 1e-9
    assert max(abs(a) for a in ours) == pytest.approx(max(abs(b) for b in ref), abs=1e-6)


def test_sign_condition_implies_positive_det_negative_trace():
    grid = region_grid(n_omega=60, n_psi=60)
    sel = grid["paper_stable"]
    assert np.all(grid["det"][sel] > 0) and np.all(grid["trace"][sel] < 0)


def test_criteria_disagree_somewhere():
    grid = region_grid()
    assert np.any(grid["paper_stable"] != grid["sr_stable"])
    # inside 0 < w < psi - 1 with psi large the discrete map still diverges
    assert analyze(0.5, 3.9).paper_stable and not analyze(0.5, 3.9).sr_stable


def test_trajectory_examples():
    traj = simulate_trajectory(0.3, 1.2, 0.0, 0.0, 50)
    assert not np.any(traj.v) and not np.any(traj.y)
    traj = simulate_trajectory(0.0, 1.0, 1.0, 1.0, 5)
    np.testing.assert_array_equal(traj.y, [1, 0, 0, 0, 0, 0])
    np.testing.assert_array_equal(traj.v, [1, -1, 0, 0, 0, 0])
    traj = simulate_trajectory(0.7, 1.5, 1.0, 1.0, 500)
    assert math.hypot(traj.v[-1], traj.y[-1]) < 1e-3
    assert len(traj.t) == 501


def test_trajectory_divergence_stops_early():
    traj = simulate_trajectory(1.5, 4.0, 1.0, 1.0, 10_000)
    assert traj.diverged and len(traj.t) < 10_001


def test_shift_equivalence():
    omega, psi, p = 0.6, 1.3, 2.5
    v, x = simulate_full(omega, psi, p, 0.4, 3.0, 40)
    traj = simulate_trajectory(omega, psi, 0.4, 3.0 - p, 40)
    np.testing.assert_allclose(x - p, traj.y, atol=1e-12)
    np.testing.assert_allclose(v, traj.v, atol=1e-12)


def test_reduced_params():
    rp = ReducedParams.from_coefficients(0.5, 2.0, 0.25, 1.0, 0.5, 1.0, 4.0)
    assert rp.psi == 1.0 and rp.attraction == pytest.approx(2.5)


@pytest.mark.parametrize("omega,psi", [(0.7, 1.5), (1.2, 0.3), (-0.4, 2.2), (0.99, 1.0)])
def test_trajectory_kernels_agree(omega, psi):
    a = kernels.trajectory_numpy(omega, psi, 1.0, -0.5, 300, 1e12)
    b = kernels.trajectory_numba(omega, psi, 1.0, -0.5, 300, 1e12)
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1], b[1])
    assert a[2] == b[2]


def test_sweep_kernels_agree():
    grid = region_grid(n_omega=25, n_psi=25)
    a = kernels.sweep_numpy(grid["omega"], grid["psi"], 1.0, 1.0, 400, 1e12)
    b = kernels.sweep_numba(grid["omega"], grid["psi"], 1.0, 1.0, 400, 1e12)
    np.testing.assert_allclose(a[0], b[0], rtol=1e-12)
    np.testing.assert_allclose(a[1], b[1], rtol=1e-12)


def test_sweep_agrees_with_radius_over_long_horizon():
    # a horizon long enough for the slowest cell: radius**steps must fall well below 1e-3
    grid = region_grid(n_omega=100, n_psi=100)
    final, peak = sweep_trajectories(grid["omega"], grid["psi"], steps=20_000)
    r = grid["radius"]
    assert np.all(final[r < 1 - 1e-3] < 1e-3)
    assert np.all(peak[r > 1 + 1e-3] > math.hypot(1, 1))


def test_region_csv(tmp_path):
    grid = region_grid(n_omega=5, n_psi=4)
    path = tmp_path / "region.csv"
    write_region_csv(grid, path)
    rows = list(csv.DictReader(open(path)))
    assert len(rows) == 20
    assert set(rows[0]) >= {"omega", "psi", "paper_stable", "sr_stable", "disagree"}
    for row in rows:
        assert int(row["disagree"]) == int(row["paper_stable"] != row["sr_stable"])


def test_schedule_summary():
    summary = summarize_schedule(1.6, 1.7, np.linspace(0.4, 0.86, 11))
    assert summary["psi"] == pytest.approx(1.65)
    assert 0 < summary["paper_stable_fraction"] < 1
    assert summary["sr_stable_fraction"] == 1.0
