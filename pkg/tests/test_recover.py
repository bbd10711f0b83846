"""Tests for Tikhonov regularization, the Morozov rule, and peak picking."""

import numpy as np
import pytest

from plateig import geometry, recover, scatter
from plateig.recover import RecoverySweep
from plateig.scatter import FarFieldMatrix

K1_DISK = 1.6146349995639885158


def synthetic_ff(entries, k=2.0):
    n = entries.shape[0]
    return FarFieldMatrix(k, n, scatter.observation_directions(n), entries)


def test_identity_system_returns_rhs():
    """With F = I and no noise the regularized solution is the right-hand
    side itself (alpha collapses to the 1e-16 floor)."""
    ff = synthetic_ff(np.eye(8, dtype=complex))
    z = np.array([0.2, -0.1])
    g, alpha = recover.tikhonov_morozov(ff, z, 0.0)
    rhs = np.exp(-1j * ff.k * ff.directions @ z)
    assert alpha == pytest.approx(1e-16)
    assert np.max(np.abs(g - rhs)) < 1e-10


def test_filter_monotone_in_alpha():
    # residual grows and solution norm shrinks as alpha increases
    rng = np.random.default_rng(1)
    sig = np.sort(rng.uniform(0.01, 2.0, 12))[::-1]
    rhs = rng.standard_normal(12) + 1j * rng.standard_normal(12)
    alphas = 10.0 ** np.linspace(-12, 2, 30)
    resids, norms = [], []
    for a in alphas:
        _, r2, g2 = recover._solve_alpha(rhs, sig, a)
        resids.append(r2)
        norms.append(g2)
    assert np.all(np.diff(resids) >= 0)
    assert np.all(np.diff(norms) <= 0)


def test_morozov_balances_discrepancy():
    """The chosen alpha makes the residual match the noise-scaled solution
    norm, which is the defining property of the discrepancy rule."""
    rng = np.random.default_rng(5)
    entries = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    ff = synthetic_ff(entries, k=1.3)
    delta = 0.05
    g, alpha = recover.tikhonov_morozov(ff, [0.1, 0.3], delta)
    rhs = np.exp(-1j * ff.k * ff.directions @ np.array([0.1, 0.3]))
    resid = np.linalg.norm(entries @ g - rhs) ** 2
    target = delta**2 * ff.svd()[1][0] ** 2 * np.linalg.norm(g) ** 2
    assert resid == pytest.approx(target, rel=1e-8)
    assert 1e-16 < alpha < 1e4


def test_morozov_rejects_negative_delta():
    ff = synthetic_ff(np.eye(4, dtype=complex))
    with pytest.raises(ValueError):
        recover.tikhonov_morozov(ff, [0.0, 0.0], -0.01)


def test_indicator_spikes_at_eigenvalue():
    """||g_z|| at the first disk eigenvalue dwarfs its off-eigenvalue size."""
    circle = geometry.make_curve("circle", r=1.0)
    z_pts = geometry.interior_points(circle, 5, np.random.default_rng([0, 1]))

    def avg_norm(k):
        ff = scatter.farfield_matrix(circle, k, n_dir=32, n_nodes=96)
        return np.mean(
            [np.linalg.norm(recover.tikhonov_morozov(ff, z, 0.0)[0]) for z in z_pts]
        )

    assert avg_norm(K1_DISK) > 100 * avg_norm(1.0)


def test_sweep_deterministic_and_thread_invariant():
    circle = geometry.make_curve("circle", r=1.0)
    grid = np.linspace(1.2, 1.4, 5)
    kw = dict(n_z=3, seed=0, n_dir=16, n_nodes=48)
    a = recover.sweep(circle, grid, 0.02, **kw)
    b = recover.sweep(circle, grid, 0.02, **kw)
    assert np.array_equal(a.g_norm_avg, b.g_norm_avg)
    assert np.array_equal(a.z_points, b.z_points)
    c = recover.sweep(circle, grid, 0.02, threads=3, **kw)
    assert np.array_equal(a.g_norm_avg, c.g_norm_avg)
    d = recover.sweep(circle, grid, 0.02, n_z=3, seed=9, n_dir=16, n_nodes=48)
    assert not np.array_equal(a.g_norm_avg, d.g_norm_avg)


def test_sweep_marks_failed_wavenumbers_nan():
    circle = geometry.make_curve("circle", r=1.0)
    grid = np.array([1.2, 2.404825557695773, 1.3])  # middle one is resonant
    sw = recover.sweep(circle, grid, 0.0, n_z=2, n_dir=8, n_nodes=48)
    assert np.isnan(sw.g_norm_avg[1])
    assert np.all(np.isfinite(sw.g_norm_avg[[0, 2]]))


def test_sweep_with_precomputed_matrices():
    circle = geometry.make_curve("circle", r=1.0)
    ks = [1.2, 1.3]
    mats = {
        k: scatter.farfield_matrix(circle, k, n_dir=16, n_nodes=48) for k in ks
    }
    sw = recover.sweep(circle, ks + [1.4], 0.0, n_z=2, matrices=mats)
    assert np.all(np.isfinite(sw.g_norm_avg[:2]))
    assert np.isnan(sw.g_norm_avg[2])  # missing from the dict
    direct = recover.sweep(circle, ks, 0.0, n_z=2, n_dir=16, n_nodes=48)
    assert np.allclose(sw.g_norm_avg[:2], direct.g_norm_avg, rtol=0, atol=0)


def test_sweep_validation():
    circle = geometry.make_curve("circle", r=1.0)
    with pytest.raises(ValueError):
        recover.sweep(circle, [1.0, -2.0], 0.01, n_z=2)


def make_sweep(k, y):
    return RecoverySweep(np.asarray(k, float), np.asarray(y, float),
                         np.zeros((0, 2)), 0.0)


def test_detect_peaks_monotone_is_empty():
    sw = make_sweep(np.linspace(1, 2, 20), np.linspace(0.1, 5.0, 20))
    assert recover.detect_peaks(sw) == []
    assert sw.peaks == []


def test_detect_peaks_single_spike():
    y = np.ones(21)
    y[10] = 10.0
    sw = make_sweep(np.linspace(1, 3, 21), y)
    peaks = recover.detect_peaks(sw)
    assert len(peaks) == 1
    assert peaks[0] == pytest.approx(2.0, abs=1e-12)


def test_detect_peaks_parabolic_refinement():
    """Samples of an exact parabola pin its off-grid vertex."""
    k = np.linspace(1, 2, 41)
    vertex = 1.5123
    y = np.full(41, 0.5)
    mask = np.abs(k - vertex) < 0.08
    y[mask] = 40.0 - 500.0 * (k[mask] - vertex) ** 2
    sw = make_sweep(k, y)
    peaks = recover.detect_peaks(sw)
    assert len(peaks) == 1
    assert peaks[0] == pytest.approx(vertex, abs=1e-10)


def test_detect_peaks_skips_nan_neighbors():
    y = np.ones(15)
    y[4] = np.nan
    y[5] = 12.0  # would be a peak but its left neighbor is invalid
    y[10] = 12.0
    sw = make_sweep(np.linspace(1, 2, 15), y)
    peaks = recover.detect_peaks(sw)
    assert len(peaks) == 1
    assert peaks[0] == pytest.approx(np.linspace(1, 2, 15)[10], abs=1e-12)


def test_detect_peaks_threshold():
    y = np.ones(15)
    y[7] = 1.2  # strict local max but below 1.5 x median
    sw = make_sweep(np.linspace(1, 2, 15), y)
    assert recover.detect_peaks(sw) == []
    assert recover.detect_peaks(sw, ratio=1.1) != []
