"""Eigenvalue recovery from far-field data via the far-field equation.

For sampling points z inside the scatterer, the regularized solution g_z of
F g = phi_z (phi_z the far-field pattern of a point source at z, i.e.
phi_z(xhat) = e^{-i k xhat . z}) stays bounded except near transmission
eigenvalues, where ||g_z|| spikes.  Sweeping k, averaging ||g_z|| over a
fixed set of interior points, and picking the peaks recovers the eigenvalues
without solving an eigenproblem.

Regularization is Tikhonov with the parameter chosen by the Morozov
discrepancy principle: alpha solves

    || F g_alpha - phi_z ||^2 = delta^2 ||F||_2^2 ||g_alpha||^2,

which has a unique root since the discrepancy gap is increasing in alpha.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from plateig import geometry, scatter
from plateig.geometry import BoundaryCurve
from plateig.scatter import FarFieldMatrix

__all__ = [
    "RecoverySweep",
    "tikhonov_morozov",
    "sweep",
    "detect_peaks",
]

LOG_ALPHA_RANGE = (-16.0, 4.0)
PEAK_RATIO = 1.5


@dataclass(eq=False)
class RecoverySweep:
    """Averaged indicator ||g_z|| over a wavenumber grid.

    g_norm_avg is NaN at wavenumbers whose forward solve failed; peaks is
    filled by detect_peaks.
    """

    k_grid: np.ndarray
    g_norm_avg: np.ndarray
    z_points: np.ndarray
    delta: float
    peaks: list[float] = field(default_factory=list)


def _herglotz_rhs(ff: FarFieldMatrix, z: np.ndarray) -> np.ndarray:
    return np.exp(-1j * ff.k * ff.directions @ np.asarray(z, dtype=float))


def _solve_alpha(u_h_phi: np.ndarray, sig: np.ndarray, alpha: float):
    filt = sig / (sig**2 + alpha)
    coeff = filt * u_h_phi
    resid_sq = float(np.sum((alpha / (sig**2 + alpha)) ** 2 * np.abs(u_h_phi) ** 2))
    g_norm_sq = float(np.sum(np.abs(coeff) ** 2))
    return coeff, resid_sq, g_norm_sq


def tikhonov_morozov(
    ff: FarFieldMatrix, z, delta: float | None = None
) -> tuple[np.ndarray, float]:
    """Regularized solution g of F g = phi_z and the chosen alpha.

    delta defaults to the matrix's recorded noise level.  The discrepancy
    root is bracketed on log10(alpha) in [-16, 4] and bisected; if the gap
    never changes sign (noise-free data) alpha falls back to 1e-16.
    """
    if delta is None:
        delta = ff.noise_delta
    if delta < 0:
        raise ValueError("noise level must be nonnegative")
    u, sig, vh = ff.svd()
    phi = _herglotz_rhs(ff, z)
    u_h_phi = u.conj().T @ phi
    scale = delta**2 * sig[0] ** 2

    def gap(log_alpha: float) -> float:
        _, resid_sq, g_norm_sq = _solve_alpha(u_h_phi, sig, 10.0**log_alpha)
        return resid_sq - scale * g_norm_sq

    lo, hi = LOG_ALPHA_RANGE
    if gap(lo) >= 0 or gap(hi) <= 0:
        alpha = 10.0 ** lo
    else:
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if gap(mid) < 0:
                lo = mid
            else:
                hi = mid
        alpha = 10.0 ** (0.5 * (lo + hi))
    coeff, _, _ = _solve_alpha(u_h_phi, sig, alpha)
    return vh.conj().T @ coeff, alpha


def sweep(
    curve: BoundaryCurve,
    k_grid,
    delta: float,
    n_z: int = 20,
    seed: int = 0,
    n_dir: int = 64,
    n_nodes: int = 120,
    threads: int = 1,
    matrices: dict[float, FarFieldMatrix] | None = None,
) -> RecoverySweep:
    """Average ||g_z|| over seeded interior points for each wavenumber.

    The z points are drawn once and shared across the whole sweep; the noise
    realization is redrawn per wavenumber from a per-k child seed.  If
    `matrices` is given it must map wavenumbers to precomputed far-field
    matrices (e.g. loaded from files) and synthesis is skipped.  Wavenumbers
    whose forward solve fails are marked NaN rather than aborting.
    """
    k_grid = np.asarray(k_grid, dtype=float)
    if np.any(k_grid <= 0):
        raise ValueError("wavenumbers must be positive")
    z_pts = geometry.interior_points(curve, n_z, np.random.default_rng([seed, 1]))

    def indicator(item) -> float:
        idx, k = item
        try:
            if matrices is not None:
                ff = matrices[k]
            else:
                ff = scatter.farfield_matrix(curve, k, n_dir=n_dir, n_nodes=n_nodes)
                if delta > 0:
                    ff = scatter.add_noise(ff, delta, _noise_seed(seed, idx))
        except (scatter.ConditioningError, KeyError):
            return np.nan
        norms = [np.linalg.norm(tikhonov_morozov(ff, z, delta)[0]) for z in z_pts]
        return float(np.mean(norms))

    items = list(enumerate(k_grid))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            avg = list(pool.map(indicator, items))
    else:
        avg = [indicator(it) for it in items]
    return RecoverySweep(k_grid, np.asarray(avg), z_pts, float(delta))


def _noise_seed(seed: int, k_index: int) -> int:
    """Deterministic per-wavenumber child seed."""
    return int(np.random.SeedSequence([seed, 2, k_index]).generate_state(1)[0])


def detect_peaks(sw: RecoverySweep, ratio: float = PEAK_RATIO) -> list[float]:
    """Strict local maxima of the indicator, refined by a parabolic fit.

    Only peaks exceeding `ratio` times the median over valid wavenumbers
    count.  The refined abscissa comes from the vertex of the parabola
    through the peak sample and its two neighbors.  Results are stored on
    the sweep as well.
    """
    k, y = sw.k_grid, sw.g_norm_avg
    valid = np.isfinite(y)
    if valid.sum() < 3:
        sw.peaks = []
        return []
    threshold = ratio * float(np.median(y[valid]))
    peaks = []
    for i in range(1, len(k) - 1):
        if not (valid[i - 1] and valid[i] and valid[i + 1]):
            continue
        if y[i] <= y[i - 1] or y[i] <= y[i + 1] or y[i] <= threshold:
            continue
        denom = y[i - 1] - 2 * y[i] + y[i + 1]
        shift = 0.0 if denom == 0 else 0.5 * (y[i - 1] - y[i + 1]) / denom
        h = 0.5 * (k[i + 1] - k[i - 1])
        peaks.append(float(k[i] + np.clip(shift, -1, 1) * h))
    sw.peaks = peaks
    return peaks
