"""Analytic references for the unit disk.

Separation of variables reduces the clamped transmission eigenvalue problem
on the unit disk to the per-mode determinant

    f_l(k) = i k J_l(k) H^(1)_l'(ik) - k H^(1)_l(ik) J_l'(k),

whose positive real roots are the transmission eigenvalues (simple for l = 0,
double for l >= 1).  The same machinery yields the scattering coefficients
lambda_l(k) and the analytic far field of a plane wave hitting the disk,
which serve as independent cross-checks for the boundary-integral solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil
import warnings

import numpy as np
from scipy import special as _sp
from scipy.optimize import brentq

from plateig import specfun

__all__ = [
    "DiskRoot",
    "TruncationWarning",
    "disk_determinant",
    "disk_determinant_direct",
    "real_determinant",
    "disk_te_roots",
    "imag_axis_scan",
    "disk_lambda",
    "disk_farfield_analytic",
]

SCAN_STEP = 1e-3


class TruncationWarning(UserWarning):
    """A modal series was cut before its tail became negligible."""


@dataclass(frozen=True)
class DiskRoot:
    """One transmission eigenvalue of the unit disk."""

    k: float
    ell: int
    multiplicity: int


def _h1_at_ik(order: int, k: float) -> complex:
    """H^(1)_order(i k) for real k > 0 via the K identity."""
    return (2 / np.pi) * (1j) ** (-order - 1) * specfun.bessel_k(order, k)


def _h1p_at_ik(order: int, k: float) -> complex:
    """d/dz H^(1)_order(z) at z = i k for real k > 0."""
    lo = specfun.bessel_k(abs(order - 1), k)
    hi = specfun.bessel_k(order + 1, k)
    return (1 / np.pi) * (1j) ** (-order) * (lo + hi)


def _j_signed(order: int, z):
    """J_order(z) for possibly negative integer order."""
    if order >= 0:
        return specfun.bessel_j(order, z)
    return (-1) ** (-order) * specfun.bessel_j(-order, z)


def disk_determinant(ell: int, k: complex) -> complex:
    """f_ell(k), evaluated through the derivative recurrences.

    Real k uses the K identity for the Hankel factors at ik; purely imaginary
    k = i s continues analytically through the upper half plane, which lands
    the Hankel argument on the negative real axis:
    H^(1)_n(-s) = -(-1)^n conj(H^(1)_n(s)).
    """
    if ell < 0:
        raise ValueError("mode index must be nonnegative")
    k = complex(k)
    if k == 0:
        raise ValueError("k must be nonzero")
    if k.imag == 0.0 and k.real > 0:
        x = k.real
        j = specfun.bessel_j(ell, x)
        jp = specfun.bessel_j_deriv(ell, x)
        h = _h1_at_ik(ell, x)
        hm = -_h1_at_ik(1, x) if ell == 0 else _h1_at_ik(ell - 1, x)
        hp1 = _h1_at_ik(ell + 1, x)
        return 1j * k * j * 0.5 * (hm - hp1) - k * h * jp
    if k.real == 0.0 and k.imag > 0:
        s = k.imag
        i_ell = _sp.iv(ell, s)
        ip = 0.5 * (_sp.iv(abs(ell - 1), s) + _sp.iv(ell + 1, s))
        h = specfun.hankel1(ell, s)
        hp = specfun.hankel1_deriv(ell, s)
        bracket = np.conj(h) * ip - i_ell * np.conj(hp)
        return (-1j) ** ell * s * bracket
    if k.real <= 0:
        raise ValueError("k must lie in the open right half plane or on the positive imaginary axis")
    j = specfun.bessel_j(ell, k)
    jp = 0.5 * (_j_signed(ell - 1, k) - specfun.bessel_j(ell + 1, k))
    h = specfun.hankel1(ell, 1j * k)
    hm = -specfun.hankel1(1, 1j * k) if ell == 0 else specfun.hankel1(ell - 1, 1j * k)
    hp1 = specfun.hankel1(ell + 1, 1j * k)
    return 1j * k * j * 0.5 * (hm - hp1) - k * h * jp


def disk_determinant_direct(ell: int, k: float) -> complex:
    """f_ell(k) for real k > 0 straight from the defining combination, with
    the Hankel factors evaluated at the complex argument ik (no K identity).
    Exists purely as an independent route for consistency tests."""
    if ell < 0 or not np.isreal(k) or k <= 0:
        raise ValueError("direct form is defined for real k > 0 and ell >= 0")
    k = float(k)
    return 1j * k * specfun.bessel_j(ell, k) * specfun.hankel1_deriv(
        ell, 1j * k + 0j
    ) - k * specfun.hankel1(ell, 1j * k + 0j) * specfun.bessel_j_deriv(ell, k)


def real_determinant(ell: int, k) -> np.ndarray:
    """The real-valued function (pi/k) i^(ell-1) f_ell(k) for real k > 0.

    Equals J_l(k)(K_(l-1)(k) + K_(l+1)(k)) + 2 J_l'(k) K_l(k); shares its
    positive roots with f_ell and is cheap to scan on fine grids.
    """
    if ell < 0:
        raise ValueError("mode index must be nonnegative")
    k = np.asarray(k, dtype=float)
    if np.any(k <= 0):
        raise ValueError("k must be positive")
    j = _sp.jv(ell, k)
    jp = _sp.jvp(ell, k)
    k_lo = _sp.kv(abs(ell - 1), k)
    k_hi = _sp.kv(ell + 1, k)
    k_mid = _sp.kv(ell, k)
    return j * (k_lo + k_hi) + 2 * jp * k_mid


def disk_te_roots(
    ell_max: int, k_min: float, k_max: float, tol: float = 1e-12
) -> list[DiskRoot]:
    """All determinant roots with 0 <= ell <= ell_max in [k_min, k_max].

    Scans the real form on a 1e-3 grid and polishes each sign change by
    Brent's bisection/secant iteration.  Roots come back sorted by k with
    multiplicity 1 for ell = 0 and 2 otherwise.
    """
    if ell_max < 0 or ell_max > specfun.MAX_ORDER - 1:
        raise ValueError(f"ell_max must lie in [0, {specfun.MAX_ORDER - 1}]")
    if not (0 < k_min < k_max):
        raise ValueError("need 0 < k_min < k_max")
    n_pts = int(ceil((k_max - k_min) / SCAN_STEP)) + 1
    ks = np.linspace(k_min, k_max, n_pts)
    roots: list[DiskRoot] = []
    for ell in range(ell_max + 1):
        vals = real_determinant(ell, ks)
        sign = np.sign(vals)
        mult = 1 if ell == 0 else 2
        for i in np.flatnonzero(sign == 0):
            roots.append(DiskRoot(float(ks[i]), ell, mult))
        for i in np.flatnonzero(sign[:-1] * sign[1:] < 0):
            root = brentq(
                lambda x: float(real_determinant(ell, x)),
                ks[i],
                ks[i + 1],
                xtol=tol,
                rtol=4 * np.finfo(float).eps,
            )
            roots.append(DiskRoot(float(root), ell, mult))
    return sorted(roots, key=lambda r: r.k)


def imag_axis_scan(ell: int, s_grid) -> np.ndarray:
    """|f_ell(i s)| on a grid of positive s (no roots expected there)."""
    s_grid = np.asarray(s_grid, dtype=float)
    if np.any(s_grid <= 0):
        raise ValueError("scan points must be positive")
    return np.array([abs(disk_determinant(ell, 1j * s)) for s in s_grid])


def disk_lambda(ell: int, k: float) -> complex:
    """Scattering coefficient lambda_ell(k) of the unit disk for real k > 0."""
    if ell < 0:
        raise ValueError("mode index must be nonnegative")
    k = float(k)
    if k <= 0:
        raise ValueError("k must be positive")
    denom = 1j * k * specfun.hankel1(ell, k) * _h1p_at_ik(ell, k) - k * _h1_at_ik(
        ell, k
    ) * specfun.hankel1_deriv(ell, k)
    if abs(denom) == 0 or not np.isfinite(abs(denom)):
        raise specfun.SpecialFunctionDomainError(
            f"lambda_{ell}({k}) denominator degenerate"
        )
    return -disk_determinant(ell, k) / denom


def disk_farfield_analytic(k: float, theta, phi, n_modes: int | None = None):
    """Far field of the clamped unit disk hit by a plane wave.

    theta are observation angles, phi incidence angles (broadcast together);
    the truncation default max(20, ceil(3k)) keeps the modal tail below
    1e-14 of the largest coefficient, and a TruncationWarning fires if the
    requested cut violates that.
    """
    k = float(k)
    if k <= 0:
        raise ValueError("k must be positive")
    if n_modes is None:
        n_modes = max(20, int(ceil(3 * k)))
    if n_modes < 1 or n_modes > specfun.MAX_ORDER - 1:
        raise ValueError(f"n_modes must lie in [1, {specfun.MAX_ORDER - 1}]")
    lam = np.array([disk_lambda(ell, k) for ell in range(n_modes + 1)])
    if abs(lam[-1]) > 1e-14 * np.max(np.abs(lam)):
        warnings.warn(
            f"modal tail |lambda_{n_modes}| = {abs(lam[-1]):.2e} not negligible",
            TruncationWarning,
            stacklevel=2,
        )
    delta = np.asarray(theta) - np.asarray(phi)
    ell = np.arange(1, n_modes + 1)
    series = lam[0] + 2 * np.tensordot(
        np.cos(np.multiply.outer(delta, ell)), lam[1:], axes=([-1], [0])
    )
    return (4 / 1j) * series
