"""Nystrom discretization of the layer operators and the eigenvalue operator.

Operators act on nodal density values over a CollocationGrid and include the
arc-length factor |x'(s)|, i.e. the matrix S satisfies

    (S phi)_i ~ integral Phi_tau(x_i, x(s)) phi(x(s)) |x'(s)| ds,

with Phi_tau(x, y) = (i/4) H^(1)_0(tau |x - y|).  The logarithmic kernel
singularity is handled by the Kussmaul-Martensen splitting

    M(t, s) = M1(t, s) ln(4 sin^2((t-s)/2)) + M2(t, s)

with the product-rule weights R_|i-j| on the log part and the plain trapezoid
rule on the smooth part, which converges spectrally on analytic curves.

The clamped transmission eigenvalue problem reduces to the nonlinear
eigenproblem T(k) v = 0 with

    T(k) = (-1/2 I + D^T_{ik}) S_{ik}^{-1} - (1/2 I + D^T_k) S_k^{-1},

where D^T is the principal-value normal-derivative (adjoint double layer)
operator; the -1/2 / +1/2 terms are the exterior/interior trace jumps of the
normal derivative of the single layer.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import linalg as sla

from plateig import geometry, specfun
from plateig.geometry import CollocationGrid

__all__ = [
    "ConditioningWarning",
    "EigenfunctionField",
    "NepOperator",
    "assemble_single_layer",
    "assemble_normal_deriv",
    "log_quadrature_weights",
    "nep_operator",
    "resample_density",
    "single_layer_potential",
    "eigenfunction_field",
]

EULER_GAMMA = 0.5772156649015328606
COND_WARN_THRESHOLD = 1e12


class ConditioningWarning(UserWarning):
    """A layer-operator solve hit an ill-conditioned matrix."""


def log_quadrature_weights(n: int) -> np.ndarray:
    """Kussmaul-Martensen weight matrix R[i, j] = R_|i-j| for n nodes.

    R_d quadratures f against ln(4 sin^2((t-s)/2)) exactly for trigonometric
    polynomials of degree < n/2.
    """
    if n < 2 or n % 2:
        raise ValueError("node count must be even and >= 2")
    m = n // 2
    d = np.arange(n)
    q = np.arange(1, m)
    osc = np.cos(2 * np.pi * np.outer(q, d) / n) / q[:, None]
    r = -(2 * np.pi / m) * osc.sum(axis=0) - (np.pi / m**2) * (-1.0) ** d
    return sla.toeplitz(r)


@dataclass(eq=False)
class _Pairwise:
    dist: np.ndarray       # |x_i - x_j|, zero diagonal
    logsin: np.ndarray     # ln(4 sin^2((t_i - t_j)/2)), zero diagonal
    logw: np.ndarray       # Kussmaul-Martensen weights
    nu_dot_diff: np.ndarray  # nu_i . (x_i - x_j)
    triu: tuple[np.ndarray, np.ndarray]


@lru_cache(maxsize=32)
def _pairwise(g: CollocationGrid) -> _Pairwise:
    p, t, n = g.points, g.t, g.n
    diff = p[:, None, :] - p[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    dt = t[:, None] - t[None, :]
    s2 = 4 * np.sin(dt / 2) ** 2
    np.fill_diagonal(s2, 1.0)
    logsin = np.log(s2)
    nu_dot_diff = np.einsum("ik,ijk->ij", g.normals, diff)
    return _Pairwise(dist, logsin, log_quadrature_weights(n), nu_dot_diff, np.triu_indices(n, 1))


def _kernels_offdiag(g: CollocationGrid, tau: complex):
    """Order-0/1 kernel values on the strict upper triangle, mirrored to full
    symmetric matrices (they depend on the distance only).  Diagonals are set
    to the tau*r -> 0 limits of the *regular* factors: J0 -> 1, J1 -> 0; the
    Hankel diagonals are never used (the smooth-part diagonal is analytic)."""
    pw = _pairwise(g)
    iu = pw.triu
    j0u, j1u, h0u, h1u = specfun.kernels01(tau, pw.dist[iu])
    n = g.n
    out = []
    for u, diag in ((j0u, 1.0), (j1u, 0.0), (h0u, 0.0), (h1u, 0.0)):
        m = np.empty((n, n), dtype=np.complex128)
        m[iu] = u
        m.T[iu] = u
        np.fill_diagonal(m, diag)
        out.append(m)
    return out


def assemble_single_layer(g: CollocationGrid, tau: complex) -> np.ndarray:
    """Single-layer matrix S_tau on the grid."""
    tau = complex(tau)
    if tau == 0:
        raise ValueError("wavenumber tau must be nonzero")
    pw = _pairwise(g)
    jac = g.jacobians
    j0, _, h0, _ = _kernels_offdiag(g, tau)
    m1 = -(1 / (4 * np.pi)) * j0 * jac[None, :]
    smooth = (0.25j) * h0 * jac[None, :] - m1 * pw.logsin
    np.fill_diagonal(
        smooth,
        jac * (0.25j - EULER_GAMMA / (2 * np.pi) - np.log(tau * jac / 2) / (2 * np.pi)),
    )
    return pw.logw * m1 + (2 * np.pi / g.n) * smooth


def assemble_normal_deriv(g: CollocationGrid, tau: complex) -> np.ndarray:
    """Principal-value normal-derivative matrix D^T_tau on the grid.

    Kernel d Phi_tau(x_i, y)/d nu(x_i); the diagonal of the smooth part is the
    curvature limit -kappa(t) |x'(t)| / (4 pi).  The exterior and interior
    traces of the normal derivative of the single layer are -1/2 I + D^T and
    +1/2 I + D^T.
    """
    tau = complex(tau)
    if tau == 0:
        raise ValueError("wavenumber tau must be nonzero")
    pw = _pairwise(g)
    jac = g.jacobians
    _, j1, _, h1 = _kernels_offdiag(g, tau)
    r = pw.dist.copy()
    np.fill_diagonal(r, 1.0)
    q = pw.nu_dot_diff / r
    np.fill_diagonal(q, 0.0)
    n1 = (tau / (4 * np.pi)) * j1 * q * jac[None, :]
    smooth = -(0.25j * tau) * h1 * q * jac[None, :] - n1 * pw.logsin
    np.fill_diagonal(smooth, -g.curvatures * jac / (4 * np.pi))
    return pw.logw * n1 + (2 * np.pi / g.n) * smooth


def _solve_against(s: np.ndarray, a: np.ndarray, label: str) -> np.ndarray:
    """A @ S^{-1} via an LU solve on the transposed system, with a cheap
    reciprocal-condition estimate; warns instead of failing on bad
    conditioning so contour quadratures near resonances stay usable."""
    lu, piv = sla.lu_factor(s.T, check_finite=False)
    anorm = np.abs(s.T).sum(axis=0).max()
    rcond, info = sla.lapack.zgecon(lu, anorm)
    if info != 0 or not np.isfinite(rcond) or rcond < 1.0 / COND_WARN_THRESHOLD:
        warnings.warn(
            f"{label} is ill-conditioned (rcond={rcond:.2e}); "
            "results near this wavenumber may be inaccurate",
            ConditioningWarning,
            stacklevel=3,
        )
    return sla.lu_solve((lu, piv), a.T, check_finite=False).T


@dataclass(eq=False)
class NepOperator:
    """Callable k -> T(k) for the clamped-plate eigenvalue problem."""

    grid: CollocationGrid

    @property
    def dim(self) -> int:
        return self.grid.n

    def __call__(self, k: complex) -> np.ndarray:
        k = complex(k)
        if k.real <= 0:
            raise ValueError("wavenumber k must have positive real part")
        g = self.grid
        half = 0.5 * np.eye(g.n)
        s_h = assemble_single_layer(g, k)
        s_m = assemble_single_layer(g, 1j * k)
        dt_h = assemble_normal_deriv(g, k)
        dt_m = assemble_normal_deriv(g, 1j * k)
        return _solve_against(s_m, dt_m - half, f"S_(ik) at k={k:.6g}") - _solve_against(
            s_h, dt_h + half, f"S_k at k={k:.6g}"
        )


def nep_operator(g: CollocationGrid) -> NepOperator:
    return NepOperator(g)


def resample_density(values: np.ndarray, n_new: int) -> np.ndarray:
    """Trigonometric interpolation of nodal values onto a finer even grid."""
    values = np.asarray(values)
    n = len(values)
    if n_new < n:
        raise ValueError("resample_density only upsamples")
    if n_new == n:
        return values.astype(np.complex128)
    coeff = np.fft.fft(values)
    padded = np.zeros(n_new, dtype=np.complex128)
    half = n // 2
    padded[:half] = coeff[:half]
    padded[n_new - half + 1 :] = coeff[half + 1 :]
    # split the shared Nyquist coefficient symmetrically
    padded[half] = 0.5 * coeff[half]
    padded[n_new - half] = 0.5 * coeff[half]
    return np.fft.ifft(padded) * (n_new / n)


def single_layer_potential(
    g: CollocationGrid, tau: complex, density: np.ndarray, points: np.ndarray
) -> np.ndarray:
    """Evaluate SL_tau[density] at off-boundary points by the trapezoid rule."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    diff = points[:, None, :] - g.points[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    if np.any(dist == 0):
        raise ValueError("evaluation point coincides with a quadrature node")
    _, _, h0, _ = specfun.kernels01(tau, dist.ravel())
    phi = 0.25j * h0.reshape(dist.shape)
    return phi @ (np.asarray(density) * g.jacobians) * (2 * np.pi / g.n)


@dataclass(eq=False)
class EigenfunctionField:
    """Interior/exterior eigenfunction values on a point set.

    values holds v (interior points) or w (exterior points); entries too
    close to the boundary for accurate quadrature are NaN with valid=False.
    """

    points: np.ndarray
    values: np.ndarray
    inside: np.ndarray
    valid: np.ndarray


def eigenfunction_field(
    g: CollocationGrid, k: float, v_boundary: np.ndarray, points: np.ndarray
) -> EigenfunctionField:
    """Continue a boundary eigendensity to the plane.

    The interior Helmholtz part v = SL_k psi and the exterior modified part
    w = SL_{ik} phi are reconstructed from the boundary trace v_boundary via
    psi = S_k^{-1} v_boundary and phi = -S_{ik}^{-1} v_boundary, so that
    v = v_boundary and w = -v_boundary on the curve (clamped matching).
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    v_boundary = np.asarray(v_boundary, dtype=np.complex128)
    if len(v_boundary) != g.n:
        raise ValueError("boundary trace length must match the grid")
    psi = sla.solve(assemble_single_layer(g, k), v_boundary)
    phi = sla.solve(assemble_single_layer(g, 1j * k), -v_boundary)

    inside = geometry.points_inside(g.curve, points)
    gap = np.min(
        np.hypot(
            points[:, None, 0] - g.points[None, :, 0],
            points[:, None, 1] - g.points[None, :, 1],
        ),
        axis=1,
    )
    valid = gap > 2 * np.pi * np.max(g.jacobians) / g.n
    values = np.full(len(points), np.nan, dtype=np.complex128)
    if np.any(valid & inside):
        values[valid & inside] = single_layer_potential(g, k, psi, points[valid & inside])
    if np.any(valid & ~inside):
        values[valid & ~inside] = single_layer_potential(
            g, 1j * k, phi, points[valid & ~inside]
        )
    return EigenfunctionField(points, values, inside, valid)
