"""End-to-end eigenvalue computation: discretize, sweep contours, validate.

Ties the boundary-integral operator to the contour solver and applies the
spurious-mode guard: every raw eigenpair must keep the residual
|| T(k) v || / || v || below tolerance on a refined grid (n + 16 nodes, with
the eigenvector carried over by trigonometric interpolation).  Discretization
artifacts near interior resonances move when the grid changes, so they fail
the second test while true eigenpairs pass both.
"""

from __future__ import annotations

import numpy as np

from plateig import beyn, bie, geometry
from plateig.beyn import NepEigenpair
from plateig.geometry import BoundaryCurve

__all__ = ["two_grid_validator", "transmission_eigenvalues", "eigenvalue_table"]

GRID_STEP = 16


def two_grid_validator(curve: BoundaryCurve, n: int, step: int = GRID_STEP, res_tol: float = 1e-6):
    """Residual check for candidate eigenpairs on a grid refined by `step`."""
    fine = bie.nep_operator(geometry.grid(curve, n + step))

    def check(k: complex, v: np.ndarray) -> bool:
        v_fine = bie.resample_density(v, n + step)
        t_fine = fine(k)
        return float(
            np.linalg.norm(t_fine @ v_fine) / np.linalg.norm(v_fine)
        ) < res_tol

    return check


def transmission_eigenvalues(
    curve: BoundaryCurve,
    n: int = 120,
    k_min: float = 1.0,
    k_max: float = 5.0,
    radius: float = 0.35,
    overlap: float = 0.1,
    imag_center: float = 0.0,
    threads: int = 1,
    validate: bool = True,
    **contour_kwargs,
) -> list[NepEigenpair]:
    """All clamped transmission eigenvalues of the curve in [k_min, k_max]."""
    nep = bie.nep_operator(geometry.grid(curve, n))
    check = two_grid_validator(curve, n) if validate else None
    return beyn.sweep_contours(
        nep,
        k_min,
        k_max,
        radius=radius,
        overlap=overlap,
        imag_center=imag_center,
        validate=check,
        threads=threads,
        **contour_kwargs,
    )


def eigenvalue_table(pairs: list[NepEigenpair]) -> list[tuple[float, int, float]]:
    """(Re k, multiplicity, best residual) per eigenvalue group."""
    return [
        (k.real, mult, res) for k, mult, res in beyn.distinct_eigenvalues(pairs)
    ]
