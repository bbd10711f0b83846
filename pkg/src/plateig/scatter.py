"""Plane-wave scattering by a clamped plate region and far-field synthesis.

The scattered field is represented as u_s = SL_k[phi] + SL_{ik}[psi]; the
clamped conditions u_s = -u_inc and du_s/dnu = -du_inc/dnu on the boundary
give the 2n x 2n block system

    [ S_k              S_ik           ] [phi]   [ -u_inc      ]
    [ -I/2 + D^T_k     -I/2 + D^T_ik  ] [psi] = [ -du_inc/dnu ]

(both traces taken from the exterior).  Only the Helmholtz part radiates; its
far field is u_inf(xhat) = integral e^{-i k xhat . y} phi(y) ds(y), so the
far-field matrix collects u_inf over a full circle of observation and
incidence directions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg as sla

from plateig import geometry
from plateig.bie import assemble_normal_deriv, assemble_single_layer
from plateig.geometry import BoundaryCurve, CollocationGrid

__all__ = [
    "ConditioningError",
    "FarFieldMatrix",
    "observation_directions",
    "forward_solve",
    "farfield",
    "farfield_matrix",
    "add_noise",
    "save_farfield",
    "load_farfield",
]

RCOND_FAIL = 1e-13
FORMAT_TAG = "farfield-v1"


class ConditioningError(RuntimeError):
    """The forward block system is numerically singular (an interior
    resonance of the representation); perturb the wavenumber slightly."""


def observation_directions(n_dir: int) -> np.ndarray:
    """Unit vectors at angles 2 pi i / n_dir, i = 0 .. n_dir-1."""
    if n_dir < 1:
        raise ValueError("need at least one direction")
    ang = 2 * np.pi * np.arange(n_dir) / n_dir
    return np.stack([np.cos(ang), np.sin(ang)], axis=-1)


@dataclass(eq=False)
class FarFieldMatrix:
    """Far-field samples F[i, j] = u_inf(xhat_i; d_j) at one wavenumber."""

    k: float
    n_dir: int
    directions: np.ndarray
    entries: np.ndarray
    noise_delta: float = 0.0
    seed: int | None = None
    shape_meta: dict | None = None
    _svd: tuple | None = field(default=None, repr=False)

    def svd(self):
        """Cached full SVD of the entry matrix."""
        if self._svd is None:
            self._svd = sla.svd(self.entries)
        return self._svd


def _block_lu(g: CollocationGrid, k: float):
    n = g.n
    half = 0.5 * np.eye(n)
    block = np.empty((2 * n, 2 * n), dtype=np.complex128)
    block[:n, :n] = assemble_single_layer(g, k)
    block[:n, n:] = assemble_single_layer(g, 1j * k)
    block[n:, :n] = assemble_normal_deriv(g, k) - half
    block[n:, n:] = assemble_normal_deriv(g, 1j * k) - half
    try:
        lu, piv = sla.lu_factor(block, check_finite=False)
    except sla.LinAlgError as exc:
        raise ConditioningError(
            f"forward block system singular at k={k:.8g}; perturb k slightly"
        ) from exc
    anorm = np.abs(block).sum(axis=0).max()
    rcond, info = sla.lapack.zgecon(lu, anorm)
    if info != 0 or not np.isfinite(rcond) or rcond < RCOND_FAIL:
        raise ConditioningError(
            f"forward block system ill-conditioned at k={k:.8g} "
            f"(rcond={rcond:.2e}); perturb k slightly"
        )
    return lu, piv


def _incident_rhs(g: CollocationGrid, k: float, directions: np.ndarray) -> np.ndarray:
    """Stacked right-hand sides for plane waves e^{i k x . d}, one column per
    incidence direction."""
    phase = np.exp(1j * k * g.points @ directions.T)
    slope = 1j * k * (g.normals @ directions.T) * phase
    return np.vstack([-phase, -slope])


def forward_solve(g: CollocationGrid, k: float, direction) -> tuple[np.ndarray, np.ndarray]:
    """Densities (phi, psi) for one incident plane-wave direction."""
    k = float(k)
    if k <= 0:
        raise ValueError("k must be positive")
    direction = np.asarray(direction, dtype=float).reshape(1, 2)
    nrm = np.hypot(direction[0, 0], direction[0, 1])
    if not np.isclose(nrm, 1.0, atol=1e-12):
        raise ValueError("incidence direction must be a unit vector")
    lu_piv = _block_lu(g, k)
    sol = sla.lu_solve(lu_piv, _incident_rhs(g, k, direction)[:, 0], check_finite=False)
    return sol[: g.n], sol[g.n :]


def farfield(g: CollocationGrid, k: float, phi: np.ndarray, directions) -> np.ndarray:
    """Far field of SL_k[phi] at the given observation directions."""
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    kernel = np.exp(-1j * float(k) * directions @ g.points.T)
    return kernel @ (np.asarray(phi) * g.jacobians) * (2 * np.pi / g.n)


def farfield_matrix(
    curve: BoundaryCurve, k: float, n_dir: int = 64, n_nodes: int = 120
) -> FarFieldMatrix:
    """Synthesize the clean far-field matrix of a curve at one wavenumber.

    One LU factorization serves all incidence directions; observation and
    incidence use the same angle set.
    """
    k = float(k)
    if k <= 0:
        raise ValueError("k must be positive")
    g = geometry.grid(curve, n_nodes)
    dirs = observation_directions(n_dir)
    lu_piv = _block_lu(g, k)
    sols = sla.lu_solve(lu_piv, _incident_rhs(g, k, dirs), check_finite=False)
    phis = sols[: g.n, :]
    entries = (
        np.exp(-1j * k * dirs @ g.points.T) @ (phis * g.jacobians[:, None])
    ) * (2 * np.pi / g.n)
    meta = {"kind": curve.kind, "a": curve.a, "b": curve.b, "eps": curve.eps}
    return FarFieldMatrix(k, n_dir, dirs, entries, 0.0, None, meta)


def add_noise(ff: FarFieldMatrix, delta: float, seed: int) -> FarFieldMatrix:
    """Multiplicative noise F (1 + delta E) with a unit-Frobenius complex E.

    E has iid real/imaginary parts uniform on [-1, 1], normalized so its
    Frobenius norm is exactly one; the draw is reproducible from the seed.
    """
    if delta < 0:
        raise ValueError("noise level must be nonnegative")
    rng = np.random.default_rng(seed)
    shape = ff.entries.shape
    e = rng.uniform(-1, 1, shape) + 1j * rng.uniform(-1, 1, shape)
    e /= sla.norm(e, "fro")
    return FarFieldMatrix(
        ff.k,
        ff.n_dir,
        ff.directions,
        ff.entries * (1 + delta * e),
        float(delta),
        int(seed),
        ff.shape_meta,
    )


def save_farfield(ff: FarFieldMatrix, path) -> None:
    """Write a far-field matrix as a self-describing delimited text file.

    First line: '# farfield-v1 ' + JSON metadata (shape, k, n_dir, delta,
    seed); then a CSV header and one 'i,j,re,im' record per matrix entry,
    printed with %.17g so values round-trip bit-exactly.
    """
    meta = {
        "shape": ff.shape_meta or {},
        "k": ff.k,
        "n_dir": ff.n_dir,
        "delta": ff.noise_delta,
        "seed": ff.seed,
    }
    with open(path, "w") as fh:
        fh.write(f"# {FORMAT_TAG} {json.dumps(meta)}\n")
        fh.write("i,j,re,im\n")
        for i in range(ff.n_dir):
            row = ff.entries[i]
            for j in range(ff.n_dir):
                fh.write(f"{i},{j},{row[j].real:.17g},{row[j].imag:.17g}\n")


def load_farfield(path) -> FarFieldMatrix:
    """Read a file written by save_farfield."""
    with open(path) as fh:
        header = fh.readline().strip()
        prefix = f"# {FORMAT_TAG} "
        if not header.startswith(prefix):
            raise ValueError(f"{path}: not a {FORMAT_TAG} file")
        meta = json.loads(header[len(prefix) :])
        if fh.readline().strip() != "i,j,re,im":
            raise ValueError(f"{path}: missing column header")
        n = int(meta["n_dir"])
        entries = np.zeros((n, n), dtype=np.complex128)
        seen = 0
        for line in fh:
            line = line.strip()
            if not line:
                continue
            si, sj, sre, sim = line.split(",")
            entries[int(si), int(sj)] = float(sre) + 1j * float(sim)
            seen += 1
        if seen != n * n:
            raise ValueError(f"{path}: expected {n * n} records, found {seen}")
    return FarFieldMatrix(
        float(meta["k"]),
        n,
        observation_directions(n),
        entries,
        float(meta["delta"]),
        meta["seed"],
        meta.get("shape") or None,
    )
