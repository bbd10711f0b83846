"""Contour-integral solver for nonlinear eigenvalue problems T(z) v = 0.

Probes the resolvent with a random block and extracts the eigenvalues inside
a circular contour from the first two moments

    A0 = (1/2 pi i) \\oint T(z)^{-1} V dz,
    A1 = (1/2 pi i) \\oint z T(z)^{-1} V dz,

discretized by the trapezoid rule on the circle.  Works for any callable
z -> matrix; it does not know anything about boundary integral operators.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla

__all__ = [
    "MERGE_TOL",
    "BeynContourError",
    "ContourSpec",
    "NepEigenpair",
    "beyn_solve",
    "sweep_contours",
    "distinct_eigenvalues",
]

MERGE_TOL = 1e-6


class BeynContourError(RuntimeError):
    """The quadrature hit a singular resolvent; the contour grazes a pole or
    eigenvalue.  Shift the contour or change its radius."""


@dataclass(frozen=True)
class ContourSpec:
    """Circular contour z = center + radius * e^{i theta} with solver knobs."""

    center: complex
    radius: float
    n_quad: int = 32
    n_probe: int = 8
    rank_tol: float = 1e-8
    res_tol: float = 1e-6
    rng_seed: int = 0

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("contour radius must be positive")
        if complex(self.center).real - self.radius <= 0:
            raise ValueError("contour must stay in the right half plane Re z > 0")
        if self.n_quad < 8:
            raise ValueError("need at least 8 quadrature points")
        if self.n_probe < 1:
            raise ValueError("need at least one probe column")

    def nodes(self) -> np.ndarray:
        theta = 2 * np.pi * np.arange(self.n_quad) / self.n_quad
        return self.center + self.radius * np.exp(1j * theta)


@dataclass(eq=False)
class NepEigenpair:
    """One eigenvalue occurrence with its unit eigenvector.

    residual is || T(k) v || / (|| T(k) ||_2 || v ||).  Occurrences closer
    than MERGE_TOL share a group_id; the group size is the multiplicity.
    """

    k: complex
    v: np.ndarray
    residual: float
    group_id: int


def _resolvent_moments(nep, contour: ContourSpec, probe: np.ndarray, threads: int):
    nodes = contour.nodes()
    weights = (nodes - contour.center) / contour.n_quad

    def solve_at(z):
        try:
            x = sla.solve(np.asarray(nep(z)), probe)
        except (sla.LinAlgError, ValueError) as exc:
            raise BeynContourError(
                f"resolvent solve failed at contour point z={z:.8g}: {exc}"
            ) from exc
        if not np.all(np.isfinite(x)):
            raise BeynContourError(
                f"resolvent singular at contour point z={z:.8g}"
            )
        return x

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            sols = list(pool.map(solve_at, nodes))
    else:
        sols = [solve_at(z) for z in nodes]
    a0 = sum(w * x for w, x in zip(weights, sols))
    a1 = sum(w * z * x for w, z, x in zip(weights, nodes, sols))
    return a0, a1


def _group_ids(values: np.ndarray, start: int = 0) -> np.ndarray:
    """Cluster values whose pairwise gaps are below MERGE_TOL (chain rule on
    the sorted order)."""
    ids = np.empty(len(values), dtype=int)
    order = np.argsort(values.real + 1e-12 * values.imag)
    gid = start
    prev = None
    for idx in order:
        if prev is not None and abs(values[idx] - prev) > MERGE_TOL:
            gid += 1
        ids[idx] = gid
        prev = values[idx]
    return ids


def beyn_solve(nep, contour: ContourSpec, threads: int = 1) -> list[NepEigenpair]:
    """All eigenvalues of T strictly inside the contour, with eigenvectors.

    The probe block is a seeded complex Gaussian; if the numerical rank of A0
    saturates the probe count, the solve is repeated with twice as many
    probes so no eigenvalue hides beyond the block size.
    """
    dim = getattr(nep, "dim", None)
    if dim is None:
        dim = np.asarray(nep(contour.nodes()[0])).shape[0]
    n_probe = min(contour.n_probe, dim)
    while True:
        rng = np.random.default_rng(contour.rng_seed)
        probe = (rng.standard_normal((dim, n_probe)) + 1j * rng.standard_normal((dim, n_probe))) / np.sqrt(2)
        a0, a1 = _resolvent_moments(nep, contour, probe, threads)
        u, sig, wh = sla.svd(a0, full_matrices=False)
        if sig[0] == 0:
            return []
        rank = int(np.sum(sig > contour.rank_tol * sig[0]))
        if rank == 0:
            return []
        if rank == n_probe and n_probe < dim:
            n_probe = min(2 * n_probe, dim)
            continue
        break

    u0, s0, w0 = u[:, :rank], sig[:rank], wh[:rank, :].conj().T
    b = (u0.conj().T @ a1 @ w0) / s0[None, :]
    vals, vecs = sla.eig(b)

    pairs: list[NepEigenpair] = []
    kept_vals = []
    for lam, s in zip(vals, vecs.T):
        if abs(lam - contour.center) >= contour.radius:
            continue
        v = u0 @ s
        v = v / sla.norm(v)
        t_at = np.asarray(nep(lam))
        scale = sla.norm(t_at, 2) * sla.norm(v)
        residual = sla.norm(t_at @ v) / scale if scale > 0 else 0.0
        if residual < contour.res_tol:
            pairs.append(NepEigenpair(complex(lam), v, float(residual), -1))
            kept_vals.append(lam)
    if pairs:
        for pair, gid in zip(pairs, _group_ids(np.asarray(kept_vals))):
            pair.group_id = int(gid)
    return sorted(pairs, key=lambda p: (p.k.real, p.k.imag))


def sweep_contours(
    nep,
    k_min: float,
    k_max: float,
    radius: float = 0.35,
    overlap: float = 0.1,
    imag_center: float = 0.0,
    validate=None,
    threads: int = 1,
    **contour_kwargs,
) -> list[NepEigenpair]:
    """Cover [k_min, k_max] with overlapping circular contours and merge.

    validate, if given, is called as validate(k, v) for every raw eigenpair
    and must return False to reject it (e.g. a residual check on a refined
    grid).  Groups from different contours whose representatives agree to
    MERGE_TOL are deduplicated, keeping the one with the smallest residual.
    """
    if not (0 < k_min < k_max):
        raise ValueError("need 0 < k_min < k_max")
    if not (0 < overlap < 2 * radius):
        raise ValueError("overlap must lie in (0, 2*radius)")
    centers = []
    c = k_min - overlap + radius
    while c - radius < k_max:
        centers.append(c)
        c += 2 * radius - overlap
    groups: list[list[NepEigenpair]] = []
    for center in centers:
        contour = ContourSpec(center=center + 1j * imag_center, radius=radius, **contour_kwargs)
        pairs = beyn_solve(nep, contour, threads=threads)
        if validate is not None:
            pairs = [p for p in pairs if validate(p.k, p.v)]
        by_id: dict[int, list[NepEigenpair]] = {}
        for p in pairs:
            by_id.setdefault(p.group_id, []).append(p)
        groups.extend(by_id.values())

    def rep(group):
        return min(group, key=lambda p: p.residual)

    groups.sort(key=lambda grp: rep(grp).k.real)
    merged: list[list[NepEigenpair]] = []
    for grp in groups:
        if merged and abs(rep(grp).k - rep(merged[-1]).k) <= MERGE_TOL:
            if rep(grp).residual < rep(merged[-1]).residual:
                merged[-1] = grp
            continue
        merged.append(grp)

    out: list[NepEigenpair] = []
    for gid, grp in enumerate(g for g in merged if k_min <= rep(g).k.real <= k_max):
        for p in grp:
            out.append(NepEigenpair(p.k, p.v, p.residual, gid))
    return out


def distinct_eigenvalues(pairs: list[NepEigenpair]) -> list[tuple[complex, int, float]]:
    """(representative k, multiplicity, best residual) per group, sorted."""
    by_id: dict[int, list[NepEigenpair]] = {}
    for p in pairs:
        by_id.setdefault(p.group_id, []).append(p)
    rows = []
    for grp in by_id.values():
        best = min(grp, key=lambda p: p.residual)
        rows.append((best.k, len(grp), best.residual))
    return sorted(rows, key=lambda row: row[0].real)
