"""Command-line interface exposing every pipeline.

Subcommands
-----------
disk-roots      analytic disk eigenvalues from the modal determinant (CSV)
disk-imag-scan  |f_ell| along the imaginary axis (CSV)
eig             boundary-integral eigenvalue sweep for a shape (JSON)
eigfun          eigenfunction field on a cartesian grid (CSV)
farfield        synthesize a far-field matrix, optionally noisy (text file)
recover         far-field-equation eigenvalue recovery (CSV + JSON peaks)
validate        disk cross-check suite (determinant vs BEM vs far field)

Delimited/JSON files are always written; --plot renders a matplotlib figure
next to each one.  Exit codes: 0 success, 1 input error, 2 validation
failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings

import numpy as np

from plateig import beyn, bie, disk, geometry, pipeline, recover, scatter

__all__ = ["main"]

OUTDIR_ENV = "PLATEIG_OUTDIR"


class _CliError(Exception):
    """Input error that should exit with status 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _CliError(message)


def _add_shape_args(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--shape",
        required=True,
        choices=["circle", "ellipse", "deformed", "peanut"],
        help="boundary curve family",
    )
    p.add_argument("--r", type=float, default=1.0, help="circle radius")
    p.add_argument("--a", type=float, default=1.0, help="ellipse semi-axis a")
    p.add_argument("--b", type=float, default=1.0, help="ellipse semi-axis b")
    p.add_argument("--eps", type=float, default=0.1, help="deformation amplitude")


def _add_common_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--outdir", default=None, help=f"output directory (default ${OUTDIR_ENV} or .)")
    p.add_argument("--plot", action="store_true", help="render PNG figures next to the data files")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="worker threads")


def _curve(args) -> geometry.BoundaryCurve:
    if args.shape == "circle":
        return geometry.make_curve("circle", r=args.r)
    if args.shape == "ellipse":
        return geometry.make_curve("ellipse", a=args.a, b=args.b)
    if args.shape == "deformed":
        return geometry.make_curve("deformed", eps=args.eps)
    return geometry.make_curve("peanut")


def _shape_tag(curve: geometry.BoundaryCurve) -> str:
    if curve.kind == "circle":
        return f"circle_r{curve.a:g}"
    if curve.kind == "ellipse":
        return f"ellipse_a{curve.a:g}_b{curve.b:g}"
    if curve.kind == "deformed":
        return f"deformed_eps{curve.eps:g}"
    return "peanut"


def _shape_meta(curve: geometry.BoundaryCurve) -> dict:
    return {"kind": curve.kind, "a": curve.a, "b": curve.b, "eps": curve.eps}


def _outdir(args) -> str:
    out = args.outdir or os.environ.get(OUTDIR_ENV) or "."
    os.makedirs(out, exist_ok=True)
    return out


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _cmd_disk_roots(args) -> int:
    out = _outdir(args)
    roots = disk.disk_te_roots(args.ell_max, args.kmin, args.kmax, tol=args.tol)
    path = os.path.join(out, "disk_roots.csv")
    _write_csv(
        path,
        ["ell", "k", "value"],
        [(r.ell, r.k, abs(disk.disk_determinant(r.ell, r.k))) for r in roots],
    )
    for r in roots:
        print(f"ell={r.ell}  k={r.k:.12f}  multiplicity={r.multiplicity}")
    print(f"wrote {path}")
    if args.plot:
        from plateig import plotting

        ks = np.linspace(args.kmin, args.kmax, 800)
        curves = {
            f"ell={ell}": disk.real_determinant(ell, ks) for ell in range(args.ell_max + 1)
        }
        png = os.path.join(out, "disk_roots.png")
        plotting.line_plot(
            png, ks, curves, "k", "phase-fixed determinant",
            vlines=[r.k for r in roots], title="disk modal determinant",
        )
        print(f"wrote {png}")
    return 0


def _cmd_disk_imag_scan(args) -> int:
    out = _outdir(args)
    s = np.linspace(args.smin, args.smax, args.ns)
    rows = []
    by_ell = {}
    for ell in range(args.ell_max + 1):
        vals = disk.imag_axis_scan(ell, s)
        by_ell[ell] = vals
        rows.extend((ell, si, vi) for si, vi in zip(s, vals))
    path = os.path.join(out, "disk_imag_scan.csv")
    _write_csv(path, ["ell", "s", "value"], rows)
    mins = {ell: float(v.min()) for ell, v in by_ell.items()}
    print(f"minimum |f_ell(i s)| per mode: {mins}")
    print(f"wrote {path}")
    if args.plot:
        from plateig import plotting

        png = os.path.join(out, "disk_imag_scan.png")
        plotting.line_plot(
            png, s, {f"ell={e}": v for e, v in by_ell.items()},
            "s", "|f_ell(i s)|", logy=True, title="imaginary-axis determinant scan",
        )
        print(f"wrote {png}")
    return 0


def _eig_pairs(args, curve):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", bie.ConditioningWarning)
        return pipeline.transmission_eigenvalues(
            curve,
            n=args.nodes,
            k_min=args.kmin,
            k_max=args.kmax,
            radius=args.radius,
            overlap=args.overlap,
            imag_center=args.imag_center,
            n_quad=args.nquad,
            n_probe=args.nprobe,
            rng_seed=args.seed,
            threads=args.threads,
        )


def _cmd_eig(args) -> int:
    out = _outdir(args)
    curve = _curve(args)
    pairs = _eig_pairs(args, curve)
    table = pipeline.eigenvalue_table(pairs)
    doc = {
        "shape": _shape_meta(curve),
        "n_nodes": args.nodes,
        "k_min": args.kmin,
        "k_max": args.kmax,
        "eigenvalues": [
            {
                "k": p.k.real,
                "k_imag": p.k.imag,
                "residual": p.residual,
                "group": p.group_id,
            }
            for p in pairs
        ],
        "groups": [
            {"k": k, "multiplicity": m, "residual": r} for k, m, r in table
        ],
    }
    tag = _shape_tag(curve)
    path = os.path.join(out, f"eig_{tag}.json")
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
    for k, m, r in table:
        print(f"k={k:.6f}  multiplicity={m}  residual={r:.2e}")
    print(f"wrote {path}")
    if args.plot and table:
        from plateig import plotting

        png = os.path.join(out, f"eig_{tag}.png")
        plotting.spectrum_plot(
            png, [k for k, _, _ in table], [m for _, m, _ in table],
            title=f"transmission eigenvalues: {tag}",
        )
        print(f"wrote {png}")
    return 0


def _cmd_eigfun(args) -> int:
    out = _outdir(args)
    curve = _curve(args)
    contour = beyn.ContourSpec(
        center=args.k, radius=args.radius, n_probe=4, rng_seed=args.seed
    )
    g = geometry.grid(curve, args.nodes)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", bie.ConditioningWarning)
        pairs = beyn.beyn_solve(bie.nep_operator(g), contour, threads=args.threads)
    if not pairs:
        raise _CliError(
            f"no eigenvalue inside |z - {args.k}| < {args.radius}; "
            "run `eig` first and pass one of its values via --k"
        )
    pair = min(pairs, key=lambda p: abs(p.k - args.k))
    dense = curve.position(2 * np.pi * np.arange(512) / 512)
    lo = dense.min(axis=0) - args.pad
    hi = dense.max(axis=0) + args.pad
    xs = np.linspace(lo[0], hi[0], args.grid_res)
    ys = np.linspace(lo[1], hi[1], args.grid_res)
    mesh = np.stack(np.meshgrid(xs, ys), axis=-1).reshape(-1, 2)
    field = bie.eigenfunction_field(g, pair.k.real, pair.v, mesh)
    tag = _shape_tag(curve)
    path = os.path.join(out, f"eigfun_{tag}.csv")
    _write_csv(
        path,
        ["x", "y", "re", "im", "inside"],
        (
            (p[0], p[1], v.real, v.imag, int(i))
            for p, v, i in zip(mesh, field.values, field.inside)
        ),
    )
    print(f"eigenvalue used: {pair.k.real:.9f} (residual {pair.residual:.2e})")
    print(f"wrote {path}")
    if args.plot:
        from plateig import plotting

        png = os.path.join(out, f"eigfun_{tag}.png")
        plotting.field_plot(
            png, xs, ys, field.values, dense,
            title=f"eigenfunction at k={pair.k.real:.5f}",
        )
        print(f"wrote {png}")
    return 0


def _cmd_farfield(args) -> int:
    out = _outdir(args)
    curve = _curve(args)
    ff = scatter.farfield_matrix(curve, args.k, n_dir=args.ndir, n_nodes=args.nodes)
    if args.delta > 0:
        ff = scatter.add_noise(ff, args.delta, args.seed)
    tag = _shape_tag(curve)
    path = os.path.join(out, f"farfield_{tag}_k{args.k:g}.txt")
    scatter.save_farfield(ff, path)
    print(f"wrote {path}")
    if args.plot:
        from plateig import plotting

        png = path.rsplit(".", 1)[0] + ".png"
        plotting.matrix_plot(png, ff.entries, title=f"|far field|, k={args.k:g}")
        print(f"wrote {png}")
    return 0


def _cmd_recover(args) -> int:
    out = _outdir(args)
    curve = _curve(args)
    matrices = None
    if args.data:
        matrices = {}
        for name in sorted(os.listdir(args.data)):
            if not name.endswith(".txt"):
                continue
            ff = scatter.load_farfield(os.path.join(args.data, name))
            matrices[ff.k] = ff
        if not matrices:
            raise _CliError(f"no far-field files found in {args.data}")
        ks = np.array(sorted(matrices))
    else:
        ks = np.linspace(args.kmin, args.kmax, args.nk)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", bie.ConditioningWarning)
        sw = recover.sweep(
            curve,
            ks,
            delta=args.delta,
            n_z=args.nz,
            seed=args.seed,
            n_dir=args.ndir,
            n_nodes=args.nodes,
            threads=args.threads,
            matrices=matrices,
        )
    peaks = recover.detect_peaks(sw)
    tag = _shape_tag(curve)
    csv_path = os.path.join(out, f"recover_{tag}.csv")
    _write_csv(csv_path, ["k", "g_norm_avg"], zip(sw.k_grid, sw.g_norm_avg))
    med = float(np.median(sw.g_norm_avg[np.isfinite(sw.g_norm_avg)]))
    report = {
        "shape": _shape_meta(curve),
        "delta": args.delta,
        "n_z": args.nz,
        "seed": args.seed,
        "peaks": [
            {
                "k_est": p,
                "prominence": float(
                    sw.g_norm_avg[np.argmin(np.abs(sw.k_grid - p))] / med
                ),
            }
            for p in peaks
        ],
    }
    json_path = os.path.join(out, f"peaks_{tag}.json")
    with open(json_path, "w") as fh:
        json.dump(report, fh, indent=1)
    print("recovered peaks:", ", ".join(f"{p:.5f}" for p in peaks) or "(none)")
    print(f"wrote {csv_path}")
    print(f"wrote {json_path}")
    if args.plot:
        from plateig import plotting

        png = os.path.join(out, f"recover_{tag}.png")
        plotting.line_plot(
            png, sw.k_grid, {"avg ||g_z||": sw.g_norm_avg}, "k", "indicator",
            logy=True, vlines=peaks, title=f"far-field recovery: {tag}",
        )
        print(f"wrote {png}")
    return 0


def _cmd_validate(args) -> int:
    checks = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", bie.ConditioningWarning)
        curve = geometry.make_curve("circle", r=1.0)
        roots = [r.k for r in disk.disk_te_roots(3, 1.0, 5.0)]
        pairs = pipeline.transmission_eigenvalues(
            curve, n=args.nodes, k_min=1.0, k_max=5.0, threads=args.threads
        )
        table = pipeline.eigenvalue_table(pairs)
        diffs = [abs(k - r) for (k, _, _), r in zip(table, roots)]
        checks.append(
            ("determinant vs BEM eigenvalues", max(diffs) if diffs else np.inf, 5e-5)
        )

        ff = scatter.farfield_matrix(curve, 2.0, n_dir=64, n_nodes=args.nodes)
        theta = 2 * np.pi * np.arange(64) / 64
        analytic = disk.disk_farfield_analytic(2.0, theta[:, None], theta[None, :])
        rel = float(
            np.abs(ff.entries - analytic).max() / np.abs(analytic).max()
        )
        checks.append(("BEM vs analytic far field (k=2)", rel, 1e-6))

        k1 = roots[0]
        z = np.array([0.31, -0.17])
        g_at = np.linalg.norm(
            recover.tikhonov_morozov(
                scatter.farfield_matrix(curve, k1, n_nodes=args.nodes), z
            )[0]
        )
        g_off = np.linalg.norm(
            recover.tikhonov_morozov(
                scatter.farfield_matrix(curve, 1.0, n_nodes=args.nodes), z
            )[0]
        )
        checks.append(("recovery indicator contrast at k1", g_off / g_at, 1 / 5))

    ok = True
    for name, value, tol in checks:
        passed = value < tol
        ok = ok and passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {value:.3e} (tol {tol:g})")
    return 0 if ok else 2


def _build_parser() -> _Parser:
    parser = _Parser(prog="plateig", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("disk-roots", help="analytic disk eigenvalues")
    p.add_argument("--ell-max", type=int, default=3)
    p.add_argument("--kmin", type=float, default=1.0)
    p.add_argument("--kmax", type=float, default=5.0)
    p.add_argument("--tol", type=float, default=1e-12)
    _add_common_args(p)
    p.set_defaults(func=_cmd_disk_roots)

    p = sub.add_parser("disk-imag-scan", help="imaginary-axis determinant scan")
    p.add_argument("--ell-max", type=int, default=5)
    p.add_argument("--smin", type=float, default=0.05)
    p.add_argument("--smax", type=float, default=5.0)
    p.add_argument("--ns", type=int, default=200)
    _add_common_args(p)
    p.set_defaults(func=_cmd_disk_imag_scan)

    p = sub.add_parser("eig", help="transmission eigenvalues of a shape")
    _add_shape_args(p)
    p.add_argument("--nodes", type=int, default=120)
    p.add_argument("--kmin", type=float, default=1.0)
    p.add_argument("--kmax", type=float, default=5.0)
    p.add_argument("--radius", type=float, default=0.35)
    p.add_argument("--overlap", type=float, default=0.1)
    p.add_argument("--imag-center", type=float, default=0.0,
                   help="imaginary offset of the contour centers (off-axis search)")
    p.add_argument("--nquad", type=int, default=32)
    p.add_argument("--nprobe", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    _add_common_args(p)
    p.set_defaults(func=_cmd_eig)

    p = sub.add_parser("eigfun", help="eigenfunction field near one eigenvalue")
    _add_shape_args(p)
    p.add_argument("--k", type=float, required=True, help="target eigenvalue")
    p.add_argument("--radius", type=float, default=0.05, help="search radius around --k")
    p.add_argument("--nodes", type=int, default=120)
    p.add_argument("--grid-res", type=int, default=200)
    p.add_argument("--pad", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    _add_common_args(p)
    p.set_defaults(func=_cmd_eigfun)

    p = sub.add_parser("farfield", help="synthesize a far-field matrix")
    _add_shape_args(p)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--ndir", type=int, default=64)
    p.add_argument("--nodes", type=int, default=120)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    _add_common_args(p)
    p.set_defaults(func=_cmd_farfield)

    p = sub.add_parser("recover", help="recover eigenvalues from far-field data")
    _add_shape_args(p)
    p.add_argument("--kmin", type=float, default=1.0)
    p.add_argument("--kmax", type=float, default=5.0)
    p.add_argument("--nk", type=int, default=150)
    p.add_argument("--delta", type=float, default=0.02)
    p.add_argument("--nz", type=int, default=20)
    p.add_argument("--ndir", type=int, default=64)
    p.add_argument("--nodes", type=int, default=120)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--data", default=None,
                   help="directory of farfield files to use instead of synthesis")
    _add_common_args(p)
    p.set_defaults(func=_cmd_recover)

    p = sub.add_parser("validate", help="disk cross-check suite")
    p.add_argument("--nodes", type=int, default=120)
    _add_common_args(p)
    p.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
