"""Command line entry point: ``jetnormal <command> [options]``.

Exit codes: 0 success, 1 I/O failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io as jio
from .errors import ExactFit, MalformedLine
from .estimate import ALIGN_MODES, estimate_normals
from .lab import bench, convergence, report
from .lab.metrics import angle_error, metrics_report
from .lab.sampling import DENSITIES, SampleSpec
from .lab.surfaces import AnalyticSurface

EXIT_OK, EXIT_IO, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def named_surface(name: str, coeffs: str | None = None) -> AnalyticSurface:
    """Surfaces addressable by name from the command line."""
    if name == "plane":
        return AnalyticSurface.plane(0.3, -0.2)
    if name == "sphere":
        return AnalyticSurface.sphere(1.0)
    if name == "monge_trig":
        return AnalyticSurface.monge_trig()
    if name == "paraboloid":
        return AnalyticSurface.monge_poly({(2, 0): 1.0, (0, 2): 1.0})
    if name == "saddle":
        return AnalyticSurface.monge_poly({(2, 0): 1.0, (0, 2): -1.0})
    if name == "cubic":
        return AnalyticSurface.monge_poly({(2, 0): 1.0, (0, 2): -1.0, (3, 0): 0.5, (1, 2): 0.5})
    if name == "monge_poly":
        if not coeffs:
            raise UsageError("monge_poly needs --coeffs 'i,j=c;...'")
        return AnalyticSurface.monge_poly(_parse_coeffs(coeffs))
    raise UsageError(f"unknown surface {name!r}")


SURFACE_NAMES = ("plane", "sphere", "monge_trig", "paraboloid", "saddle", "cubic", "monge_poly")


def _parse_coeffs(text: str) -> dict:
    out = {}
    try:
        for item in filter(None, (s.strip() for s in text.split(";"))):
            ij, c = item.split("=")
            i, j = (int(v) for v in ij.split(","))
            out[(i, j)] = float(c)
    except ValueError:
        raise UsageError(f"bad --coeffs {text!r}; expected 'i,j=c;i,j=c'") from None
    return out


def _floats(text: str) -> list:
    try:
        vals = [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise UsageError("empty number list")
    return vals


def _names(text: str) -> list:
    return [v.strip() for v in str(text).split(",") if v.strip()]


def _write_text(path, text):
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)


# commands ------------------------------------------------------------------

def cmd_estimate(args) -> int:
    if args.heatmap and not args.gt:
        raise UsageError("--heatmap requires --gt")
    if args.k < 1 or args.order < 1:
        raise UsageError("--k and --order must be positive")
    cloud = jio.read_xyz(args.input)
    gt = jio.read_normals(args.gt) if args.gt else None
    if gt is not None and len(gt) != len(cloud):
        raise UsageError(f"--gt has {len(gt)} normals for {len(cloud)} points")
    if args.k > len(cloud):
        raise UsageError(f"--k {args.k} exceeds the cloud size {len(cloud)}")
    normals, failures = estimate_normals(
        cloud, args.k, order_n=args.order, weights=args.weights, align=args.align,
        tol_deg=args.tol_deg, max_iters=args.max_iters, jobs=args.jobs,
    )
    jio.write_normals(args.output, normals)
    if failures:
        print(f"{failures} of {len(cloud)} points fell back to the PCA normal", file=sys.stderr)
    if gt is not None:
        errs = angle_error(normals, gt / np.linalg.norm(gt, axis=1, keepdims=True))
        m = metrics_report(errs)
        print(f"points {len(cloud)}  rmse {m.rmse_deg:.6g} deg  pgp5 {m.pgp[5.0]:.4f}  "
              f"pgp10 {m.pgp[10.0]:.4f}  auc {m.auc:.4f}")
        if args.heatmap:
            jio.write_error_ply(args.heatmap, cloud, errs, args.heatmap_max_deg)
    return EXIT_OK


def cmd_convergence(args) -> int:
    surface = named_surface(args.surface, args.coeffs)
    h = _floats(args.h)
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    try:
        if args.quantity == "normal":
            rep = convergence.normal_convergence_study(surface, args.order, h, args.trials,
                                                       n_points=args.n_points, seed=args.seed)
        else:
            rep = convergence.convergence_study(surface, args.order, args.k_degree, h, args.trials,
                                                n_points=args.n_points, seed=args.seed)
    except ExactFit as exc:
        rep = exc.report
        print("exact fit: every error is below the 1e-12 floor, slope undefined")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(report.convergence_text(rep, args.order))
    if args.output:
        _write_text(args.output, report.convergence_csv(rep, args.order))
    if args.figure:
        from .lab.plots import plot_convergence
        plot_convergence(rep, args.figure)
    return EXIT_OK


def _bench_specs(args):
    densities = _names(args.density)
    for d in densities:
        if d not in DENSITIES:
            raise UsageError(f"unknown density {d!r}")
    try:
        return [
            SampleSpec(h=h, n_points=args.n_points, noise_sigma_rel=s, density=d, tilt_deg=t)
            for h in _floats(args.h) for s in _floats(args.noise) for d in densities for t in _floats(args.tilt)
        ]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_bench(args) -> int:
    surfaces = {name: named_surface(name, args.coeffs) for name in _names(args.surfaces)}
    pipelines = _names(args.pipelines) if args.pipelines else list(bench.PIPELINES)
    for p in pipelines:
        if p != "pca" and p not in bench.PIPELINES and not p.endswith("/none"):
            raise UsageError(f"unknown pipeline {p!r}")
    specs = _bench_specs(args)
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    rows = bench.compare_pipelines(surfaces, specs, pipelines, args.trials, order_n=args.order, seed=args.seed)
    print(report.bench_text(rows))
    if args.output:
        _write_text(args.output, report.bench_csv(rows))
    if args.figure:
        from .lab.plots import plot_bench_rmse
        plot_bench_rmse(rows, args.figure)
    return EXIT_OK


def cmd_profile(args) -> int:
    surface = named_surface(args.surface, args.coeffs)
    try:
        spec = SampleSpec(h=args.h, n_points=args.n_points, noise_sigma_rel=args.noise, density=args.density)
        rows = bench.zangle_error_profile(surface, spec, _floats(args.bins), args.trials,
                                          order_n=args.order, weighting=args.weights, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(report.profile_text(rows))
    if args.output:
        _write_text(args.output, report.profile_csv(rows))
    if args.figure:
        from .lab.plots import plot_zangle_profile
        plot_zangle_profile(rows, args.figure)
    return EXIT_OK


def cmd_generate(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.n < 1:
        raise UsageError("--n must be positive")
    if args.shape == "plane":
        normal = np.array(_floats(args.normal))
        if normal.shape != (3,) or np.linalg.norm(normal) == 0 or normal[2] == 0:
            raise UsageError("--normal needs 3 numbers with a nonzero z component")
        normal = normal / np.linalg.norm(normal)
        xy = rng.uniform(-1.0, 1.0, size=(args.n, 2))
        z = -(normal[0] * xy[:, 0] + normal[1] * xy[:, 1]) / normal[2]
        pts = np.column_stack([xy, z])
        nrm = np.tile(normal, (args.n, 1))
    else:
        v = rng.standard_normal((args.n, 3))
        nrm = v / np.linalg.norm(v, axis=1, keepdims=True)
        pts = args.radius * nrm
    jio.write_xyz(args.output, pts)
    if args.normals_output:
        jio.write_normals(args.normals_output, nrm)
    return EXIT_OK


# parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jetnormal", description="Jet-fitting normal estimation toolkit.")
    p.add_argument("--config", help="key = value file; command-line flags take precedence")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("estimate", help="estimate a normal for every point of an .xyz file")
    e.add_argument("--input", required=True)
    e.add_argument("--output", required=True)
    e.add_argument("--k", type=int, default=256)
    e.add_argument("--order", type=int, default=3)
    e.add_argument("--weights", choices=("uniform", "gaussian", "irls"), default="uniform")
    e.add_argument("--align", choices=ALIGN_MODES, default="z-iterate")
    e.add_argument("--tol-deg", type=float, default=0.5)
    e.add_argument("--max-iters", type=int, default=5)
    e.add_argument("--gt", help="ground-truth .normals file for error reporting")
    e.add_argument("--heatmap", help="write an error-colored PLY here (needs --gt)")
    e.add_argument("--heatmap-max-deg", type=float, default=jio.DEFAULT_HEATMAP_MAX_DEG)
    e.add_argument("--jobs", type=int, default=1)
    e.set_defaults(func=cmd_estimate)

    c = sub.add_parser("convergence", help="log-log convergence of jet coefficients or normals")
    c.add_argument("--surface", choices=SURFACE_NAMES, default="monge_trig")
    c.add_argument("--coeffs", help="monge_poly coefficients 'i,j=c;...'")
    c.add_argument("--quantity", choices=("coeff", "normal"), default="coeff")
    c.add_argument("--order", type=int, default=2)
    c.add_argument("--k-degree", type=int, default=1)
    c.add_argument("--h", default="0.4,0.2,0.1,0.05")
    c.add_argument("--trials", type=int, default=50)
    c.add_argument("--n-points", type=int, default=50)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--output", help="CSV report path")
    c.add_argument("--figure", help="PNG log-log plot path")
    c.set_defaults(func=cmd_convergence)

    b = sub.add_parser("bench", help="compare estimation pipelines on sampled patches")
    b.add_argument("--surfaces", default="sphere,monge_trig,cubic")
    b.add_argument("--coeffs")
    b.add_argument("--h", default="0.5")
    b.add_argument("--noise", default="0,0.00125,0.006,0.012")
    b.add_argument("--density", default="uniform")
    b.add_argument("--tilt", default="0")
    b.add_argument("--n-points", type=int, default=64)
    b.add_argument("--pipelines", help=f"comma-separated subset of {', '.join(bench.PIPELINES)}")
    b.add_argument("--order", type=int, default=3)
    b.add_argument("--trials", type=int, default=20)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--output")
    b.add_argument("--figure")
    b.set_defaults(func=cmd_bench)

    z = sub.add_parser("profile", help="normal error against the z-angle of the true normal")
    z.add_argument("--surface", choices=SURFACE_NAMES, default="monge_trig")
    z.add_argument("--coeffs")
    z.add_argument("--h", type=float, default=0.6)
    z.add_argument("--noise", type=float, default=0.00125)
    z.add_argument("--density", choices=DENSITIES, default="uniform")
    z.add_argument("--n-points", type=int, default=64)
    z.add_argument("--bins", default="0,10,20,30,40,50,60,70,80,90")
    z.add_argument("--weights", choices=("uniform", "gaussian", "irls"), default="uniform")
    z.add_argument("--order", type=int, default=3)
    z.add_argument("--trials", type=int, default=56)
    z.add_argument("--seed", type=int, default=0)
    z.add_argument("--output")
    z.add_argument("--figure")
    z.set_defaults(func=cmd_profile)

    g = sub.add_parser("generate", help="write a synthetic .xyz (and .normals) file")
    g.add_argument("--shape", choices=("plane", "sphere"), default="plane")
    g.add_argument("--normal", default="0,0,1", help="plane normal")
    g.add_argument("--radius", type=float, default=1.0)
    g.add_argument("--n", type=int, default=5000)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--output", required=True)
    g.add_argument("--normals-output")
    g.set_defaults(func=cmd_generate)
    return p


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    values = jio.read_config(known.config)
    for action in parser._subparsers._group_actions:
        for sp in action.choices.values():
            dests = {a.dest: a for a in sp._actions}
            defaults = {}
            for key, raw in values.items():
                if key in dests:
                    a = dests[key]
                    defaults[key] = a.type(raw) if a.type else raw
                    a.required = False
            sp.set_defaults(**defaults)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        try:
            _apply_config(parser, argv)
        except (OSError, MalformedLine, ValueError) as exc:
            print(f"jetnormal: bad config: {exc}", file=sys.stderr)
            return EXIT_USAGE
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return EXIT_USAGE if exc.code else EXIT_OK
        return args.func(args)
    except UsageError as exc:
        print(f"jetnormal: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MalformedLine as exc:
        print(f"jetnormal: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"jetnormal: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
