"""Command-line interface.

Subcommands: estimate, scan, generate, benchmark. Every run is a pure
function of its inputs, flags, and seed; rerunning reproduces the data
outputs byte for byte. Exit codes: 0 success, 1 usage error, 2 data or
validation error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import benchmark as bench
from .data import Metric
from .errors import TwonnError
from .estimator import CDF_FIT, MLE, compute_mu, empirical_cdf, estimate_id, kept_mask
from .generators import KINDS, GeneratorSpec, generate
from .io import export_fit, load_distance_matrix, load_points, write_points, write_scan_tsv
from .neighbors import two_nearest, two_nearest_from_matrix
from .scan import MIN_BLOCK_DEFAULT, default_block_grid, detect_plateau, scan

_METHODS = {"cdf": CDF_FIT, "cdf_fit": CDF_FIT, "mle": MLE}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parse_metric(text: str) -> Metric:
    if text == "euclidean":
        return Metric.euclidean()
    if text == "precomputed":
        return Metric.precomputed()
    if text.startswith("pbc="):
        try:
            lengths = [float(v) for v in text[4:].split(",") if v]
        except ValueError as exc:
            raise _UsageError(f"bad box lengths in {text!r}") from exc
        if not lengths:
            raise _UsageError("pbc= needs at least one box length")
        return Metric.periodic(lengths)
    raise _UsageError(f"unknown metric {text!r} (euclidean | pbc=L1,L2,... | precomputed)")


def _add_input_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", help="points table, rows = samples")
    p.add_argument("--matrix", help="square distance matrix")
    p.add_argument("--format", choices=["csv", "tsv"], help="override extension-based format detection")
    p.add_argument("--metric", default=None, help="euclidean | pbc=L1,L2,... | precomputed")
    p.add_argument("--drop-duplicates", action="store_true", help="keep the first of each coincident group")
    p.add_argument("--threads", type=int, default=None, help="cap worker threads (results identical)")


def _add_estimator_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--discard", type=float, default=0.10, metavar="FRACTION",
                   help="fraction of highest mu values excluded from the fit (default 0.10)")
    p.add_argument("--method", choices=sorted(_METHODS), default="cdf")


def build_parser() -> _Parser:
    parser = _Parser(prog="twonn", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("estimate", help="estimate the intrinsic dimension of one dataset")
    _add_input_flags(pe)
    _add_estimator_flags(pe)
    pe.add_argument("--export-fit", metavar="PATH", help="write the fit plane as TSV")
    pe.add_argument("--plot", metavar="PATH", help="render the fit to an image file")

    ps = sub.add_parser("scan", help="block-decimation scan of d versus block size")
    _add_input_flags(ps)
    _add_estimator_flags(ps)
    ps.add_argument("--blocks", default="auto", help="comma-separated block sizes, or 'auto'")
    ps.add_argument("--min-block", type=int, default=MIN_BLOCK_DEFAULT)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--out", metavar="PATH", help="TSV output path (default stdout)")
    ps.add_argument("--plateau", action="store_true", help="also print a plateau report as JSON")
    ps.add_argument("--rel-tol", type=float, default=0.05, help="plateau flatness tolerance")
    ps.add_argument("--min-points", type=int, default=3, help="minimum plateau length")
    ps.add_argument("--plot", metavar="PATH", help="render the scan curve to an image file")

    pg = sub.add_parser("generate", help="write a synthetic dataset as CSV")
    pg.add_argument("--kind", choices=KINDS, required=True)
    pg.add_argument("--dim", type=int, default=2)
    pg.add_argument("--n", type=int, required=True)
    pg.add_argument("--seed", type=int, default=0)
    pg.add_argument("--pbc", action="store_true")
    pg.add_argument("--noise-sigma", type=float, default=0.0)
    pg.add_argument("--noise-dims", type=int, default=0)
    pg.add_argument("--out", metavar="PATH", help="output path (default stdout)")

    pb = sub.add_parser("benchmark", help="reproduce the canned benchmark figures")
    pb.add_argument("figure", choices=["fig1", "fig2", "fig3"])
    pb.add_argument("--seed", type=int, default=1)
    pb.add_argument("--outdir", default="benchmark_out")
    pb.add_argument("--n", type=int, default=None, help="override dataset size")
    pb.add_argument("--sizes", default=None, help="fig2: comma-separated sample sizes")
    pb.add_argument("--instances", type=int, default=20, help="fig2: datasets per cell")
    pb.add_argument("--dims", default="2,5,10", help="fig2: comma-separated dimensions")
    pb.add_argument("--kinds", default=None, help="fig2/fig3: comma-separated dataset kinds")
    pb.add_argument("--sigmas", default="0,0.0001,0.0002", help="fig3: noise scales")
    pb.add_argument("--noise-dims", type=int, default=20, help="fig3: noise directions")
    return parser


def _set_threads(n: int | None) -> int:
    if n is None:
        return -1
    if n < 1:
        raise _UsageError("--threads must be >= 1")
    import numba

    numba.set_num_threads(n)
    return n


def _load(args):
    """Resolve the XOR of --input/--matrix into (neighbor list, n_total)."""
    if (args.input is None) == (args.matrix is None):
        raise _UsageError("exactly one of --input or --matrix is required")
    workers = _set_threads(args.threads)
    if args.matrix is not None:
        if args.metric is not None and args.metric != "precomputed":
            raise _UsageError("--matrix implies --metric precomputed")
        dm = load_distance_matrix(args.matrix, args.format)
        return two_nearest_from_matrix(dm, drop_duplicates=args.drop_duplicates), dm.n
    metric = _parse_metric(args.metric) if args.metric else Metric.euclidean()
    if metric.kind == "precomputed":
        raise _UsageError("--metric precomputed requires --matrix")
    pts = load_points(args.input, args.format)
    ni = two_nearest(pts, metric, drop_duplicates=args.drop_duplicates, workers=workers)
    return ni, pts.n


def _cmd_estimate(args) -> int:
    ni, _ = _load(args)
    est = estimate_id(ni, args.discard, _METHODS[args.method])
    result = {
        "d_hat": est.d_hat,
        "method": est.method,
        "n_total": est.n_total,
        "n_used": est.n_used,
        "discard_fraction": est.discard_fraction,
        "rms_residual": est.rms_residual,
    }
    print(json.dumps(result))
    if args.export_fit or args.plot:
        mu = compute_mu(ni)
        pts = empirical_cdf(mu)
        kept = kept_mask(mu.n, args.discard)
        if args.export_fit:
            export_fit(pts, kept, est.d_hat, args.export_fit)
        if args.plot:
            from . import plots

            x = np.array([p.x for p in pts])
            y = np.array([p.y for p in pts])
            plots.render_fit(x, y, kept, est.d_hat, args.plot)
    return 0


def _cmd_scan(args) -> int:
    if (args.input is None) == (args.matrix is None):
        raise _UsageError("exactly one of --input or --matrix is required")
    _set_threads(args.threads)
    if args.matrix is not None:
        data = load_distance_matrix(args.matrix, args.format)
        metric = Metric.precomputed()
    else:
        data = load_points(args.input, args.format)
        metric = _parse_metric(args.metric) if args.metric else Metric.euclidean()
    if args.blocks == "auto":
        sizes = default_block_grid(data.n, args.min_block)
    else:
        try:
            sizes = [int(v) for v in args.blocks.split(",") if v]
        except ValueError as exc:
            raise _UsageError(f"bad --blocks value {args.blocks!r}") from exc
    curve = scan(
        data,
        metric,
        sizes,
        discard_fraction=args.discard,
        method=_METHODS[args.method],
        seed=args.seed,
        min_block=args.min_block,
        drop_duplicates=args.drop_duplicates,
    )
    if args.out:
        with open(args.out, "w") as fh:
            write_scan_tsv(curve, fh)
    else:
        write_scan_tsv(curve, sys.stdout)
    plateau = None
    if args.plateau:
        plateau = detect_plateau(curve, args.rel_tol, args.min_points)
        print(
            json.dumps(
                {
                    "found": plateau.found,
                    "lo": plateau.lo,
                    "hi": plateau.hi,
                    "d_plateau": plateau.d_plateau,
                }
            )
        )
    if args.plot:
        from . import plots

        plots.render_scan(curve, plateau, args.plot)
    return 0


def _cmd_generate(args) -> int:
    spec = GeneratorSpec(
        kind=args.kind,
        d=args.dim,
        n=args.n,
        seed=args.seed,
        pbc=args.pbc,
        noise_sigma=args.noise_sigma,
        noise_dims=args.noise_dims,
    )
    ps, _ = generate(spec)
    if args.out:
        with open(args.out, "w") as fh:
            write_points(ps.points, fh)
    else:
        write_points(ps.points, sys.stdout)
    return 0


def _cmd_benchmark(args) -> int:
    kw: dict = {"seed": args.seed, "outdir": args.outdir}
    if args.figure == "fig1":
        if args.n:
            kw["n"] = args.n
        summary = bench.run_fig1(**kw)
    elif args.figure == "fig2":
        if args.sizes:
            kw["sizes"] = tuple(int(v) for v in args.sizes.split(",") if v)
        if args.kinds:
            kw["kinds"] = tuple(args.kinds.split(","))
        kw["dims"] = tuple(int(v) for v in args.dims.split(",") if v)
        kw["instances"] = args.instances
        summary = bench.run_fig2(**kw)
    else:
        if args.n:
            kw["n"] = args.n
        if args.kinds:
            kw["kinds"] = tuple(args.kinds.split(","))
        kw["sigmas"] = tuple(float(v) for v in args.sigmas.split(",") if v)
        kw["noise_dims"] = args.noise_dims
        summary = bench.run_fig3(**kw)
    print(json.dumps(summary, sort_keys=True))
    return 0


_COMMANDS = {
    "estimate": _cmd_estimate,
    "scan": _cmd_scan,
    "generate": _cmd_generate,
    "benchmark": _cmd_benchmark,
}


def run_cli(argv: list[str]) -> int:
    """Parse argv (without the program name) and run; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except TwonnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
