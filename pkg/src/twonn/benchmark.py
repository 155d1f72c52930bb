"""Canned benchmark reproductions: exemplar fits, convergence tables, and
noise-plateau scans on the synthetic generators.

Each runner writes delimited data files plus rendered figures into an
output directory and returns a summary dict.
"""

from __future__ import annotations

import json
import os

import numpy as np

from . import plots
from .estimator import compute_mu, empirical_cdf, estimate_id, kept_mask
from .generators import (
    CAUCHY_NORM,
    GAUSSIAN,
    HYPERCUBE,
    HYPERSPHERE,
    NOISY_GAUSS_ROLL,
    NOISY_PLANE,
    SWISS_ROLL,
    GeneratorSpec,
    generate,
)
from .io import export_fit, format_float, write_scan_tsv
from .neighbors import two_nearest
from .scan import detect_plateau, scan


def _child_seeds(key: tuple[int, ...], count: int) -> list[int]:
    """Independent per-instance seeds derived from a structured key, so
    distinct (kind, dim, size) cells never share a stream."""
    ss = np.random.SeedSequence(list(key))
    return [int(s.generate_state(1)[0]) for s in ss.spawn(count)]


def _fit_one(spec: GeneratorSpec, discard: float, outdir: str, stem: str):
    ps, metric = generate(spec)
    ni = two_nearest(ps, metric)
    est = estimate_id(ni, discard)
    mu = compute_mu(ni)
    pts = empirical_cdf(mu)
    kept = kept_mask(mu.n, discard)
    tsv = os.path.join(outdir, f"{stem}_fit.tsv")
    export_fit(pts, kept, est.d_hat, tsv)
    png = os.path.join(outdir, f"{stem}_fit.png")
    x = np.array([p.x for p in pts])
    y = np.array([p.y for p in pts])
    plots.render_fit(x, y, kept, est.d_hat, png, title=stem.replace("_", " "))
    return est


def run_fig1(seed: int = 1, outdir: str = ".", n: int = 2500, discard: float = 0.10) -> dict:
    """Three exemplar fits: 14-d hypercube with pbc, Swiss Roll, and the
    heavy-tailed Cauchy-norm set in 20 dimensions (the latter also fitted
    without discarding, where the tail drags the slope down)."""
    os.makedirs(outdir, exist_ok=True)
    seeds = _child_seeds((seed,), 3)
    cube = _fit_one(
        GeneratorSpec(HYPERCUBE, d=14, n=n, seed=seeds[0], pbc=True), discard, outdir, "fig1_hypercube"
    )
    roll = _fit_one(GeneratorSpec(SWISS_ROLL, d=2, n=n, seed=seeds[1]), discard, outdir, "fig1_swiss_roll")
    cauchy = _fit_one(GeneratorSpec(CAUCHY_NORM, d=20, n=n, seed=seeds[2]), discard, outdir, "fig1_cauchy")
    cauchy_full = _fit_one(
        GeneratorSpec(CAUCHY_NORM, d=20, n=n, seed=seeds[2]), 0.0, outdir, "fig1_cauchy_full"
    )
    summary = {
        "hypercube_d14_pbc": cube.d_hat,
        "swiss_roll": roll.d_hat,
        "cauchy_d20": cauchy.d_hat,
        "cauchy_d20_no_discard": cauchy_full.d_hat,
        "n": n,
        "discard_fraction": discard,
        "seed": seed,
    }
    _write_summary(outdir, "fig1_summary.json", summary)
    return summary


_FIG2_KINDS = {
    "hypercube_pbc": lambda d, n, s: GeneratorSpec(HYPERCUBE, d=d, n=n, seed=s, pbc=True),
    "gaussian": lambda d, n, s: GeneratorSpec(GAUSSIAN, d=d, n=n, seed=s),
    "cauchy": lambda d, n, s: GeneratorSpec(CAUCHY_NORM, d=d, n=n, seed=s),
    "hypersphere": lambda d, n, s: GeneratorSpec(HYPERSPHERE, d=d, n=n, seed=s),
}

FIG2_SIZES = (25, 50, 100, 250, 500, 1000, 2500, 5000, 10000, 25000)


def run_fig2(
    seed: int = 1,
    outdir: str = ".",
    kinds: tuple[str, ...] = ("hypercube_pbc",),
    dims: tuple[int, ...] = (2, 5, 10),
    sizes: tuple[int, ...] = FIG2_SIZES,
    instances: int = 20,
    discard: float = 0.10,
) -> dict:
    """Convergence of the estimate with sample size: `instances` fresh
    datasets per (kind, dim, size), averaged."""
    os.makedirs(outdir, exist_ok=True)
    summary: dict = {"seed": seed, "instances": instances, "kinds": {}}
    for ki, kind in enumerate(kinds):
        make = _FIG2_KINDS[kind]
        rows = []
        for d in dims:
            for n in sizes:
                seeds = _child_seeds((seed, ki, d, n), instances)
                vals = np.empty(instances)
                for i, s in enumerate(seeds):
                    ps, metric = generate(make(d, n, s))
                    ni = two_nearest(ps, metric)
                    vals[i] = estimate_id(ni, discard).d_hat
                rows.append((d, n, float(vals.mean()), float(vals.std())))
        tsv = os.path.join(outdir, f"fig2_{kind}.tsv")
        with open(tsv, "w") as fh:
            fh.write("# dim\tn\tmean_d_hat\tstd_d_hat\n")
            for d, n, mean, std in rows:
                fh.write(f"{d}\t{n}\t{format_float(mean)}\t{format_float(std)}\n")
        plots.render_convergence(rows, os.path.join(outdir, f"fig2_{kind}.png"), title=kind)
        summary["kinds"][kind] = {
            f"d={d}": {str(n): mean for dd, n, mean, _ in rows if dd == d} for d in dims
        }
    _write_summary(outdir, "fig2_summary.json", summary)
    return summary


def run_fig3(
    seed: int = 1,
    outdir: str = ".",
    kinds: tuple[str, ...] = (NOISY_PLANE, NOISY_GAUSS_ROLL),
    sigmas: tuple[float, ...] = (0.0, 1e-4, 2e-4),
    n: int = 50000,
    noise_dims: int = 20,
    discard: float = 0.10,
) -> dict:
    """Scale scan of noisy two-dimensional manifolds: the estimate sits on
    a plateau at 2 until blocks grow large enough to resolve the noise."""
    os.makedirs(outdir, exist_ok=True)
    summary: dict = {"seed": seed, "n": n, "noise_dims": noise_dims, "curves": {}}
    for kind in kinds:
        curves = {}
        for sigma in sigmas:
            spec = GeneratorSpec(kind, d=2, n=n, seed=seed, noise_sigma=sigma, noise_dims=noise_dims)
            ps, metric = generate(spec)
            curve = scan(ps, metric, discard_fraction=discard, seed=seed)
            stem = f"fig3_{kind}_sigma{sigma:g}"
            with open(os.path.join(outdir, f"{stem}.tsv"), "w") as fh:
                write_scan_tsv(curve, fh)
            plateau = detect_plateau(curve, rel_tol=0.15)
            curves[f"{sigma:g}"] = {
                "plateau_found": plateau.found,
                "plateau_range": [plateau.lo, plateau.hi] if plateau.found else None,
                "d_plateau": plateau.d_plateau,
                "d_at_largest_block": curve.points[-1].d_mean,
            }
            plots.render_scan(
                curve, plateau, os.path.join(outdir, f"{stem}.png"), title=stem.replace("_", " ")
            )
        summary["curves"][kind] = curves
    _write_summary(outdir, "fig3_summary.json", summary)
    return summary


def _write_summary(outdir: str, name: str, summary: dict) -> None:
    with open(os.path.join(outdir, name), "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
