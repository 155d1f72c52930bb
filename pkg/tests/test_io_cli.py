import json
import math
import os

import numpy as np
import pytest

from twonn.cli import run_cli
from twonn.errors import (
    AsymmetricMatrix,
    NegativeDistance,
    NotSquare,
    ParseError,
)
from twonn.estimator import CdfPoint, MuSample, empirical_cdf, fit_line_through_origin
from twonn.generators import GeneratorSpec, generate
from twonn.io import (
    export_fit,
    load_distance_matrix,
    load_fit,
    load_points,
    write_points,
)

from conftest import seeded


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


class TestLoadPoints:
    def test_three_line_csv(self, tmp_path):
        ps = load_points(write(tmp_path, "p.csv", "0,0\n1,0\n3,0\n"))
        assert ps.n == 3 and ps.dim_embed == 2

    def test_header_skipped(self, tmp_path):
        ps = load_points(write(tmp_path, "p.csv", "x,y\n0,0\n1,0\n3,0\n"))
        assert ps.n == 3

    def test_ragged_row_named(self, tmp_path):
        with pytest.raises(ParseError) as exc:
            load_points(write(tmp_path, "p.csv", "0,0\n1,0\n3\n"))
        assert exc.value.line == 3

    def test_bad_cell_position(self, tmp_path):
        with pytest.raises(ParseError) as exc:
            load_points(write(tmp_path, "p.csv", "0,0\n1,0\n2,zap\n"))
        assert (exc.value.line, exc.value.column) == (3, 2)

    def test_tsv_and_crlf(self, tmp_path):
        ps = load_points(write(tmp_path, "p.tsv", "0\t0\r\n1\t0\r\n3\t0\r\n"))
        assert ps.n == 3

    def test_roundtrip_exact(self, tmp_path):
        ps, _ = generate(GeneratorSpec("gaussian", d=4, n=50, seed=21))
        path = tmp_path / "g.csv"
        with open(path, "w") as fh:
            write_points(ps.points, fh)
        back = load_points(str(path))
        assert np.array_equal(back.points, ps.points)


class TestLoadMatrix:
    def test_valid_square(self, tmp_path):
        dm = load_distance_matrix(
            write(tmp_path, "m.csv", "0,1,2\n1,0,3\n2,3,0\n")
        )
        assert dm.n == 3

    def test_asymmetric(self, tmp_path):
        with pytest.raises(AsymmetricMatrix):
            load_distance_matrix(write(tmp_path, "m.csv", "0,1,2\n2,0,3\n2,3,0\n"))

    def test_negative_entry(self, tmp_path):
        with pytest.raises(NegativeDistance):
            load_distance_matrix(
                write(tmp_path, "m.csv", "0,-0.5,1\n-0.5,0,1\n1,1,0\n")
            )

    def test_not_square(self, tmp_path):
        with pytest.raises(NotSquare):
            load_distance_matrix(write(tmp_path, "m.csv", "0,1,2\n1,0,3\n"))


class TestExportFit:
    def test_rows_and_flags(self, tmp_path):
        pts = [CdfPoint(0.1, 0.4), CdfPoint(0.2, 0.9), CdfPoint(0.5, math.inf)]
        path = str(tmp_path / "fit.tsv")
        export_fit(pts, [True, True, False], 2.0, path)
        x, y, kept, d_hat = load_fit(path)
        assert len(x) == 3
        assert kept.tolist() == [True, True, False]
        assert math.isinf(y[2])
        assert d_hat == 2.0
        lines = open(path).read().splitlines()
        assert lines[0].startswith("#")
        assert lines[3].endswith("\t0") and "inf" in lines[3]

    def test_roundtrip_refit_identical(self, tmp_path):
        rng = seeded(501)
        mu = MuSample(1.0 + rng.random(400) * 4)
        pts = empirical_cdf(mu)
        kept = [p.fittable for p in pts]
        slope, _ = fit_line_through_origin([p for p, k in zip(pts, kept) if k])
        path = str(tmp_path / "fit.tsv")
        export_fit(pts, kept, slope, path)
        x, y, k, d_hat = load_fit(path)
        refit, _ = fit_line_through_origin(
            [CdfPoint(a, b) for a, b, kk in zip(x, y, k) if kk]
        )
        assert refit == pytest.approx(slope, rel=1e-12)
        assert d_hat == pytest.approx(slope, rel=1e-12)


COLLINEAR_CSV = "0,0\n1,0\n3,0\n"


class TestCliEstimate:
    def test_smoke_json(self, tmp_path, capsys):
        path = write(tmp_path, "pts.csv", COLLINEAR_CSV)
        code = run_cli(["estimate", "--input", path, "--discard", "0.1"])
        out = json.loads(capsys.readouterr().out)
        assert code == 0
        assert out["n_total"] == 3
        assert math.isfinite(out["d_hat"])
        assert set(out) == {
            "d_hat",
            "method",
            "n_total",
            "n_used",
            "discard_fraction",
            "rms_residual",
        }

    def test_mle_method(self, tmp_path, capsys):
        path = write(tmp_path, "pts.csv", COLLINEAR_CSV)
        assert run_cli(["estimate", "--input", path, "--method", "mle"]) == 0
        assert json.loads(capsys.readouterr().out)["method"] == "mle"

    def test_matrix_input(self, tmp_path, capsys):
        path = write(tmp_path, "m.csv", "0,1,3\n1,0,2\n3,2,0\n")
        assert run_cli(["estimate", "--matrix", path]) == 0
        assert json.loads(capsys.readouterr().out)["n_total"] == 3

    def test_export_and_plot(self, tmp_path, capsys):
        path = write(tmp_path, "pts.csv", "\n".join(
            f"{x},{y}" for x, y in seeded(502).random((60, 2))
        ))
        fit = str(tmp_path / "fit.tsv")
        png = str(tmp_path / "fit.png")
        code = run_cli(["estimate", "--input", path, "--export-fit", fit, "--plot", png])
        assert code == 0
        x, y, kept, d_hat = load_fit(fit)
        assert len(x) == 60 and kept.sum() == 54
        assert json.loads(capsys.readouterr().out)["d_hat"] == pytest.approx(d_hat)
        assert os.path.getsize(png) > 0

    def test_usage_errors(self, tmp_path, capsys):
        path = write(tmp_path, "pts.csv", COLLINEAR_CSV)
        assert run_cli(["estimate"]) == 1
        assert run_cli(["estimate", "--input", path, "--matrix", path]) == 1
        assert run_cli(["estimate", "--input", path, "--metric", "nope"]) == 1
        assert run_cli(["estimate", "--input", path, "--metric", "precomputed"]) == 1
        assert run_cli(["nonsense"]) == 1
        err = capsys.readouterr().err
        assert "usage error" in err

    def test_data_errors_exit_2(self, tmp_path, capsys):
        assert run_cli(["estimate", "--input", str(tmp_path / "missing.csv")]) == 2
        nan_path = write(tmp_path, "bad.csv", "0,0\n1,nan\n2,0\n")
        assert run_cli(["estimate", "--input", nan_path]) == 2
        dup = write(tmp_path, "dup.csv", "0,0\n0,0\n1,1\n2,2\n")
        assert run_cli(["estimate", "--input", dup]) == 2
        assert "error" in capsys.readouterr().err

    def test_drop_duplicates_flag(self, tmp_path, capsys):
        dup = write(tmp_path, "dup.csv", "0,0\n0,0\n1,1\n3,2\n5,9\n")
        assert run_cli(["estimate", "--input", dup, "--drop-duplicates"]) == 0
        assert json.loads(capsys.readouterr().out)["n_total"] == 4

    def test_pbc_metric(self, tmp_path, capsys):
        path = write(tmp_path, "pts.csv", "0.05,0.1\n0.95,0.1\n0.5,0.9\n0.2,0.4\n")
        assert run_cli(["estimate", "--input", path, "--metric", "pbc=1,1"]) == 0
        assert run_cli(["estimate", "--input", path, "--metric", "pbc="]) == 1

    def test_threads_flag_same_result(self, tmp_path, capsys):
        path = write(tmp_path, "pts.csv", "\n".join(
            f"{x},{y},{z}" for x, y, z in seeded(503).random((40, 3))
        ))
        assert run_cli(["estimate", "--input", path]) == 0
        base = json.loads(capsys.readouterr().out)
        assert run_cli(["estimate", "--input", path, "--threads", "1"]) == 0
        single = json.loads(capsys.readouterr().out)
        assert single == base


class TestCliScan:
    def test_tsv_and_plateau(self, tmp_path, capsys):
        ps, _ = generate(GeneratorSpec("hypercube", d=2, n=600, seed=31))
        path = tmp_path / "pts.csv"
        with open(path, "w") as fh:
            write_points(ps.points, fh)
        out = str(tmp_path / "curve.tsv")
        code = run_cli(
            ["scan", "--input", str(path), "--blocks", "30,100,300,600",
             "--seed", "4", "--out", out, "--plateau", "--rel-tol", "0.3",
             "--plot", str(tmp_path / "curve.png")]
        )
        assert code == 0
        plateau = json.loads(capsys.readouterr().out)
        assert plateau["found"] is True
        lines = open(out).read().splitlines()
        assert lines[0] == "# block_size\td_mean\td_std\tn_blocks"
        assert len(lines) == 5
        assert os.path.getsize(tmp_path / "curve.png") > 0

    def test_stdout_tsv(self, tmp_path, capsys):
        path = write(tmp_path, "pts.csv", "\n".join(
            f"{x},{y}" for x, y in seeded(504).random((50, 2))
        ))
        assert run_cli(["scan", "--input", path, "--blocks", "10,25,50"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("# block_size")

    def test_auto_grid_min_block(self, tmp_path, capsys):
        path = write(tmp_path, "pts.csv", "\n".join(
            f"{x},{y}" for x, y in seeded(505).random((64, 2))
        ))
        assert run_cli(["scan", "--input", path, "--min-block", "16"]) == 0
        sizes = [int(l.split("\t")[0]) for l in capsys.readouterr().out.splitlines()[1:]]
        assert sizes == [16, 32, 64]


class TestCliGenerate:
    def test_deterministic_bytes(self, tmp_path):
        a = str(tmp_path / "a.csv")
        b = str(tmp_path / "b.csv")
        args = ["generate", "--kind", "hypersphere", "--dim", "2", "--n", "100", "--seed", "7"]
        assert run_cli(args + ["--out", a]) == 0
        assert run_cli(args + ["--out", b]) == 0
        assert open(a, "rb").read() == open(b, "rb").read()
        assert load_points(a).dim_embed == 3

    def test_stdout_write(self, capsys):
        assert run_cli(["generate", "--kind", "gaussian", "--dim", "2", "--n", "5"]) == 0
        assert len(capsys.readouterr().out.splitlines()) == 5

    def test_invalid_combination_exit_2(self, capsys):
        assert run_cli(["generate", "--kind", "gaussian", "--dim", "2", "--n", "5", "--pbc"]) == 2


class TestCliBenchmark:
    def test_fig1_small(self, tmp_path, capsys):
        outdir = str(tmp_path / "bench")
        code = run_cli(["benchmark", "fig1", "--seed", "1", "--n", "300", "--outdir", outdir])
        assert code == 0
        summary = json.loads(capsys.readouterr().out)
        assert set(summary) >= {"hypercube_d14_pbc", "swiss_roll", "cauchy_d20"}
        for stem in ("fig1_hypercube", "fig1_swiss_roll", "fig1_cauchy"):
            assert os.path.getsize(os.path.join(outdir, stem + "_fit.tsv")) > 0
            assert os.path.getsize(os.path.join(outdir, stem + "_fit.png")) > 0
        x, y, kept, d_hat = load_fit(os.path.join(outdir, "fig1_hypercube_fit.tsv"))
        assert len(x) == 300 and d_hat == pytest.approx(summary["hypercube_d14_pbc"])

    def test_fig1_full_size_bands(self, tmp_path, capsys):
        outdir = str(tmp_path / "bench_full")
        assert run_cli(["benchmark", "fig1", "--seed", "1", "--outdir", outdir]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert 13.3 <= summary["hypercube_d14_pbc"] <= 14.7
        assert 1.85 <= summary["swiss_roll"] <= 2.15
        assert 18.0 <= summary["cauchy_d20"] <= 26.0
        for stem in ("fig1_hypercube", "fig1_swiss_roll", "fig1_cauchy"):
            x, y, kept, d_hat = load_fit(os.path.join(outdir, stem + "_fit.tsv"))
            assert len(x) == 2500 and kept.sum() == 2250

    def test_fig2_small(self, tmp_path, capsys):
        outdir = str(tmp_path / "bench2")
        code = run_cli(
            ["benchmark", "fig2", "--seed", "1", "--outdir", outdir,
             "--dims", "2", "--sizes", "50,200", "--instances", "3"]
        )
        assert code == 0
        tsv = os.path.join(outdir, "fig2_hypercube_pbc.tsv")
        rows = [l.split("\t") for l in open(tsv).read().splitlines()[1:]]
        assert len(rows) == 2
        assert os.path.getsize(os.path.join(outdir, "fig2_hypercube_pbc.png")) > 0

    def test_fig3_small(self, tmp_path, capsys):
        outdir = str(tmp_path / "bench3")
        code = run_cli(
            ["benchmark", "fig3", "--seed", "2", "--outdir", outdir,
             "--n", "2000", "--kinds", "noisy_plane", "--sigmas", "0"]
        )
        assert code == 0
        summary = json.loads(capsys.readouterr().out)
        assert "noisy_plane" in summary["curves"]
        assert os.path.getsize(os.path.join(outdir, "fig3_noisy_plane_sigma0.tsv")) > 0
