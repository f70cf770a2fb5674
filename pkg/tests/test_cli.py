import csv
import io
import json
import math
from pathlib import Path

import pytest

from specsum.cli import (
    EXIT_CONFIG,
    EXIT_INCONCLUSIVE,
    EXIT_IO,
    EXIT_OK,
    EXIT_UNSUPPORTED,
    EXIT_VERIFY_FAILED,
    main,
    parse_lambda_grid,
)

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
GOLDEN = Path(__file__).resolve().parent / "golden"


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], stdout=out)
    return code, out.getvalue()


def table(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.DictReader(lines))


class TestClassify:
    def test_lattice_point(self):
        code, out = run("classify", CONFIGS / "multipoint.yaml", "--point", "0,6.283185307")
        assert code == EXIT_OK
        assert out.splitlines()[0] == "PointSpectrum (witness 1)"
        (row,) = table("\n".join(out.splitlines()[1:]))
        assert row["class"] == "PointSpectrum" and row["witness"] == "1"

    def test_diagonal_resolvent(self):
        code, out = run("classify", CONFIGS / "diagonal_linear.yaml", "--point", "2.5,0")
        assert code == EXIT_OK
        assert out.splitlines()[0] == "Resolvent, sup=2.0"

    def test_residual(self):
        code, out = run("classify", CONFIGS / "shift_diagonal.yaml", "--point", "0,0")
        assert code == EXIT_OK
        assert out.splitlines()[0].startswith("ResidualSpectrum")

    def test_negative_point(self):
        code, out = run("classify", CONFIGS / "multipoint.yaml", "--point=-1,0")
        assert code == EXIT_OK and out.startswith("Resolvent")

    def test_inconclusive_exit(self, tmp_config):
        cfg = tmp_config(
            "operators: [{kind: matrix, entries: [[1]]}]\n"
            "tail:\n  kind: parametric\n  max_scan: 3\n"
            "  generator: {kind: matrix, entries: [[{per_n: {power: -1}}]]}\n"
        )
        code, out = run("classify", cfg, "--point", "0,0")
        assert code == EXIT_INCONCLUSIVE
        assert out.startswith("Inconclusive")

    def test_config_error_lists_path(self, tmp_config, capsys):
        cfg = tmp_config("operators:\n  - kind: ode\n")
        code, _ = run("classify", cfg, "--point", "0,0")
        assert code == EXIT_CONFIG
        assert "operators.0.ode.s" in capsys.readouterr().err

    def test_bad_point_is_usage_error(self):
        code, _ = run("classify", CONFIGS / "multipoint.yaml", "--point", "1")
        assert code == EXIT_CONFIG

    def test_missing_config_is_io(self, tmp_path):
        code, _ = run("classify", tmp_path / "none.yaml", "--point", "0,0")
        assert code == EXIT_IO


class TestScan:
    def test_single_node_matches_classify(self):
        _, scan_out = run("scan", CONFIGS / "multipoint.yaml", "--region", "-1,1,5.283185307179586,7.283185307179586", "--grid", "1,1")
        _, cls_out = run("classify", CONFIGS / "multipoint.yaml", "--point", "0,6.283185307179586")
        assert table(scan_out) == table("\n".join(cls_out.splitlines()[1:]))

    def test_lattice_grid(self, tmp_path):
        out = tmp_path / "scan.csv"
        code, _ = run("scan", CONFIGS / "multipoint.yaml", "--region=-1,8,-8,8", "--grid", "21,21", "--out", out)
        assert code == EXIT_OK
        rows = table(out.read_text())
        assert len(rows) == 441
        for r in rows:
            re, im = float(r["re"]), float(r["im"])
            k = round(im / (2 * math.pi))
            on_lattice = abs(re) <= 1e-9 and abs(im - 2 * math.pi * k) <= 1e-9
            assert r["class"] == ("PointSpectrum" if on_lattice else "Resolvent")
        # row-major: imaginary part outer, real part inner
        assert [float(r["re"]) for r in rows[:2]] == [-1.0, -0.55]
        assert float(rows[21]["im"]) > float(rows[0]["im"])

    def test_lattice_nodes_on_aligned_grid(self):
        _, out = run("scan", CONFIGS / "multipoint.yaml", "--region", f"-1,1,{-2 * math.pi},{2 * math.pi}", "--grid", "3,5")
        classes = [r["class"] for r in table(out)]
        assert classes.count("PointSpectrum") == 3

    def test_reciprocal_zero_cell(self):
        _, out = run("scan", CONFIGS / "reciprocal.yaml", "--region=-1,0,-1,0", "--grid", "2,2")
        rows = table(out)
        assert rows[-1]["re"] == "0" and rows[-1]["im"] == "0"
        assert rows[-1]["class"] == "ContinuousSpectrum"

    def test_golden_bytes(self, tmp_path):
        outs = []
        for i in range(2):
            path = tmp_path / f"run{i}.csv"
            run("scan", CONFIGS / "multipoint.yaml", "--region=-1,8,-8,8", "--grid", "21,21", "--out", path)
            outs.append(path.read_bytes())
        assert outs[0] == outs[1] == (GOLDEN / "scan_multipoint_21x21.csv").read_bytes()

    def test_manifest_sidecar(self, tmp_path):
        path = tmp_path / "scan.csv"
        run("scan", CONFIGS / "multipoint.yaml", "--region=-1,1,-1,1", "--grid", "2,2", "--out", path)
        manifest = json.loads(Path(str(path) + ".manifest.json").read_text())
        first = path.read_text().splitlines()[0]
        assert first == f"# manifest={manifest['manifest_hash']}"
        assert manifest["command"] == "scan" and manifest["outputs"] == [str(path.resolve())]
        assert {"config_hash", "seed", "engine_version", "wall_clock"} <= set(manifest)

    def test_unwritable_output(self, tmp_path):
        code, _ = run("scan", CONFIGS / "multipoint.yaml", "--region=-1,1,-1,1", "--grid", "2,2", "--out", tmp_path / "no" / "x.csv")
        assert code == EXIT_IO

    def test_empty_region(self):
        code, _ = run("scan", CONFIGS / "multipoint.yaml", "--region", "1,1,0,1", "--grid", "2,2")
        assert code == EXIT_CONFIG


class TestCounting:
    def test_squares(self):
        code, out = run("counting", CONFIGS / "squares.yaml", "--lambda-grid", "1,10,100")
        assert code == EXIT_OK
        assert [(r["lambda"], r["count"]) for r in table(out)] == [("1", "1"), ("10", "3"), ("100", "10")]

    def test_zero_row(self):
        _, out = run("counting", CONFIGS / "squares.yaml", "--lambda-grid", "0")
        assert table(out)[0]["count"] == "0"

    def test_pi_family(self):
        _, out = run("counting", CONFIGS / "pi_two.yaml", "--lambda-grid", "40")
        (row,) = table(out)
        assert row["count"] == "5" and row["overlap_flag"] == "false"

    def test_geometric_grid(self):
        _, out = run("counting", CONFIGS / "squares.yaml", "--lambda-grid", "1:100:3")
        assert [r["count"] for r in table(out)] == ["1", "3", "10"]

    def test_unsupported_model(self):
        code, _ = run("counting", CONFIGS / "shift_diagonal.yaml", "--lambda-grid", "1")
        assert code == EXIT_UNSUPPORTED

    def test_grid_parser(self):
        assert parse_lambda_grid("1:100:3") == pytest.approx([1, 10, 100])
        assert parse_lambda_grid("3,1") == [1, 3]


class TestFit:
    def test_exact_power_law(self, tmp_config, tmp_path):
        cfg = tmp_config("operators:\n  - kind: diagonal\n    entries: {k: 3, alpha: 2}\n")
        out = tmp_path / "fit.csv"
        code, text = run("fit", cfg, "--count", 40, "--out", out)
        assert code == EXIT_OK
        fields = dict(kv.split("=") for kv in text.splitlines()[0].split())
        assert float(fields["alpha_hat"]) == pytest.approx(2, abs=1e-10)
        assert float(fields["gamma_hat"]) == pytest.approx(3, abs=1e-10)
        rows = table(out.read_text())
        assert len(rows) == 40 and set(rows[0]) == {"n", "lambda_n", "fitted"}

    def test_pi_family(self):
        code, text = run("fit", CONFIGS / "pi_five.yaml")
        fields = dict(kv.split("=") for kv in text.splitlines()[0].split())
        assert abs(float(fields["alpha_hat"]) - 2) / 2 < 0.05
        assert fields["fit_range"] == "101..200"

    def test_full_range_bound(self):
        _, text = run("fit", CONFIGS / "pi_five.yaml", "--fit-range", "1,200")
        assert text.splitlines()[1].endswith("holds")

    def test_too_few_eigenvalues(self, tmp_config):
        cfg = tmp_config("operators:\n  - kind: diagonal\n    entries: {values: [1, 2, 3]}\n")
        code, _ = run("fit", cfg)
        assert code == EXIT_UNSUPPORTED


class TestVerify:
    def test_random_norm(self, tmp_path):
        out = tmp_path / "v.csv"
        code, _ = run("verify", CONFIGS / "random_blocks.yaml", "--suite", "norm", "--blocks", 5, "--out", out)
        assert code == EXIT_OK
        (row,) = table(out.read_text())
        assert row["pass"] == "true" and row["m"] == "5" and row["seed"] == "2024"

    def test_union(self):
        code, out = run("verify", CONFIGS / "multipoint_diagonal.yaml", "--suite", "union")
        assert code == EXIT_OK and table(out)[0]["pass"] == "true"

    def test_resolvent_default_point(self):
        code, out = run("verify", CONFIGS / "ode.yaml", "--suite", "resolvent")
        (row,) = table(out)
        assert code == EXIT_OK and float(row["discrepancy"]) <= 1e-8

    def test_failure_exit(self, tmp_config):
        cfg = tmp_config("operators:\n  - kind: matrix\n    entries: [[-1]]\n")
        code, _ = run("verify", cfg, "--suite", "resolvent")
        assert code == EXIT_VERIFY_FAILED

    def test_seed_override(self, monkeypatch):
        _, a = run("verify", CONFIGS / "random_blocks.yaml", "--suite", "norm")
        monkeypatch.setenv("SPECSUM_SEED", "7")
        _, b = run("verify", CONFIGS / "random_blocks.yaml", "--suite", "norm")
        assert table(b)[0]["seed"] == "7"
        assert table(a)[0]["engine_value"] != table(b)[0]["engine_value"]

    def test_deterministic_bytes(self):
        assert run("verify", CONFIGS / "random_blocks.yaml")[1] == run("verify", CONFIGS / "random_blocks.yaml")[1]
