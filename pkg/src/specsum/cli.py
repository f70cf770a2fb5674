"""Command-line front end.

Exit codes: 0 settled / pass, 1 verification failure, 2 config error,
3 inconclusive verdict, 4 I/O error, 5 unsupported model.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import time
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .classify import DirectSumClassification, classify_direct_sum_point, spectral_scan
from .config import ConfigError, FamilyConfig, build_family, config_hash, load_config
from .counting import counting_table, fit_asymptotic_exponent, smallest_eigenvalues, verify_eigenvalue_bound
from .oracle import SUITES, format_number, verify_family, write_reports_csv
from .spectrum import (
    SingularBlockError,
    SpecsumError,
    SpectralClass,
    SupKind,
    SupResult,
    TailCertificationError,
    UnsupportedModelError,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_INCONCLUSIVE = 3
EXIT_IO = 4
EXIT_UNSUPPORTED = 5

SEED_ENV = "SPECSUM_SEED"
SCAN_COLUMNS = ("re", "im", "class", "witness", "resolvent_sup")


class UsageError(Exception):
    pass


def _floats(text: str, count: int, what: str) -> list[float]:
    parts = text.split(",")
    if len(parts) != count:
        raise UsageError(f"{what} needs {count} comma-separated numbers, got {text!r}")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise UsageError(f"{what}: cannot parse {text!r}") from None
    if not all(math.isfinite(v) for v in values):
        raise UsageError(f"{what} must be finite")
    return values


def parse_lambda_grid(text: str) -> list[float]:
    """``START:STOP:NUM`` (geometric, START > 0) or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"lambda grid {text!r} is not START:STOP:NUM")
        try:
            start, stop, num = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise UsageError(f"cannot parse lambda grid {text!r}") from None
        if not (0 < start <= stop and num >= 1):
            raise UsageError("geometric grid needs 0 < START <= STOP and NUM >= 1")
        return [float(v) for v in np.geomspace(start, stop, num)]
    try:
        values = sorted(float(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"cannot parse lambda list {text!r}") from None
    if any(v < 0 or not math.isfinite(v) for v in values):
        raise UsageError("lambda values must be finite and >= 0")
    return values


def format_sup(sup: SupResult) -> str:
    if sup.kind is SupKind.INFINITE:
        return "inf"
    if sup.kind is SupKind.FINITE:
        return format_number(sup.value)
    return ">=" + format_number(sup.value)


def _scan_row(c: DirectSumClassification) -> list[str]:
    return [
        format_number(c.point.re),
        format_number(c.point.im),
        c.spectral_class.value,
        "" if c.witness_index is None else str(c.witness_index),
        format_sup(c.resolvent_sup),
    ]


class Run:
    """Collects the deterministic manifest fields of one command."""

    def __init__(self, command: str, cfg: FamilyConfig, seed: int, params: dict, out: Optional[str]):
        self.command = command
        self.cfg = cfg
        self.seed = seed
        self.params = params
        self.out = out
        self.config_hash = config_hash(cfg)

    @property
    def manifest_hash(self) -> str:
        # output paths and wall-clock stay out so reruns elsewhere hash alike
        body = {
            "command": self.command,
            "config_hash": self.config_hash,
            "seed": self.seed,
            "params": self.params,
            "engine_version": __version__,
        }
        text = json.dumps(body, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()

    def manifest(self) -> dict:
        return {
            "command": self.command,
            "config_hash": self.config_hash,
            "seed": self.seed,
            "params": self.params,
            "outputs": [os.path.abspath(self.out)] if self.out else [],
            "engine_version": __version__,
            "wall_clock": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
            "manifest_hash": self.manifest_hash,
        }

    def emit(self, header: Sequence[str], rows: Sequence[Sequence[str]], stdout) -> None:
        buf = io.StringIO()
        buf.write(f"# manifest={self.manifest_hash}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        self._write(buf.getvalue(), stdout)

    def emit_text(self, text: str, stdout) -> None:
        self._write(f"# manifest={self.manifest_hash}\n" + text, stdout)

    def _write(self, text: str, stdout) -> None:
        if not self.out:
            stdout.write(text)
            return
        with open(self.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        with open(self.out + ".manifest.json", "w", encoding="utf-8") as fh:
            json.dump(self.manifest(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _resolve_seed(cfg: FamilyConfig) -> int:
    env = os.environ.get(SEED_ENV)
    if env is None or env == "":
        return cfg.seed
    try:
        return int(env)
    except ValueError:
        raise ConfigError([(SEED_ENV, f"not an integer: {env!r}")]) from None


def cmd_classify(args, cfg, family, seed, stdout) -> int:
    re_, im = _floats(args.point, 2, "--point")
    c = classify_direct_sum_point(complex(re_, im), family, cfg.tolerance)
    run = Run("classify", cfg, seed, {"point": [re_, im]}, args.out)
    stdout.write(c.verdict() + "\n")
    run.emit(SCAN_COLUMNS, [_scan_row(c)], stdout)
    return EXIT_INCONCLUSIVE if c.spectral_class is SpectralClass.INCONCLUSIVE else EXIT_OK


def cmd_scan(args, cfg, family, seed, stdout) -> int:
    region = _floats(args.region, 4, "--region")
    grid = [int(v) for v in _floats(args.grid, 2, "--grid")]
    try:
        rows = spectral_scan(region, grid, family, cfg.tolerance, workers=cfg.defaults.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    run = Run("scan", cfg, seed, {"region": region, "grid": grid}, args.out)
    flat = [c for row in rows for c in row]
    run.emit(SCAN_COLUMNS, [_scan_row(c) for c in flat], stdout)
    inconclusive = sum(c.spectral_class is SpectralClass.INCONCLUSIVE for c in flat)
    if inconclusive:
        print(f"{inconclusive} of {len(flat)} nodes inconclusive", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_counting(args, cfg, family, seed, stdout) -> int:
    grid = parse_lambda_grid(args.lambda_grid)
    table = counting_table(family, grid, cfg.tolerance)
    run = Run("counting", cfg, seed, {"lambda_grid": grid}, args.out)
    rows = [
        [format_number(t), str(n), format_number(o)]
        for t, n, o in zip(table.thresholds, table.counts, table.overlaps)
    ]
    run.emit(("lambda", "count", "overlap_flag"), rows, stdout)
    if any(table.overlaps):
        print("warning: coordinate spectra overlap; counts include coincident eigenvalues", file=sys.stderr)
    return EXIT_OK


def cmd_fit(args, cfg, family, seed, stdout) -> int:
    d = cfg.defaults
    count = args.count or d.fit_count
    moduli = smallest_eigenvalues(family, count)
    fit_range = d.fit_range
    if args.fit_range:
        lo, hi = _floats(args.fit_range, 2, "--fit-range")
        fit_range = (int(lo), int(hi))
    fit = fit_asymptotic_exponent(moduli, fit_range)
    slack = d.slack if args.slack is None else args.slack
    n_min = d.n_min if args.n_min is None else args.n_min
    check = verify_eigenvalue_bound(moduli, fit.gamma_hat * (1 + slack), fit.alpha_hat, n_min)
    params = {"count": count, "fit_range": list(fit.fit_range), "slack": slack, "n_min": n_min}
    run = Run("fit", cfg, seed, params, args.out)
    lo, hi = fit.fit_range
    summary = (
        f"gamma_hat={format_number(fit.gamma_hat)} alpha_hat={format_number(fit.alpha_hat)} "
        f"residual={format_number(fit.residual)} fit_range={lo}..{hi}"
    )
    bound = f"bound (1+{slack:g})*gamma_hat*n^alpha_hat for n >= {n_min}: "
    bound += "holds" if check.holds else f"fails at n={check.first_violation}"
    stdout.write(summary + "\n" + bound + "\n")
    n = np.arange(1, moduli.size + 1)
    fitted = fit.predict(n)
    rows = [[str(int(i)), format_number(x), format_number(y)] for i, x, y in zip(n, moduli, fitted)]
    run.emit(("n", "lambda_n", "fitted"), rows, stdout if args.out else io.StringIO())
    return EXIT_OK


def cmd_verify(args, cfg, family, seed, stdout) -> int:
    d = cfg.defaults
    m = args.blocks or d.blocks
    size = args.size or d.size
    lam = complex(*_floats(args.point, 2, "--point")) if args.point else d.candidate_lambda
    reports = verify_family(family, args.suite, m, size, cfg.tolerance, lam, seed)
    params = {"suite": args.suite, "blocks": m, "size": size, "lambda": [lam.real, lam.imag]}
    run = Run("verify", cfg, seed, params, args.out)
    buf = io.StringIO()
    write_reports_csv(reports, buf)
    run.emit_text(buf.getvalue(), stdout)
    failed = [r for r in reports if not r.passed]
    for r in failed:
        print(f"FAIL {r.checked_property}: discrepancy {r.discrepancy!r} > {r.tolerance!r} {r.detail}", file=sys.stderr)
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specsum",
        description="Spectral classification and eigenvalue counting for direct sums of operators.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, helptext):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("config", help="YAML family description")
        p.add_argument("--out", help="CSV output path (a .manifest.json sidecar is written next to it)")
        return p

    p = add("classify", "classify one point of the complex plane")
    p.add_argument("--point", required=True, help="re,im")

    p = add("scan", "classify every node of a rectangular grid")
    p.add_argument("--region", required=True, help="re0,re1,im0,im1")
    p.add_argument("--grid", required=True, help="n_re,n_im")

    p = add("counting", "tabulate the eigenvalue counting function")
    p.add_argument("--lambda-grid", required=True, help="START:STOP:NUM (geometric) or a comma-separated list")

    p = add("fit", "fit lambda_n ~ gamma n^alpha to the merged eigenvalues")
    p.add_argument("--count", type=int, help="number of eigenvalues to merge (default from config)")
    p.add_argument("--fit-range", help="inclusive 1-based index range lo,hi (default: top half)")
    p.add_argument("--slack", type=float, help="relative slack on the fitted gamma for the bound check")
    p.add_argument("--n-min", type=int, help="first index at which the bound is checked")

    p = add("verify", "compare the engine with brute force on a finite truncation")
    p.add_argument("--suite", default="all", choices=("all",) + SUITES)
    p.add_argument("--blocks", type=int, help="number of coordinates m")
    p.add_argument("--size", type=int, help="truncation size N per coordinate")
    p.add_argument("--point", help="resolvent point re,im (default from config)")
    return parser


VALUE_OPTIONS = ("--point", "--region", "--grid", "--fit-range", "--lambda-grid")


def _attach_negative_values(argv: Sequence[str]) -> list[str]:
    """Turn ``--point -1,0`` into ``--point=-1,0`` so argparse does not read a flag."""
    out, i = [], 0
    while i < len(argv):
        arg = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if arg in VALUE_OPTIONS and nxt is not None and nxt[:1] == "-" and (nxt[1:2].isdigit() or nxt[1:2] == "."):
            out.append(f"{arg}={nxt}")
            i += 2
        else:
            out.append(arg)
            i += 1
    return out


COMMANDS = {
    "classify": cmd_classify,
    "scan": cmd_scan,
    "counting": cmd_counting,
    "fit": cmd_fit,
    "verify": cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(_attach_negative_values(list(sys.argv[1:] if argv is None else argv)))
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_CONFIG
    try:
        cfg = load_config(args.config)
        seed = _resolve_seed(cfg)
        family = build_family(cfg, seed)
        return COMMANDS[args.command](args, cfg, family, seed, stdout)
    except ConfigError as exc:
        print("config error:", file=sys.stderr)
        for path, msg in exc.errors:
            print(f"  {path}: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UnsupportedModelError, TailCertificationError) as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except SingularBlockError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    except ValueError as exc:
        # e.g. too few eigenvalues for a fit, or a region the scan rejects
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except SpecsumError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED


if __name__ == "__main__":
    sys.exit(main())
