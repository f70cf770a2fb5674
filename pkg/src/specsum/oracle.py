"""Brute-force verification on finite block-diagonal truncations.

Everything here is dense linear algebra on explicit matrices: it shares no
code path with the engine it checks beyond the model truncations
themselves.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, TextIO

import numpy as np

from .counting import merged_counting
from .engine import assemble_resolvent_truncation
from .family import OperatorFamily
from .models import FiniteMatrixOperator
from .spectrum import (
    DEFAULT_TOLERANCE,
    InSpectrumError,
    PointLike,
    SpecsumError,
    SpectralComputationError,
    Tolerance,
    as_complex,
)

__all__ = [
    "DIMENSION_CAP",
    "SUITES",
    "FiniteTruncation",
    "TruncationReport",
    "OracleMismatchError",
    "block_diag",
    "brute_spectrum",
    "brute_resolvent_norm",
    "match_multisets",
    "truncate_family",
    "random_matrix_family",
    "verify_family",
    "assert_reports",
    "write_reports_csv",
    "REPORT_COLUMNS",
]

DIMENSION_CAP = 2000
SUITES = ("norm", "union", "resolvent", "counting")
REPORT_COLUMNS = ("property", "m", "N", "engine_value", "oracle_value", "discrepancy", "pass", "seed")


class OracleMismatchError(SpecsumError):
    """An engine value disagrees with its brute-force oracle beyond tolerance."""


def block_diag(blocks: Sequence[np.ndarray]) -> np.ndarray:
    """Place square blocks on the diagonal of a zero matrix."""
    if not blocks:
        raise ValueError("need at least one block")
    mats = [np.asarray(b, dtype=complex) for b in blocks]
    for i, b in enumerate(mats, 1):
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise ValueError(f"block {i} is not square: shape {b.shape}")
    dim = sum(b.shape[0] for b in mats)
    out = np.zeros((dim, dim), dtype=complex)
    pos = 0
    for b in mats:
        k = b.shape[0]
        out[pos : pos + k, pos : pos + k] = b
        pos += k
    return out


def _order(z: complex) -> tuple:
    # roundoff of either sign in a vanishing part must not reorder values
    return (round(z.real, 10), round(z.imag, 10))


def _check_cap(matrix: np.ndarray, cap: int) -> None:
    if matrix.shape[0] > cap:
        raise ValueError(f"dimension {matrix.shape[0]} exceeds the oracle cap {cap}")


def brute_spectrum(matrix: np.ndarray, cap: int = DIMENSION_CAP) -> list[complex]:
    """All eigenvalues with multiplicity, sorted by ``(re, im)``."""
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    _check_cap(a, cap)
    try:
        ev = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise SpectralComputationError(f"eigensolver did not converge: {exc}") from exc
    return sorted((complex(z) for z in ev), key=_order)


def brute_resolvent_norm(
    matrix: np.ndarray, lam: PointLike, eps_membership: float = 1e-9, cap: int = DIMENSION_CAP
) -> float:
    """``1 / sigma_min(matrix - lam I)``."""
    a = np.asarray(matrix, dtype=complex)
    _check_cap(a, cap)
    lam = as_complex(lam)
    ev = brute_spectrum(a, cap)
    if min(abs(z - lam) for z in ev) <= eps_membership:
        raise InSpectrumError(f"lambda={lam} is within {eps_membership} of an eigenvalue")
    try:
        s = np.linalg.svd(a - lam * np.eye(a.shape[0]), compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise SpectralComputationError(f"SVD did not converge: {exc}") from exc
    return float(1.0 / s[-1])


def match_multisets(engine: Sequence[complex], oracle: Sequence[complex], eps: float) -> tuple[int, float]:
    """Greedy nearest matching of two eigenvalue multisets.

    Engine values are taken in ``(re, im)`` order; each claims the nearest
    unclaimed oracle value, ties going to the lexicographically smaller one.
    Returns ``(mismatches, worst matched distance)``; unequal sizes count the
    surplus as mismatches.
    """
    eng = sorted((complex(z) for z in engine), key=_order)
    orc = sorted((complex(z) for z in oracle), key=_order)
    pool = np.array(orc, dtype=complex)
    free = np.ones(len(orc), dtype=bool)
    mismatches = abs(len(eng) - len(orc))
    worst = 0.0
    for z in eng:
        if not free.any():
            break
        d = np.where(free, np.abs(pool - z), np.inf)
        j = int(np.argmin(d))  # first minimum = lexicographically smallest
        if d[j] <= eps:
            free[j] = False
            worst = max(worst, float(d[j]))
        else:
            mismatches += 1
    return mismatches, worst


@dataclass(frozen=True, eq=False)
class FiniteTruncation:
    """Finite stand-in for ``(+)_n H_n``: blocks ``A_n^(N)`` and their assembly."""

    blocks: tuple
    assembled: np.ndarray
    dims: tuple

    @classmethod
    def of(cls, blocks: Sequence[np.ndarray]) -> "FiniteTruncation":
        mats = tuple(np.asarray(b, dtype=complex) for b in blocks)
        return cls(mats, block_diag(mats), tuple(b.shape[0] for b in mats))

    @property
    def dimension(self) -> int:
        return self.assembled.shape[0]


def truncate_family(family: OperatorFamily, m: int, size: int, cap: int = DIMENSION_CAP) -> FiniteTruncation:
    if m < 1:
        raise ValueError("need at least one block")
    tr = FiniteTruncation.of([op.truncate(size) for _, op in family.coordinates(m)])
    _check_cap(tr.assembled, cap)
    return tr


def random_matrix_family(
    seed: int, blocks: tuple[int, int] = (2, 8), sizes: tuple[int, int] = (1, 6)
) -> OperatorFamily:
    """Seeded finite family of dense matrices with entries in ``[-1,1] + i[-1,1]``."""
    rng = np.random.default_rng(seed)
    count = int(rng.integers(blocks[0], blocks[1] + 1))
    ops = []
    for _ in range(count):
        d = int(rng.integers(sizes[0], sizes[1] + 1))
        a = rng.uniform(-1, 1, (d, d)) + 1j * rng.uniform(-1, 1, (d, d))
        ops.append(FiniteMatrixOperator(a))
    return OperatorFamily.finite(*ops, label=f"random(seed={seed})")


@dataclass(frozen=True)
class TruncationReport:
    checked_property: str
    engine_value: object
    oracle_value: object
    discrepancy: float
    tolerance: float
    m: int
    N: int
    seed: Optional[int] = None
    detail: str = field(default="", compare=False)

    @property
    def passed(self) -> bool:
        return self.discrepancy <= self.tolerance


def _norm_report(family, tr, m, size, seed, tol_norm):
    engine = 0.0
    for (_, op), block in zip(family.coordinates(m), tr.blocks):
        complete = op.dimension is not None and op.dimension <= size
        engine = max(engine, op.operator_norm() if complete else float(np.linalg.norm(block, 2)))
    oracle = float(np.linalg.svd(tr.assembled, compute_uv=False)[0])
    return TruncationReport("norm", engine, oracle, abs(engine - oracle), tol_norm, m, size, seed)


def _union_report(family, tr, m, size, seed, eps):
    engine = []
    for _, op in family.coordinates(m):
        engine.extend(op.truncation_eigenvalues(size))
    oracle = brute_spectrum(tr.assembled)
    mismatches, worst = match_multisets(engine, oracle, eps)
    disc = math.inf if mismatches else worst
    return TruncationReport(
        "union", len(engine), len(oracle), disc, eps, m, size, seed, detail=f"mismatches={mismatches}"
    )


def _resolvent_report(family, tr, m, size, seed, lam, tol, tol_identity):
    k = assemble_resolvent_truncation(family, lam, m, size, tol).assembled
    shifted = tr.assembled - lam * np.eye(tr.dimension)
    eye = np.eye(tr.dimension)
    left = float(np.linalg.norm(k @ shifted - eye, 2))
    right = float(np.linalg.norm(shifted @ k - eye, 2))
    return TruncationReport("resolvent", left, right, max(left, right), tol_identity, m, size, seed)


def counting_grid(family: OperatorFamily, m: int, size: int, points: int = 12) -> list[float]:
    """Thresholds where an ``m``-block truncation sees every eigenvalue below them."""
    horizon = min(op.truncation_horizon(size) for _, op in family.coordinates(m))
    moduli = []
    for _, op in family.coordinates(m):
        moduli.extend(abs(z) for z in op.truncation_eigenvalues(size))
    positive = [v for v in moduli if v > 0]
    if not positive:
        return [0.0]
    lo = min(positive) / 2
    hi = horizon * (1 - 1e-9) if math.isfinite(horizon) else max(moduli) * 1.5
    if hi <= lo:
        return [0.0]
    return [0.0] + [float(v) for v in np.geomspace(lo, hi, points)]


def _counting_report(family, tr, m, size, seed, tol):
    head = family.head(m)
    grid = counting_grid(family, m, size)
    moduli = np.abs(np.asarray(brute_spectrum(tr.assembled)))
    engine = [merged_counting(head, lam, tol).count for lam in grid]
    oracle = [int(np.count_nonzero(moduli <= lam)) for lam in grid]
    disc = float(max(abs(a - b) for a, b in zip(engine, oracle)))
    return TruncationReport(
        "counting", ";".join(map(str, engine)), ";".join(map(str, oracle)), disc, 0.0, m, size, seed
    )


def verify_family(
    family: OperatorFamily,
    suite: Iterable[str] | str = "all",
    m: int = 3,
    size: int = 20,
    tol: Tolerance = DEFAULT_TOLERANCE,
    lam: PointLike = -1.0,
    seed: Optional[int] = None,
    tol_norm: float = 1e-10,
    eps_union: float = 1e-8,
    tol_identity: float = 1e-8,
) -> list[TruncationReport]:
    """Run the selected oracle comparisons on an ``m``-block, size-``N`` truncation.

    ``norm``: largest block norm against the SVD of the assembled matrix.
    ``union``: block eigenvalues against the assembled spectrum.
    ``resolvent``: ``K (A - lam) = I = (A - lam) K`` on the truncation.
    ``counting``: merged counts against brute counts below the truncation horizon.
    """
    selected = SUITES if suite == "all" else ((suite,) if isinstance(suite, str) else tuple(suite))
    unknown = set(selected) - set(SUITES)
    if unknown:
        raise ValueError(f"unknown verification suite(s): {sorted(unknown)}")
    if family.is_finite:
        m = min(m, family.prefix_length)
    tr = truncate_family(family, m, size)
    lam = as_complex(lam)
    reports = []
    for name in SUITES:
        if name not in selected:
            continue
        if name == "norm":
            reports.append(_norm_report(family, tr, m, size, seed, tol_norm))
        elif name == "union":
            reports.append(_union_report(family, tr, m, size, seed, eps_union))
        elif name == "resolvent":
            reports.append(_resolvent_report(family, tr, m, size, seed, lam, tol, tol_identity))
        else:
            reports.append(_counting_report(family, tr, m, size, seed, tol))
    return reports


def assert_reports(reports: Iterable[TruncationReport]) -> None:
    """Raise on the first failing report; oracle disagreements are never clamped."""
    for r in reports:
        if not r.passed:
            raise OracleMismatchError(
                f"{r.checked_property}: engine={r.engine_value} oracle={r.oracle_value} "
                f"discrepancy={r.discrepancy} > {r.tolerance} {r.detail}".rstrip()
            )


def format_number(value) -> str:
    """17 significant digits, '.' separator, no locale."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    return str(value)


def write_reports_csv(reports: Iterable[TruncationReport], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for r in reports:
        writer.writerow(
            [
                r.checked_property,
                r.m,
                r.N,
                format_number(r.engine_value),
                format_number(r.oracle_value),
                format_number(r.discrepancy),
                format_number(r.passed),
                "" if r.seed is None else r.seed,
            ]
        )
