"""Eigenvalue counting functions and power-law growth of eigenvalues.

``N(T; lam)`` counts eigenvalues of ``T`` with modulus ``<= lam`` (with
multiplicity).  For a direct sum whose coordinate spectra are disjoint the
counts add up.  If ``lam_m(A_n) ~ c_n m^alpha_n`` then

    N(A; lam) / lam^(1/alpha) <= sum_n c_n^(-1/alpha_n) lam^(1/alpha_n - 1/alpha),

with ``alpha = inf_n alpha_n``, which yields ``lam_n(A) <= gamma n^alpha``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .family import LimitKind, OperatorFamily
from .models import CoordinateOperator
from .spectrum import DEFAULT_TOLERANCE, TailCertificationError, Tolerance

__all__ = [
    "CountingTable",
    "MergedCount",
    "SeriesTail",
    "AsymptoticBoundSpec",
    "AsymptoticFit",
    "BoundCheck",
    "counting_function",
    "merged_eigenvalues",
    "merged_counting",
    "counting_table",
    "smallest_eigenvalues",
    "counting_bound",
    "normalized_counting_bound",
    "fit_asymptotic_exponent",
    "verify_eigenvalue_bound",
]


def counting_function(op: CoordinateOperator, lam: float) -> int:
    """``N(op; lam)``; raises ``UnsupportedModelError`` for non-enumerable models."""
    if not lam >= 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    return len(op.eigenvalues_up_to(lam))


def merged_eigenvalues(family: OperatorFamily, bound: float) -> list[tuple[int, complex]]:
    """All ``(n, eigenvalue)`` pairs with modulus ``<= bound`` across the family.

    Tail coordinates are enumerated until the first eigenvalue, declared to
    increase without bound, passes ``bound``.
    """
    out = []
    for n, op in enumerate(family.prefix, 1):
        out.extend((n, z) for z in op.eigenvalues_up_to(bound))
    if family.is_finite:
        return out
    tail = family.tail
    if tail.first_eigenvalue.kind is not LimitKind.INFINITY:
        raise TailCertificationError("tail cannot certify a finite eigenvalue count below the bound")
    start = family.prefix_length + 1
    for n in range(start, start + tail.max_scan):
        op = family.coordinate(n)
        if op.spectrum_min_modulus() > bound:
            return out
        out.extend((n, z) for z in op.eigenvalues_up_to(bound))
    raise TailCertificationError(f"more than {tail.max_scan} tail coordinates reach below {bound}")


def _has_overlap(pairs: list[tuple[int, complex]], eps: float) -> bool:
    """True when two different coordinates contribute eigenvalues within ``eps``."""
    if len(pairs) < 2:
        return False
    idx = np.array([n for n, _ in pairs])
    z = np.array([v for _, v in pairs], dtype=complex)
    order = np.argsort(z.real, kind="stable")
    idx, z = idx[order], z[order]
    for i in range(len(z)):
        j = i + 1
        while j < len(z) and z[j].real - z[i].real <= eps:
            if idx[j] != idx[i] and abs(z[j] - z[i]) <= eps:
                return True
            j += 1
    return False


class MergedCount(NamedTuple):
    count: int
    overlap: bool


def merged_counting(
    family: OperatorFamily, lam: float, tol: Tolerance = DEFAULT_TOLERANCE
) -> MergedCount:
    """``sum_n N(A_n; lam)`` and whether coordinate spectra touched.

    When ``overlap`` is set the disjointness hypothesis failed: coinciding
    eigenvalues of different coordinates are each counted.
    """
    if not lam >= 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    pairs = merged_eigenvalues(family, lam)
    return MergedCount(len(pairs), _has_overlap(pairs, tol.eps_membership))


@dataclass(frozen=True)
class CountingTable:
    thresholds: tuple
    counts: tuple
    overlaps: tuple
    source: str = ""

    def __post_init__(self):
        if len(self.thresholds) != len(self.counts) or len(self.counts) != len(self.overlaps):
            raise ValueError("thresholds, counts and overlaps must align")
        if any(b < a for a, b in zip(self.thresholds, self.thresholds[1:])):
            raise ValueError("thresholds must be nondecreasing")
        if any(b < a for a, b in zip(self.counts, self.counts[1:])):
            raise ValueError("counts must be nondecreasing along the thresholds")


def counting_table(
    family: OperatorFamily, thresholds: Sequence[float], tol: Tolerance = DEFAULT_TOLERANCE, source: str = ""
) -> CountingTable:
    rows = [merged_counting(family, float(t), tol) for t in thresholds]
    return CountingTable(
        tuple(float(t) for t in thresholds),
        tuple(r.count for r in rows),
        tuple(r.overlap for r in rows),
        source or family.label,
    )


def smallest_eigenvalues(family: OperatorFamily, count: int) -> np.ndarray:
    """Moduli of the ``count`` lowest-modulus eigenvalues of the family, sorted."""
    if count < 1:
        raise ValueError("count must be >= 1")
    bound = 1.0
    for _ in range(200):
        pairs = merged_eigenvalues(family, bound)
        if len(pairs) >= count:
            return np.sort(np.abs([z for _, z in pairs]))[:count]
        bound *= 2.0
    raise TailCertificationError(f"family does not reach {count} eigenvalues")


@dataclass(frozen=True)
class SeriesTail:
    """Certified bound on ``sum_{n > P} c_n^(-1/alpha_n)`` beyond the explicit coefficients.

    ``geometric``: ``c_n^(-1/alpha_n) <= constant * rate**n`` with ``0 < rate < 1``.
    ``power``: ``c_n^(-1/alpha_n) <= constant * n**(-rate)`` with ``rate > 1``.
    ``alpha`` is a lower bound for the tail exponents ``alpha_n``.
    """

    kind: str
    constant: float
    rate: float
    alpha: float

    def __post_init__(self):
        if self.kind not in ("geometric", "power"):
            raise ValueError(f"unknown series tail kind {self.kind!r}")
        if not self.constant > 0 or not self.alpha > 0:
            raise ValueError("tail constant and alpha must be positive")
        if self.kind == "geometric" and not 0 < self.rate < 1:
            raise ValueError("geometric tail needs 0 < rate < 1")
        if self.kind == "power" and not self.rate > 1:
            raise ValueError("power tail needs rate > 1")

    def bound(self, last: int) -> float:
        """Upper bound for the sum over ``n > last``."""
        if self.kind == "geometric":
            return self.constant * self.rate ** (last + 1) / (1 - self.rate)
        # integral comparison, n^-p decreasing
        return self.constant * float(last) ** (1 - self.rate) / (self.rate - 1)


@dataclass(frozen=True)
class AsymptoticBoundSpec:
    """Growth data ``lam_m(A_n) ~ c_n m^alpha_n`` for the coordinates of a family."""

    c: tuple
    alphas: tuple
    tail: Optional[SeriesTail] = None

    def __post_init__(self):
        c = tuple(float(v) for v in self.c)
        a = tuple(float(v) for v in self.alphas)
        if not c or len(c) != len(a):
            raise ValueError("need matching, non-empty coefficient and exponent lists")
        if any(not v > 0 for v in c + a):
            raise ValueError("coefficients and exponents must be positive")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "alphas", a)
        if self.tail is not None and self.tail.alpha < min(a):
            raise ValueError("inf alpha_n must be attained by an explicit coordinate")

    @property
    def alpha(self) -> float:
        return min(self.alphas)

    @property
    def q(self) -> int:
        """1-based index attaining ``inf alpha_n``."""
        return self.alphas.index(self.alpha) + 1

    @property
    def leading_constant(self) -> float:
        """``c_q^(-1/alpha_q)``."""
        return self.c[self.q - 1] ** (-1.0 / self.alpha)

    @property
    def series_value(self) -> float:
        """``sum_n c_n^(-1/alpha_n)`` (an upper bound when a tail is present)."""
        total = sum(cn ** (-1.0 / an) for cn, an in zip(self.c, self.alphas))
        if self.tail is not None:
            total += self.tail.bound(len(self.c))
        return total

    @property
    def limit_constant(self) -> float:
        """``lim_{lam -> inf}`` of the normalized bound.

        Every coordinate with ``alpha_n = alpha`` survives the limit, not just
        ``q``; with a tail sharing the minimal exponent this is an upper bound.
        """
        total = sum(cn ** (-1.0 / an) for cn, an in zip(self.c, self.alphas) if an == self.alpha)
        if self.tail is not None and self.tail.alpha == self.alpha:
            total += self.tail.bound(len(self.c))
        return total


def normalized_counting_bound(spec: AsymptoticBoundSpec, lam: float) -> float:
    """``sum_n c_n^(-1/alpha_n) lam^((alpha - alpha_n)/(alpha alpha_n))`` for ``lam > 1``."""
    if not lam > 1:
        raise ValueError(f"bound is stated for lambda > 1, got {lam}")
    alpha = spec.alpha
    total = 0.0
    for cn, an in zip(spec.c, spec.alphas):
        total += cn ** (-1.0 / an) * lam ** ((alpha - an) / (alpha * an))
    if spec.tail is not None:
        # exponents are <= 0 for lam > 1, worst case at the smallest tail alpha
        ta = spec.tail.alpha
        total += spec.tail.bound(len(spec.c)) * lam ** ((alpha - ta) / (alpha * ta))
    return total


def counting_bound(spec: AsymptoticBoundSpec, lam: float) -> float:
    """Upper bound on ``N(A; lam)``: ``lam^(1/alpha)`` times the normalized sum."""
    return lam ** (1.0 / spec.alpha) * normalized_counting_bound(spec, lam)


@dataclass(frozen=True)
class AsymptoticFit:
    gamma_hat: float
    alpha_hat: float
    fit_range: tuple
    residual: float

    def predict(self, n) -> np.ndarray:
        return self.gamma_hat * np.asarray(n, dtype=float) ** self.alpha_hat


def fit_asymptotic_exponent(
    moduli: Sequence[float], fit_range: Optional[tuple[int, int]] = None
) -> AsymptoticFit:
    """Least-squares line through ``(log n, log lam_n)``.

    ``fit_range`` is an inclusive 1-based index pair; the default is the top
    half of the sequence.  ``residual`` is the RMS deviation in log space.
    """
    x = np.asarray(moduli, dtype=float)
    if x.ndim != 1 or x.size < 8:
        raise ValueError(f"need a sequence of at least 8 values, got {x.size}")
    if np.any(np.diff(x) < 0):
        raise ValueError("eigenvalue moduli must be sorted nondecreasing")
    if np.any(x <= 0):
        raise ValueError("eigenvalue moduli must be positive")
    lo, hi = fit_range if fit_range is not None else (x.size // 2 + 1, x.size)
    if not 1 <= lo < hi <= x.size:
        raise ValueError(f"fit range {(lo, hi)} outside 1..{x.size} or fewer than 2 points")
    n = np.arange(lo, hi + 1, dtype=float)
    logn, logx = np.log(n), np.log(x[lo - 1 : hi])
    design = np.column_stack([logn, np.ones_like(logn)])
    (slope, intercept), *_ = np.linalg.lstsq(design, logx, rcond=None)
    resid = logx - (slope * logn + intercept)
    return AsymptoticFit(float(math.exp(intercept)), float(slope), (lo, hi), float(np.sqrt(np.mean(resid**2))))


class BoundCheck(NamedTuple):
    holds: bool
    first_violation: Optional[int]


def verify_eigenvalue_bound(moduli: Sequence[float], gamma: float, alpha: float, n_min: int = 1) -> BoundCheck:
    """Whether ``lam_n <= gamma n^alpha`` for every listed ``n >= n_min``."""
    x = np.asarray(moduli, dtype=float)
    n = np.arange(1, x.size + 1, dtype=float)
    bad = (x > gamma * n**alpha) & (n >= n_min)
    if np.any(bad):
        return BoundCheck(False, int(np.argmax(bad)) + 1)
    return BoundCheck(True, None)
