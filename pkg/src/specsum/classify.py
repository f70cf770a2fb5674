"""Pointwise classification of the spectrum of a direct sum.

For ``A = (+)_n A_n`` the parts of the spectrum are determined by the
coordinates:

* point spectrum: ``lam`` is an eigenvalue of some ``A_n``;
* residual spectrum: not an eigenvalue of any ``A_n``, but in the residual
  spectrum of some ``A_n``;
* continuous spectrum: neither of the above, and either in the continuous
  spectrum of some ``A_n`` or in every resolvent set with
  ``sup_n ||R_lam(A_n)|| = inf``;
* resolvent set: in every resolvent set with a finite supremum.

The evaluation order below realises the set complements in that list.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .family import LimitKind, OperatorFamily
from .spectrum import (
    DEFAULT_TOLERANCE,
    ComplexPoint,
    InSpectrumError,
    PointLike,
    SpectralClass,
    SupKind,
    SupResult,
    Tolerance,
    as_complex,
)

__all__ = [
    "DirectSumClassification",
    "classify_direct_sum_point",
    "resolvent_norm_sup",
    "scan_nodes",
    "spectral_scan",
]

# Divergence probing walks n = P+1, 2(P+1), 4(P+1), ... this many times.
_DIVERGENCE_PROBES = 48


@dataclass(frozen=True)
class DirectSumClassification:
    point: ComplexPoint
    spectral_class: SpectralClass
    witness_index: Optional[int]
    resolvent_sup: SupResult
    per_coordinate: tuple

    def __post_init__(self):
        if self.spectral_class is SpectralClass.POINT:
            if self.witness_index is None or (self.witness_index, SpectralClass.POINT) not in self.per_coordinate:
                raise ValueError("a point-spectrum verdict needs a point-spectrum witness")
        if self.spectral_class is SpectralClass.RESOLVENT and not self.resolvent_sup.is_finite:
            raise ValueError("a resolvent verdict needs a finite resolvent supremum")

    @property
    def settled(self) -> bool:
        return self.spectral_class is not SpectralClass.INCONCLUSIVE

    def verdict(self) -> str:
        """One-line human-readable verdict."""
        text = self.spectral_class.value
        if self.witness_index is not None:
            text += f" (witness {self.witness_index})"
        else:
            text += f", sup={self.resolvent_sup}"
        return text


def _probe_divergence(family: OperatorFamily, lam: complex, tol: Tolerance) -> Optional[int]:
    n = family.prefix_length + 1
    for _ in range(_DIVERGENCE_PROBES):
        if family.coordinate(n).resolvent_norm(lam, tol) > tol.eps_div:
            return n
        n *= 2
    return None


def resolvent_norm_sup(
    lam: PointLike, family: OperatorFamily, tol: Tolerance = DEFAULT_TOLERANCE
) -> SupResult:
    """``sup_n ||R_lam(A_n)||`` as far as the tail rule can certify it.

    Raises
    ------
    InSpectrumError
        If ``lam`` lies in the spectrum of an explicit coordinate (or of the
        first tail coordinate when a decaying tail has to be evaluated).
    """
    lam = as_complex(lam)
    norms = []
    for n, op in enumerate(family.prefix, 1):
        r = op.resolvent_norm(lam, tol)
        if math.isinf(r):
            raise InSpectrumError(f"lambda={lam} lies in the spectrum of coordinate {n}")
        norms.append(r)
    best = max(norms)
    if family.is_finite:
        return SupResult.finite(best)

    limit, _ = family.tail.resolvent_limit(lam, tol)
    if limit.kind is LimitKind.ZERO:
        n = family.prefix_length + 1
        r = family.coordinate(n).resolvent_norm(lam, tol)
        if math.isinf(r):
            raise InSpectrumError(f"lambda={lam} lies in the spectrum of coordinate {n}")
        return SupResult.finite(max(best, r))
    if limit.kind is LimitKind.BOUNDED:
        return SupResult.finite(max(best, limit.value))
    if limit.kind is LimitKind.INFINITY:
        return SupResult.infinite(_probe_divergence(family, lam, tol))
    return SupResult.lower_bound(best)


def classify_direct_sum_point(
    lam: PointLike, family: OperatorFamily, tol: Tolerance = DEFAULT_TOLERANCE
) -> DirectSumClassification:
    point = ComplexPoint.of(lam)
    z = point.value
    per, settled = family.classify_coordinates(z, tol)
    per = tuple(per)

    def first(cls):
        return next((n for n, c in per if c is cls), None)

    def known_lower_bound():
        finite = [family.coordinate(n).resolvent_norm(z, tol) for n, c in per if c is SpectralClass.RESOLVENT]
        return SupResult.lower_bound(max(finite, default=0.0))

    witness = first(SpectralClass.POINT)
    if witness is not None:
        return DirectSumClassification(point, SpectralClass.POINT, witness, SupResult.infinite(), per)
    if not settled:
        # an unexamined tail coordinate could still carry lam as an eigenvalue
        return DirectSumClassification(point, SpectralClass.INCONCLUSIVE, None, known_lower_bound(), per)
    for cls in (SpectralClass.RESIDUAL, SpectralClass.CONTINUOUS):
        witness = first(cls)
        if witness is not None:
            return DirectSumClassification(point, cls, witness, SupResult.infinite(), per)

    sup = resolvent_norm_sup(z, family, tol)
    if sup.is_finite:
        cls = SpectralClass.RESOLVENT
    elif sup.kind is SupKind.INFINITE:
        cls = SpectralClass.CONTINUOUS
    else:
        cls = SpectralClass.INCONCLUSIVE
    return DirectSumClassification(point, cls, None, sup, per)


def scan_nodes(region: Sequence[float], grid: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Real and imaginary node coordinates of a scan grid.

    ``region = (re0, re1, im0, im1)``; an axis with a single node uses the
    midpoint of its interval.
    """
    re0, re1, im0, im1 = (float(v) for v in region)
    n_re, n_im = (int(v) for v in grid)
    if not all(math.isfinite(v) for v in (re0, re1, im0, im1)):
        raise ValueError("scan region must be finite")
    if not (re0 < re1 and im0 < im1):
        raise ValueError(f"empty scan region {region}")
    if n_re < 1 or n_im < 1:
        raise ValueError(f"grid dimensions must be >= 1, got {grid}")

    def axis(lo, hi, count):
        if count == 1:
            return np.array([(lo + hi) / 2.0])
        return np.linspace(lo, hi, count)

    return axis(re0, re1, n_re), axis(im0, im1, n_im)


def spectral_scan(
    region: Sequence[float],
    grid: Sequence[int],
    family: OperatorFamily,
    tol: Tolerance = DEFAULT_TOLERANCE,
    workers: Optional[int] = None,
) -> list[list[DirectSumClassification]]:
    """Classify every node of a rectangular grid.

    Returns rows of constant imaginary part (ascending), each ordered by
    ascending real part.  ``workers > 1`` evaluates nodes in a thread pool;
    the result does not depend on it.
    """
    res, ims = scan_nodes(region, grid)
    nodes = [complex(x, y) for y in ims for x in res]

    def one(z):
        return classify_direct_sum_point(z, family, tol)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(one, nodes))
    else:
        flat = [one(z) for z in nodes]
    n_re = len(res)
    return [flat[i : i + n_re] for i in range(0, len(flat), n_re)]
