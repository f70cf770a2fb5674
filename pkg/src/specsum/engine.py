"""Family-level verdicts for ``A = (+)_n A_n``.

* ``A`` is bounded iff ``sup_n ||A_n|| < inf``, and then ``||A||`` equals
  that supremum.
* With compact coordinates, ``A`` is compact iff ``||A_n|| -> 0``.
* If every ``A_n`` has compact resolvent, ``lam`` is a common resolvent
  point and ``||R_lam(A_n)|| -> 0``, then ``A`` has discrete spectrum.  This
  is sufficient only, so failure is reported as "not certified".
* ``R_lam(A) = (+)_n R_lam(A_n)`` is the operator-norm limit of the
  truncations ``K_m`` that keep the first ``m`` coordinates, with
  ``||K_m - K|| <= sup_{n > m} ||R_lam(A_n)||``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .family import LimitKind, OperatorFamily
from .spectrum import (
    DEFAULT_TOLERANCE,
    ComplexPoint,
    InSpectrumError,
    PointLike,
    SingularBlockError,
    SpectralClass,
    Tolerance,
    as_complex,
)

__all__ = [
    "Boundedness",
    "BoundednessResult",
    "Compactness",
    "Discreteness",
    "ResolventAssembly",
    "is_bounded",
    "is_compact",
    "has_discrete_spectrum",
    "assemble_resolvent_truncation",
    "resolvent_tail_norm",
]


class Boundedness(str, enum.Enum):
    BOUNDED = "Bounded"
    UNBOUNDED = "Unbounded"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class BoundednessResult:
    status: Boundedness
    norm: Optional[float] = None

    def __str__(self):
        if self.status is Boundedness.BOUNDED:
            return f"Bounded({self.norm!r})"
        return self.status.value


class Compactness(str, enum.Enum):
    COMPACT = "Compact"
    NOT_COMPACT = "NotCompact"
    INCONCLUSIVE = "Inconclusive"


class Discreteness(str, enum.Enum):
    DISCRETE = "Discrete"
    NOT_CERTIFIED = "NotCertified"
    INCONCLUSIVE = "Inconclusive"


def is_bounded(family: OperatorFamily) -> BoundednessResult:
    """Boundedness of the direct sum and, when bounded, its norm.

    For a ``BOUNDED(v)`` tail the reported norm is ``max(prefix, v)``, which
    is the supremum whenever the declared bound is attained.
    """
    norms = [op.operator_norm() for op in family.prefix]
    if any(math.isinf(v) for v in norms):
        return BoundednessResult(Boundedness.UNBOUNDED)
    best = max(norms)
    if family.is_finite:
        return BoundednessResult(Boundedness.BOUNDED, best)
    kind = family.tail.norm.kind
    if kind is LimitKind.INFINITY:
        return BoundednessResult(Boundedness.UNBOUNDED)
    if kind is LimitKind.UNKNOWN:
        return BoundednessResult(Boundedness.INCONCLUSIVE)
    if kind is LimitKind.BOUNDED:
        return BoundednessResult(Boundedness.BOUNDED, max(best, family.tail.norm.value))
    # decreasing to zero: the first tail coordinate dominates the rest
    first = family.coordinate(family.prefix_length + 1).operator_norm()
    if math.isinf(first):
        return BoundednessResult(Boundedness.UNBOUNDED)
    return BoundednessResult(Boundedness.BOUNDED, max(best, first))


def is_compact(family: OperatorFamily) -> Compactness:
    if not all(op.is_compact() for op in family.prefix):
        return Compactness.NOT_COMPACT
    if family.is_finite:
        return Compactness.COMPACT
    kind = family.tail.norm.kind
    if kind is LimitKind.UNKNOWN:
        return Compactness.INCONCLUSIVE
    if kind is not LimitKind.ZERO:
        return Compactness.NOT_COMPACT
    if not family.coordinate(family.prefix_length + 1).is_compact():
        return Compactness.NOT_COMPACT
    return Compactness.COMPACT


def has_discrete_spectrum(
    family: OperatorFamily, lam: PointLike, tol: Tolerance = DEFAULT_TOLERANCE
) -> Discreteness:
    """Check the sufficient condition for discreteness at a candidate point ``lam``.

    Raises
    ------
    InSpectrumError
        If ``lam`` is in the spectrum of an explicit coordinate.
    """
    lam = as_complex(lam)
    for n, op in enumerate(family.prefix, 1):
        cls = op.classify_point(lam, tol)
        if cls is not SpectralClass.RESOLVENT:
            raise InSpectrumError(f"lambda={lam} lies in the spectrum of coordinate {n} ({cls})")
    rough = [n for n, op in enumerate(family.prefix, 1) if not op.has_compact_resolvent()]
    if rough:
        warnings.warn(
            f"coordinates {rough} do not have discrete spectrum, so neither does the direct sum",
            stacklevel=2,
        )
        return Discreteness.NOT_CERTIFIED
    if family.is_finite:
        return Discreteness.DISCRETE

    scan = family.tail.scan(lam, family.prefix_length + 1, tol)
    if any(cls is not SpectralClass.RESOLVENT for _, cls in scan.entries):
        return Discreteness.NOT_CERTIFIED
    if not scan.settled:
        return Discreteness.INCONCLUSIVE
    if not family.coordinate(family.prefix_length + 1).has_compact_resolvent():
        return Discreteness.NOT_CERTIFIED
    limit, _ = family.tail.resolvent_limit(lam, tol)
    if limit.kind is LimitKind.ZERO:
        return Discreteness.DISCRETE
    if limit.kind is LimitKind.UNKNOWN:
        return Discreteness.INCONCLUSIVE
    return Discreteness.NOT_CERTIFIED


@dataclass(frozen=True, eq=False)
class ResolventAssembly:
    """Truncated resolvent ``K_m``: inverses of the truncated blocks, placed block-diagonally."""

    point: ComplexPoint
    blocks: tuple
    assembled: np.ndarray

    @property
    def block_norms(self) -> list[float]:
        return [float(np.linalg.norm(b, 2)) for b in self.blocks]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.assembled, 2))


def assemble_resolvent_truncation(
    family: OperatorFamily,
    lam: PointLike,
    m: int,
    size: int,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> ResolventAssembly:
    """Invert ``A_n^(size) - lam I`` for ``n = 1..m`` and assemble block-diagonally."""
    lam = as_complex(lam)
    if m < 1:
        raise ValueError("need at least one block")
    blocks = []
    for n, op in family.coordinates(m):
        t = op.truncate(size)
        shifted = t - lam * np.eye(t.shape[0])
        smin = np.linalg.svd(shifted, compute_uv=False)[-1]
        if smin <= tol.eps_membership:
            raise SingularBlockError(
                f"block {n}: lambda={lam} is within {smin:.3g} of a truncation eigenvalue"
            )
        inv = np.linalg.inv(shifted)
        inv.setflags(write=False)
        blocks.append(inv)
    assembled = scipy.linalg.block_diag(*blocks).astype(complex)
    assembled.setflags(write=False)
    return ResolventAssembly(ComplexPoint.of(lam), tuple(blocks), assembled)


def resolvent_tail_norm(
    family: OperatorFamily, lam: PointLike, m: int, tol: Tolerance = DEFAULT_TOLERANCE
) -> Optional[float]:
    """``sup_{n > m} ||R_lam(A_n)||``, or ``None`` when the tail rule cannot say."""
    lam = as_complex(lam)
    if m < 0:
        raise ValueError("m must be >= 0")

    def norm_of(n):
        r = family.coordinate(n).resolvent_norm(lam, tol)
        if math.isinf(r):
            raise InSpectrumError(f"lambda={lam} lies in the spectrum of coordinate {n}")
        return r

    values = [norm_of(n) for n in range(m + 1, family.prefix_length + 1)]
    if family.is_finite:
        return max(values, default=0.0)
    limit, _ = family.tail.resolvent_limit(lam, tol)
    if limit.kind is LimitKind.UNKNOWN:
        return None
    if limit.kind is LimitKind.INFINITY:
        return math.inf
    values.append(norm_of(max(m, family.prefix_length) + 1))
    if limit.kind is LimitKind.BOUNDED:
        values.append(limit.value)
    return max(values)
