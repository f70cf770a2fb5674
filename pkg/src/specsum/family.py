"""Operator families: an explicit prefix of coordinates plus a tail rule.

No finite computation settles a statement about every ``n >= 1``.  A
:class:`TailRule` encodes what is known analytically about the coordinates
beyond the explicit prefix: a generator ``n -> A_n`` and declared monotone
limits for the operator norm, the first eigenvalue (distance from the origin
to the spectrum) and the resolvent norm.  Queries the declarations cannot
answer come back as ``Unknown`` and surface as inconclusive verdicts.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from .models import CoordinateOperator
from .spectrum import (
    DEFAULT_TOLERANCE,
    PointLike,
    SpectralClass,
    TailCertificationError,
    Tolerance,
    as_complex,
)

__all__ = [
    "LimitKind",
    "Limit",
    "LIMIT_ZERO",
    "LIMIT_INFINITY",
    "UNKNOWN",
    "bounded_by",
    "TailRule",
    "TailScan",
    "OperatorFamily",
]


class LimitKind(str, enum.Enum):
    ZERO = "zero"
    INFINITY = "infinity"
    BOUNDED = "bounded"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Limit:
    """Declared behaviour of a scalar sequence over the tail ``n > P``.

    All kinds except ``UNKNOWN`` also assert monotonicity from ``n = P + 1``
    on: ``ZERO`` decreases to 0, ``INFINITY`` increases without bound, and
    ``BOUNDED`` stays at or below ``value`` without tending to zero.
    """

    kind: LimitKind
    value: Optional[float] = None

    def __post_init__(self):
        if self.kind is LimitKind.BOUNDED:
            if self.value is None or not (0 < self.value < math.inf):
                raise ValueError("a BOUNDED limit needs a positive finite value")
        elif self.value is not None:
            raise ValueError(f"{self.kind.value} limit carries no value")

    def __str__(self):
        return f"bounded({self.value!r})" if self.kind is LimitKind.BOUNDED else self.kind.value


LIMIT_ZERO = Limit(LimitKind.ZERO)
LIMIT_INFINITY = Limit(LimitKind.INFINITY)
UNKNOWN = Limit(LimitKind.UNKNOWN)


def bounded_by(value: float) -> Limit:
    return Limit(LimitKind.BOUNDED, float(value))


@dataclass(frozen=True)
class TailScan:
    """Tail coordinates inspected for one query point.

    ``settled`` is true when the declarations guarantee that every tail
    coordinate not listed in ``entries`` has the point in its resolvent set.
    """

    entries: tuple
    settled: bool


@dataclass(frozen=True)
class TailRule:
    """Behaviour of the coordinates beyond the explicit prefix.

    ``generator=None`` is the finite family: there is no tail and every query
    is answered exactly over the prefix.

    ``resolvent`` is the declared limit of ``||R_lam(A_n)||`` at any point of
    the common resolvent set; it says nothing about which points belong to
    that set.  ``resolvent_at`` holds pointwise declarations ``(lam, limit)``,
    which additionally assert ``lam`` lies in the resolvent set of every
    tail coordinate.
    """

    generator: Optional[Callable[[int], CoordinateOperator]] = None
    norm: Limit = UNKNOWN
    first_eigenvalue: Limit = UNKNOWN
    resolvent: Limit = UNKNOWN
    resolvent_at: tuple = ()
    max_scan: int = 1000

    def __post_init__(self):
        at = tuple((as_complex(p), lim) for p, lim in self.resolvent_at)
        object.__setattr__(self, "resolvent_at", at)
        if self.generator is None and (
            at or any(l.kind is not LimitKind.UNKNOWN for l in (self.norm, self.first_eigenvalue, self.resolvent))
        ):
            raise ValueError("a finite family takes no tail declarations")
        if int(self.max_scan) < 1:
            raise ValueError("max_scan must be >= 1")

    @classmethod
    def finite(cls) -> "TailRule":
        return cls()

    @property
    def is_finite(self) -> bool:
        return self.generator is None

    def resolvent_limit(self, lam: PointLike, tol: Tolerance = DEFAULT_TOLERANCE) -> tuple[Limit, bool]:
        """Declared resolvent-norm limit at ``lam`` and whether it is pointwise."""
        lam = as_complex(lam)
        for point, lim in self.resolvent_at:
            if abs(point - lam) <= tol.eps_membership:
                return lim, True
        return self.resolvent, False

    def scan(self, lam: PointLike, first_index: int, tol: Tolerance = DEFAULT_TOLERANCE) -> TailScan:
        """Classify tail coordinates from ``first_index`` on until the rest is certified.

        Monotone declarations stop the walk: once the first eigenvalue
        (declared to increase without bound) exceeds ``|lam|``, or the
        operator norm (declared to decrease to zero) drops below ``|lam|``,
        no later coordinate can have ``lam`` in its spectrum.  A pointwise
        resolvent declaration settles the tail at once.  The walk also stops
        at the first eigenvalue witness, since nothing later can change a
        point-spectrum verdict.
        """
        if self.is_finite:
            return TailScan((), True)
        lam = as_complex(lam)
        eps = tol.eps_membership
        _, pointwise = self.resolvent_limit(lam, tol)
        entries = []
        for n in range(first_index, first_index + int(self.max_scan)):
            op = self.generator(n)
            if self.first_eigenvalue.kind is LimitKind.INFINITY and op.spectrum_min_modulus() > abs(lam) + eps:
                return TailScan(tuple(entries), True)
            if self.norm.kind is LimitKind.ZERO and op.operator_norm() < abs(lam) - eps:
                return TailScan(tuple(entries), True)
            cls = op.classify_point(lam, tol)
            entries.append((n, cls))
            if pointwise:
                if cls is not SpectralClass.RESOLVENT:
                    raise TailCertificationError(
                        f"tail declares lambda={lam} resolvent but coordinate {n} classifies it {cls}"
                    )
                return TailScan(tuple(entries), True)
            if cls is SpectralClass.POINT:
                return TailScan(tuple(entries), False)
        return TailScan(tuple(entries), False)


@dataclass(frozen=True)
class OperatorFamily:
    """``A = (+)_n A_n``: explicit coordinates ``1..P`` followed by a tail rule."""

    prefix: tuple
    tail: TailRule = field(default_factory=TailRule.finite)
    label: str = ""

    def __post_init__(self):
        prefix = tuple(self.prefix)
        if not prefix:
            raise ValueError("an operator family needs at least one explicit coordinate")
        for i, op in enumerate(prefix, 1):
            if not isinstance(op, CoordinateOperator):
                raise TypeError(f"coordinate {i} is not a CoordinateOperator: {op!r}")
        if not isinstance(self.tail, TailRule):
            raise TypeError("tail must be a TailRule")
        object.__setattr__(self, "prefix", prefix)

    @classmethod
    def finite(cls, *ops: CoordinateOperator, label: str = "") -> "OperatorFamily":
        return cls(tuple(ops), TailRule.finite(), label)

    @property
    def prefix_length(self) -> int:
        return len(self.prefix)

    @property
    def is_finite(self) -> bool:
        return self.tail.is_finite

    def coordinate(self, n: int) -> CoordinateOperator:
        """The operator ``A_n`` (1-based)."""
        if n < 1:
            raise IndexError("coordinates are indexed from 1")
        if n <= self.prefix_length:
            return self.prefix[n - 1]
        if self.tail.is_finite:
            raise IndexError(f"finite family has {self.prefix_length} coordinates, asked for {n}")
        return self.tail.generator(n)

    def coordinates(self, count: int) -> Iterator[tuple[int, CoordinateOperator]]:
        for n in range(1, count + 1):
            yield n, self.coordinate(n)

    def head(self, count: int) -> "OperatorFamily":
        """Finite family of the first ``count`` coordinates."""
        ops = tuple(op for _, op in self.coordinates(count))
        return OperatorFamily(ops, TailRule.finite(), self.label)

    def classify_coordinates(self, lam: PointLike, tol: Tolerance = DEFAULT_TOLERANCE) -> tuple[list, bool]:
        """Per-coordinate classes over the prefix and the inspected tail."""
        lam = as_complex(lam)
        per = [(n, op.classify_point(lam, tol)) for n, op in enumerate(self.prefix, 1)]
        scan = self.tail.scan(lam, self.prefix_length + 1, tol)
        return per + list(scan.entries), scan.settled
