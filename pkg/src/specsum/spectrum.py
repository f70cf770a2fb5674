"""Spectral vocabulary shared by every module: points, classes, tolerances."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

__all__ = [
    "ComplexPoint",
    "PointLike",
    "SpectralClass",
    "SupKind",
    "SupResult",
    "Tolerance",
    "DEFAULT_TOLERANCE",
    "as_complex",
    "SpecsumError",
    "UnsupportedModelError",
    "SpectralComputationError",
    "InSpectrumError",
    "SingularBlockError",
    "TailCertificationError",
]


class SpecsumError(Exception):
    """Base class for errors raised by this package."""


class UnsupportedModelError(SpecsumError):
    """The operator model cannot answer the request (e.g. enumerate eigenvalues)."""


class SpectralComputationError(SpecsumError):
    """A dense eigen/singular value computation failed to converge."""


class InSpectrumError(SpecsumError, ValueError):
    """The query point lies in the spectrum where a resolvent point was required."""


class SingularBlockError(SpecsumError, ValueError):
    """A truncated block ``A - lambda I`` is numerically singular."""


class TailCertificationError(SpecsumError):
    """The tail rule cannot certify a property required by the operation."""


@dataclass(frozen=True)
class ComplexPoint:
    """A finite point of the complex plane."""

    re: float
    im: float

    def __post_init__(self):
        re, im = float(self.re), float(self.im)
        if not (math.isfinite(re) and math.isfinite(im)):
            raise ValueError(f"query point must be finite, got ({self.re}, {self.im})")
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    @classmethod
    def of(cls, value: "PointLike") -> "ComplexPoint":
        if isinstance(value, ComplexPoint):
            return value
        if isinstance(value, (tuple, list)):
            re, im = value
            return cls(re, im)
        z = complex(value)
        return cls(z.real, z.imag)

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    def __complex__(self) -> complex:
        return self.value

    def __str__(self) -> str:
        return f"{self.re!r}{self.im:+}j"


PointLike = Union[ComplexPoint, complex, float, int, tuple, list]


def as_complex(value: PointLike) -> complex:
    """Validate a query point and return it as a Python complex."""
    return ComplexPoint.of(value).value


class SpectralClass(str, enum.Enum):
    POINT = "PointSpectrum"
    CONTINUOUS = "ContinuousSpectrum"
    RESIDUAL = "ResidualSpectrum"
    RESOLVENT = "Resolvent"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self) -> str:
        return self.value

    @property
    def in_spectrum(self) -> bool:
        return self in (SpectralClass.POINT, SpectralClass.CONTINUOUS, SpectralClass.RESIDUAL)


class SupKind(str, enum.Enum):
    FINITE = "Finite"
    INFINITE = "Infinite"
    LOWER_BOUND = "LowerBoundOnly"


@dataclass(frozen=True)
class SupResult:
    """Outcome of a supremum query over an infinite index range.

    ``witness`` optionally records the index at which a declared-divergent
    sequence was observed above the divergence threshold.
    """

    kind: SupKind
    value: Optional[float] = None
    witness: Optional[int] = None

    def __post_init__(self):
        if self.kind is SupKind.INFINITE:
            if self.value is not None:
                raise ValueError("Infinite sup carries no value")
        elif self.value is None or not (self.value >= 0) or math.isinf(self.value):
            raise ValueError(f"{self.kind.value} sup needs a finite value >= 0, got {self.value}")

    @classmethod
    def finite(cls, value: float) -> "SupResult":
        return cls(SupKind.FINITE, float(value))

    @classmethod
    def infinite(cls, witness: Optional[int] = None) -> "SupResult":
        return cls(SupKind.INFINITE, None, witness)

    @classmethod
    def lower_bound(cls, value: float) -> "SupResult":
        return cls(SupKind.LOWER_BOUND, float(value))

    @property
    def is_finite(self) -> bool:
        return self.kind is SupKind.FINITE

    def __str__(self) -> str:
        if self.kind is SupKind.FINITE:
            return repr(self.value)
        if self.kind is SupKind.INFINITE:
            return "inf"
        return f">={self.value!r}"


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds.

    ``eps_membership`` is the distance at or below which a point counts as
    lying on a discrete spectral set.  ``eps_div`` is the resolvent norm above
    which a declared-divergent tail is reported as having visibly diverged.
    """

    eps_membership: float = 1e-9
    eps_div: float = 1e6

    def __post_init__(self):
        if not (self.eps_membership > 0 and math.isfinite(self.eps_membership)):
            raise ValueError("eps_membership must be a positive finite number")
        if not (self.eps_div > 0 and math.isfinite(self.eps_div)):
            raise ValueError("eps_div must be a positive finite number")


DEFAULT_TOLERANCE = Tolerance()
