"""Coordinate operator models.

Every model exposes the same spectral interface (:class:`CoordinateOperator`):
pointwise classification, resolvent and operator norms, eigenvalue
enumeration, compactness flags and a finite matrix truncation.  Models are
immutable value objects.

Unbounded models (multipoint and ODE operators, diagonal operators with
divergent entries) are handled purely through their spectral data; the
truncation of such a model is the diagonal matrix of its lowest-modulus
eigenvalues.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .spectrum import (
    DEFAULT_TOLERANCE,
    InSpectrumError,
    PointLike,
    SpectralClass,
    SpectralComputationError,
    Tolerance,
    UnsupportedModelError,
    as_complex,
)

__all__ = [
    "CoordinateOperator",
    "FiniteMatrixOperator",
    "DiagonalOperator",
    "PowerLawEntries",
    "ExplicitEntries",
    "Growth",
    "MultipointOperator",
    "VectorODEOperator",
    "DeclaredOperator",
    "Disk",
    "Circle",
    "ShiftOperator",
    "scalar",
    "multipoint_eigenvalue",
    "multipoint_eigenfunction_eval",
    "diagonal_resolvent_norm_exact",
    "diagonal_resolvent_norm_hs_bound",
    "ode_eigenvalue",
    "ode_resolvent_bound",
    "matrix_classify",
]

TWO_PI = 2.0 * math.pi

# Largest index a diagonal entry search may reach before giving up.
MAX_ENTRY_SEARCH = 50_000_000
_CHUNK = 1_000_000


class CoordinateOperator(abc.ABC):
    """Uniform spectral interface of one coordinate operator ``A_n``."""

    @abc.abstractmethod
    def classify_point(self, lam: PointLike, tol: Tolerance = DEFAULT_TOLERANCE) -> SpectralClass:
        ...

    @abc.abstractmethod
    def distance_to_spectrum(self, lam: PointLike) -> float:
        ...

    def resolvent_norm(self, lam: PointLike, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
        """``||(A - lam)^-1||``, or ``inf`` when ``lam`` is classified in the spectrum.

        The default is exact for normal (and hyponormal) operators, whose
        resolvent norm is the reciprocal distance to the spectrum.
        """
        lam = as_complex(lam)
        if self.classify_point(lam, tol) is not SpectralClass.RESOLVENT:
            return math.inf
        return 1.0 / self.distance_to_spectrum(lam)

    @abc.abstractmethod
    def operator_norm(self) -> float:
        ...

    @abc.abstractmethod
    def eigenvalues_up_to(self, bound: float) -> list[complex]:
        """Eigenvalues with modulus ``<= bound``, with multiplicity."""

    @abc.abstractmethod
    def is_compact(self) -> bool:
        ...

    @abc.abstractmethod
    def has_compact_resolvent(self) -> bool:
        ...

    @abc.abstractmethod
    def truncate(self, size: int) -> np.ndarray:
        """Dense complex matrix of dimension ``<= size``."""

    def truncation_eigenvalues(self, size: int) -> list[complex]:
        """Eigenvalues of ``truncate(size)`` as the model knows them."""
        try:
            return [complex(z) for z in np.linalg.eigvals(self.truncate(size))]
        except np.linalg.LinAlgError as exc:
            raise SpectralComputationError(f"eigensolver did not converge: {exc}") from exc

    @abc.abstractmethod
    def spectrum_min_modulus(self) -> float:
        """Distance from the origin to the spectrum (the "first eigenvalue")."""

    @abc.abstractmethod
    def truncation_horizon(self, size: int) -> float:
        """Every eigenvalue of modulus strictly below this appears in ``truncate(size)``."""

    @property
    def dimension(self) -> Optional[int]:
        return None


def _check_size(size: int) -> int:
    size = int(size)
    if size < 1:
        raise ValueError(f"truncation size must be >= 1, got {size}")
    return size


def _check_bound(bound: float) -> float:
    bound = float(bound)
    if not bound >= 0:
        raise ValueError(f"eigenvalue bound must be >= 0, got {bound}")
    return bound


# ---------------------------------------------------------------------------
# Finite matrices


@dataclass(frozen=True, eq=False)
class FiniteMatrixOperator(CoordinateOperator):
    """A dense ``d x d`` complex matrix acting on ``C^d``."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise ValueError(f"matrix must be square and non-empty, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix entries must be finite")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    def __repr__(self) -> str:
        return f"FiniteMatrixOperator(d={self.dimension})"

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        try:
            return np.linalg.eigvals(self.entries)
        except np.linalg.LinAlgError as exc:
            raise SpectralComputationError(f"eigensolver did not converge: {exc}") from exc

    @cached_property
    def _singular_values(self) -> np.ndarray:
        try:
            return np.linalg.svd(self.entries, compute_uv=False)
        except np.linalg.LinAlgError as exc:
            raise SpectralComputationError(f"SVD did not converge: {exc}") from exc

    def distance_to_spectrum(self, lam):
        return float(np.min(np.abs(self.eigenvalues - as_complex(lam))))

    def classify_point(self, lam, tol=DEFAULT_TOLERANCE):
        if self.distance_to_spectrum(lam) <= tol.eps_membership:
            return SpectralClass.POINT
        return SpectralClass.RESOLVENT

    def resolvent_norm(self, lam, tol=DEFAULT_TOLERANCE):
        lam = as_complex(lam)
        if self.classify_point(lam, tol) is not SpectralClass.RESOLVENT:
            return math.inf
        shifted = self.entries - lam * np.eye(self.dimension)
        try:
            smin = np.linalg.svd(shifted, compute_uv=False)[-1]
        except np.linalg.LinAlgError as exc:
            raise SpectralComputationError(f"SVD did not converge: {exc}") from exc
        return math.inf if smin == 0 else float(1.0 / smin)

    def operator_norm(self):
        return float(self._singular_values[0])

    def eigenvalues_up_to(self, bound):
        bound = _check_bound(bound)
        ev = sorted(self.eigenvalues, key=lambda z: (abs(z), z.imag))
        return [complex(z) for z in ev if abs(z) <= bound]

    def is_compact(self):
        return True

    def has_compact_resolvent(self):
        return True

    def truncate(self, size):
        size = _check_size(size)
        return np.array(self.entries[:size, :size])

    def truncation_eigenvalues(self, size):
        if _check_size(size) >= self.dimension:
            return [complex(z) for z in self.eigenvalues]
        return super().truncation_eigenvalues(size)

    def spectrum_min_modulus(self):
        return float(np.min(np.abs(self.eigenvalues)))

    def truncation_horizon(self, size):
        # A proper principal submatrix says nothing about the full spectrum.
        return math.inf if _check_size(size) >= self.dimension else 0.0


def scalar(value: complex) -> FiniteMatrixOperator:
    """Multiplication by ``value`` on ``C``."""
    return FiniteMatrixOperator(np.array([[value]], dtype=complex))


def matrix_classify(lam: PointLike, op: FiniteMatrixOperator, tol: Tolerance = DEFAULT_TOLERANCE) -> SpectralClass:
    """Point spectrum or resolvent set; finite matrices have nothing else."""
    return op.classify_point(lam, tol)


# ---------------------------------------------------------------------------
# Diagonal operators on l^2


@dataclass(frozen=True)
class PowerLawEntries:
    """Entry rule ``c_m = k * m**alpha + beta``."""

    k: complex
    alpha: float
    beta: complex = 0.0

    def __call__(self, m):
        return self.k * np.asarray(m, dtype=float) ** self.alpha + self.beta


@dataclass(frozen=True, eq=False)
class ExplicitEntries:
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(complex(v) for v in self.values))
        if not self.values:
            raise ValueError("explicit entry list must be non-empty")

    def __eq__(self, other):
        return isinstance(other, ExplicitEntries) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __call__(self, m):
        arr = np.asarray(self.values, dtype=complex)
        return arr[np.asarray(m, dtype=int) - 1]


@dataclass(frozen=True)
class Growth:
    """Declared growth ``|c_m| >= k * m**alpha`` for all ``m >= start``.

    The lower comparison is what makes tails of the entry sequence
    controllable: entries beyond a depth cannot come back close to a query
    point, and ``sum 1/|c_m - lam|**2`` has an integral tail bound.
    """

    k: float
    alpha: float
    start: int = 1

    def __post_init__(self):
        if not (self.k > 0 and math.isfinite(self.k)):
            raise ValueError(f"growth.k must be positive, got {self.k}")
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ValueError(f"growth.alpha must be positive, got {self.alpha}")
        if int(self.start) < 1:
            raise ValueError("growth.start must be >= 1")

    def floor(self, m):
        return self.k * np.asarray(m, dtype=float) ** self.alpha

    def index_reaching(self, level: float) -> int:
        """Smallest index ``M >= start`` with ``k * M**alpha >= level``."""
        if level <= 0:
            return int(self.start)
        m = max(int(self.start), math.ceil((level / self.k) ** (1.0 / self.alpha)))
        while self.k * float(m) ** self.alpha < level:
            m += 1
        return m


EntryRule = Union[Callable, Sequence[complex]]


@dataclass(frozen=True, eq=False)
class DiagonalOperator(CoordinateOperator):
    """Diagonal multiplication ``(u_m) -> (c_m u_m)``.

    Parameters
    ----------
    entries : callable or sequence
        Either a rule ``m -> c_m`` for ``m >= 1`` (should accept integer
        numpy arrays; scalar-only callables are also accepted) or an explicit
        finite list, in which case the operator acts on ``C^len(list)``.
    size : int, optional
        Dimension for a finite diagonal given by a rule.  ``None`` means the
        operator acts on all of ``l^2``.
    growth : Growth, optional
        Required for infinite diagonals whose spectrum accumulates only at
        infinity.
    accumulation_points : sequence of complex
        Finite accumulation points of the entries.  They are declared, never
        detected.  Entries beyond ``search_depth`` are assumed to lie no
        closer to a query point than these points.
    """

    entries: EntryRule
    size: Optional[int] = None
    growth: Optional[Growth] = None
    accumulation_points: tuple = ()
    search_depth: int = 10_000

    def __post_init__(self):
        entries = self.entries
        if not callable(entries):
            entries = ExplicitEntries(tuple(entries))
            if self.size is not None and self.size != len(entries.values):
                raise ValueError("size disagrees with the explicit entry list")
            object.__setattr__(self, "size", len(entries.values))
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "accumulation_points", tuple(complex(z) for z in self.accumulation_points))
        if self.size is not None:
            if int(self.size) < 1:
                raise ValueError("diagonal size must be >= 1")
            if self.accumulation_points:
                raise ValueError("a finite diagonal has no accumulation points")
        elif self.growth is None and not self.accumulation_points:
            raise ValueError(
                "an infinite diagonal needs a growth declaration or declared accumulation points"
            )
        if self.growth is not None and self.accumulation_points:
            raise ValueError("entries with declared growth accumulate only at infinity")

    # -- entry evaluation ---------------------------------------------------

    def entry_values(self, lo: int, hi: int) -> np.ndarray:
        """Entries ``c_lo .. c_hi`` (inclusive, 1-based)."""
        m = np.arange(lo, hi + 1)
        try:
            vals = np.asarray(self.entries(m), dtype=complex)
            if vals.shape != m.shape:
                raise ValueError
        except (TypeError, ValueError):
            vals = np.array([complex(self.entries(int(i))) for i in m], dtype=complex)
        if not np.all(np.isfinite(vals)):
            raise ValueError(f"non-finite diagonal entry among indices {lo}..{hi}")
        if self.growth is not None:
            mask = m >= self.growth.start
            floor = self.growth.floor(m[mask])
            bad = np.abs(vals[mask]) < floor * (1 - 1e-12)
            if np.any(bad):
                idx = int(m[mask][np.argmax(bad)])
                raise ValueError(f"declared growth violated at m={idx}")
        return vals

    def entry(self, m: int) -> complex:
        return complex(self.entry_values(m, m)[0])

    def _chunks(self, lo, hi):
        while lo <= hi:
            top = min(hi, lo + _CHUNK - 1)
            yield lo, self.entry_values(lo, top)
            lo = top + 1

    def nearest_entry(self, lam: PointLike, start: int = 1, depth: Optional[int] = None) -> tuple[float, int]:
        """``(inf_{m >= start} |c_m - lam|, argmin m)``.

        For infinite diagonals with declared growth the search extends until
        the growth floor certifies that no later entry is closer.
        """
        lam = as_complex(lam)
        depth = self.search_depth if depth is None else int(depth)
        if self.size is not None:
            if start > self.size:
                return math.inf, 0
            hi = self.size
        else:
            hi = start + depth - 1
        best, arg = math.inf, 0
        lo = start
        while True:
            for base, vals in self._chunks(lo, hi):
                d = np.abs(vals - lam)
                i = int(np.argmin(d))
                if d[i] < best:
                    best, arg = float(d[i]), base + i
            if self.size is not None or self.growth is None:
                return best, arg
            need = self.growth.index_reaching(best + abs(lam))
            if need <= hi + 1:
                return best, arg
            if need > MAX_ENTRY_SEARCH:
                raise UnsupportedModelError(
                    f"entry search would exceed {MAX_ENTRY_SEARCH} indices for lambda={lam}"
                )
            lo, hi = hi + 1, need

    def _accumulation_distance(self, lam: complex) -> float:
        if not self.accumulation_points:
            return math.inf
        return min(abs(z - lam) for z in self.accumulation_points)

    # -- interface ----------------------------------------------------------

    @property
    def dimension(self):
        return self.size

    def distance_to_spectrum(self, lam):
        lam = as_complex(lam)
        return min(self.nearest_entry(lam)[0], self._accumulation_distance(lam))

    def classify_point(self, lam, tol=DEFAULT_TOLERANCE):
        lam = as_complex(lam)
        if self.nearest_entry(lam)[0] <= tol.eps_membership:
            return SpectralClass.POINT
        if self._accumulation_distance(lam) <= tol.eps_membership:
            # injective with dense, non-closed range
            return SpectralClass.CONTINUOUS
        return SpectralClass.RESOLVENT

    def operator_norm(self):
        if self.size is not None:
            return float(np.max(np.abs(self.entry_values(1, self.size))))
        if self.growth is not None:
            return math.inf
        head = float(np.max(np.abs(self.entry_values(1, self.search_depth))))
        return max(head, max(abs(z) for z in self.accumulation_points))

    def eigenvalues_up_to(self, bound):
        bound = _check_bound(bound)
        if self.size is not None:
            hi = self.size
        elif self.growth is not None:
            hi = self.growth.index_reaching(math.nextafter(bound, math.inf))
        else:
            raise UnsupportedModelError("entries with finite accumulation points cannot be enumerated")
        vals = self.entry_values(1, hi)
        return [complex(z) for z in vals if abs(z) <= bound]

    def is_compact(self):
        if self.size is not None:
            return True
        return self.growth is None and all(z == 0 for z in self.accumulation_points)

    def has_compact_resolvent(self):
        return self.size is not None or self.growth is not None

    def truncate(self, size):
        size = _check_size(size)
        hi = size if self.size is None else min(size, self.size)
        return np.diag(self.entry_values(1, hi))

    def truncation_eigenvalues(self, size):
        size = _check_size(size)
        hi = size if self.size is None else min(size, self.size)
        return [complex(z) for z in self.entry_values(1, hi)]

    def spectrum_min_modulus(self):
        return min(self.nearest_entry(0.0)[0], self._accumulation_distance(0.0))

    def truncation_horizon(self, size):
        size = _check_size(size)
        if self.size is not None and size >= self.size:
            return math.inf
        if self.accumulation_points:
            return 0.0
        return self.nearest_entry(0.0, start=size + 1)[0]


def diagonal_resolvent_norm_exact(
    lam: PointLike, op: DiagonalOperator, depth: int = 1000, tol: Tolerance = DEFAULT_TOLERANCE
) -> float:
    """``sup_m 1/|c_m - lam|`` over the first ``depth`` entries, certified for the tail.

    The prefix is extended until the declared growth floor guarantees that
    no later entry comes closer to ``lam`` than the best one found.
    """
    lam = as_complex(lam)
    dist, m = op.nearest_entry(lam, depth=depth)
    if dist <= tol.eps_membership:
        raise InSpectrumError(f"lambda={lam} coincides with entry c_{m}")
    acc = op._accumulation_distance(lam)
    if acc <= tol.eps_membership:
        raise InSpectrumError(f"lambda={lam} is an accumulation point of the entries")
    return 1.0 / min(dist, acc)


def diagonal_resolvent_norm_hs_bound(
    lam: PointLike, op: DiagonalOperator, depth: int = 1_000_000, tol: Tolerance = DEFAULT_TOLERANCE
) -> float:
    """Hilbert-Schmidt bound ``(sum_m 1/|c_m - lam|**2)**(1/2)``.

    The first ``depth`` terms are summed exactly.  For an infinite diagonal
    the remainder is bounded by comparison with the growth floor::

        sum_{m>M} 1/(k m^a - |lam|)^2 <= 1 / ((1-r)^2 k^2 (2a-1) M^(2a-1)),

    with ``r = |lam| / (k M^a) < 1``.  The result always dominates the
    exact resolvent norm.
    """
    lam = as_complex(lam)
    depth = int(depth)
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if op.size is None and op.growth is None:
        raise ValueError("series diverges: entries accumulate at a finite point")
    if op.growth is not None and op.growth.alpha <= 0.5:
        raise ValueError(f"series may diverge: growth exponent {op.growth.alpha} <= 1/2")
    if op.size is not None:
        hi = op.size
    else:
        g = op.growth
        hi = max(depth, g.start, g.index_reaching(2.0 * abs(lam)))
    total = 0.0
    for base, vals in op._chunks(1, hi):
        d = np.abs(vals - lam)
        if np.any(d <= tol.eps_membership):
            m = base + int(np.argmin(d))
            raise InSpectrumError(f"lambda={lam} coincides with entry c_{m}")
        total += float(np.sum(1.0 / d**2))
    if op.size is None:
        g = op.growth
        r = abs(lam) / (g.k * hi**g.alpha)
        total += 1.0 / ((1.0 - r) ** 2 * g.k**2 * (2 * g.alpha - 1) * float(hi) ** (2 * g.alpha - 1))
    return math.sqrt(total)


# ---------------------------------------------------------------------------
# Normal operators with an arithmetic eigenvalue lattice


class _LatticeOperator(CoordinateOperator):
    """Shared machinery for lattices ``offset + i (phase + 2 pi k) / L``, ``k`` in Z."""

    _offset: float
    _phase: float
    _length: float

    def lattice_point(self, k: int) -> complex:
        return complex(self._offset, (self._phase + TWO_PI * k) / self._length)

    def _nearest_k(self, lam: complex) -> int:
        k0 = round((lam.imag * self._length - self._phase) / TWO_PI)
        return min((k0 - 1, k0, k0 + 1), key=lambda k: abs(self.lattice_point(k) - lam))

    def distance_to_spectrum(self, lam):
        lam = as_complex(lam)
        return abs(self.lattice_point(self._nearest_k(lam)) - lam)

    def classify_point(self, lam, tol=DEFAULT_TOLERANCE):
        if self.distance_to_spectrum(lam) <= tol.eps_membership:
            return SpectralClass.POINT
        return SpectralClass.RESOLVENT

    def operator_norm(self):
        return math.inf

    def is_compact(self):
        return False

    def has_compact_resolvent(self):
        return True

    def _lowest(self, count: int) -> list[complex]:
        ks = range(-count - 2, count + 3)
        pts = sorted((self.lattice_point(k) for k in ks), key=lambda z: (abs(z), z.imag))
        return pts[:count]

    def eigenvalues_up_to(self, bound):
        bound = _check_bound(bound)
        if bound < abs(self._offset):
            return []
        w = math.sqrt(bound**2 - self._offset**2)
        lo = math.floor((-w * self._length - self._phase) / TWO_PI) - 1
        hi = math.ceil((w * self._length - self._phase) / TWO_PI) + 1
        pts = [self.lattice_point(k) for k in range(lo, hi + 1)]
        return sorted((z for z in pts if abs(z) <= bound), key=lambda z: (abs(z), z.imag))

    def truncate(self, size):
        return np.diag(np.array(self._lowest(_check_size(size)), dtype=complex))

    def truncation_eigenvalues(self, size):
        return self._lowest(_check_size(size))

    def spectrum_min_modulus(self):
        return abs(self._lowest(1)[0])

    def truncation_horizon(self, size):
        size = _check_size(size)
        return abs(self._lowest(size + 1)[-1])


@dataclass(frozen=True)
class MultipointOperator(_LatticeOperator):
    """``u -> u'`` on ``L^2(a, b)`` with periodic condition ``u(a) = u(b)``.

    Normal, with pure point spectrum ``{2 k pi i / (b - a)}``.  ``amplitude``
    is the (nonzero) eigenfunction coefficient.
    """

    a: float
    b: float
    amplitude: complex = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)) or not self.a < self.b:
            raise ValueError(f"need a < b, got a={self.a}, b={self.b}")
        if complex(self.amplitude) == 0:
            raise ValueError("eigenfunction amplitude must be nonzero")

    @property
    def _offset(self):
        return 0.0

    @property
    def _phase(self):
        return 0.0

    @property
    def _length(self):
        return self.b - self.a

    def eigenvalue(self, k: int) -> complex:
        return multipoint_eigenvalue(k, self.a, self.b)


def multipoint_eigenvalue(k: int, a: float, b: float) -> complex:
    """``2 k pi i / (b - a)``."""
    if not a < b:
        raise ValueError(f"degenerate interval a={a}, b={b}")
    return complex(0.0, TWO_PI * int(k) / (b - a))


def multipoint_eigenfunction_eval(k: int, t: float, op: MultipointOperator) -> complex:
    if not op.a <= t <= op.b:
        raise ValueError(f"t={t} outside [{op.a}, {op.b}]")
    lam = multipoint_eigenvalue(k, op.a, op.b)
    return complex(op.amplitude) * complex(np.exp(lam * (t - op.a)))


@dataclass(frozen=True)
class VectorODEOperator(_LatticeOperator):
    """``u -> u' + s u`` on ``L^2(a, b)`` with ``u(b) = exp(i theta) u(a)``.

    The scalar stand-in for ``d/dt + S_n`` with ``S_n = s > 0`` and a phase
    as the unitary boundary operator.  Normal with eigenvalues
    ``s + i (theta + 2 k pi) / (b - a)``.
    """

    s: float
    a: float = 0.0
    b: float = 1.0
    theta: float = 0.0

    def __post_init__(self):
        if not (self.s > 0 and math.isfinite(self.s)):
            raise ValueError(f"s must be positive, got {self.s}")
        if not (math.isfinite(self.a) and math.isfinite(self.b)) or not self.a < self.b:
            raise ValueError(f"need a < b, got a={self.a}, b={self.b}")
        if not 0 <= self.theta < TWO_PI:
            raise ValueError(f"theta must lie in [0, 2pi), got {self.theta}")

    @property
    def _offset(self):
        return float(self.s)

    @property
    def _phase(self):
        return float(self.theta)

    @property
    def _length(self):
        return self.b - self.a

    def eigenvalue(self, k: int) -> complex:
        return ode_eigenvalue(k, self)

    def resolvent_bound(self, lam: PointLike) -> float:
        return ode_resolvent_bound(lam, self)


def ode_eigenvalue(k: int, op: VectorODEOperator) -> complex:
    """Eigenvalue with mode ``exp((lam - s)(t - a))`` meeting the boundary condition."""
    return op.lattice_point(int(k))


def ode_resolvent_bound(lam: PointLike, op: VectorODEOperator) -> float:
    """Closed-form upper estimate of the ODE resolvent norm.

    Square root of the sum of the Volterra-part estimate

        [2 x (a - b) - 1 + exp(2 x L)] / (4 x^2),       x = Re(lam) - s,

    and the boundary-part estimate

        (exp(2 r L) - 1) (1 - exp(x L))^-1 (exp(2 x L) - 1) / (4 r x),   r = Re(lam),

    with ``L = b - a``.  Requires ``Re(lam) < s`` and ``Re(lam) != 0``.
    """
    lam = as_complex(lam)
    r = lam.real
    if not r < op.s:
        raise ValueError(f"need Re(lambda) < s, got Re(lambda)={r}, s={op.s}")
    if r == 0:
        raise ValueError("the boundary estimate is singular at Re(lambda) = 0")
    L = op.b - op.a
    x = r - op.s
    volterra = (2 * x * (op.a - op.b) + math.expm1(2 * x * L)) / (4 * x * x)
    boundary = (
        math.expm1(2 * r * L) / (-math.expm1(x * L)) * math.expm1(2 * x * L) / (4 * r * x)
    )
    return math.sqrt(volterra + boundary)


# ---------------------------------------------------------------------------
# Operators with declared spectral parts


@dataclass(frozen=True)
class Disk:
    """Open disk; its boundary circle belongs to whichever part declares it."""

    center: complex
    radius: float

    def distance(self, z: complex) -> float:
        return max(0.0, abs(z - self.center) - self.radius)

    def contains(self, z: complex, eps: float) -> bool:
        return abs(z - self.center) < self.radius - eps


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def distance(self, z: complex) -> float:
        return abs(abs(z - self.center) - self.radius)

    def contains(self, z: complex, eps: float) -> bool:
        return self.distance(z) <= eps


SpectralPiece = Union[complex, Disk, Circle]


def _piece_distance(piece, z):
    if isinstance(piece, (Disk, Circle)):
        return piece.distance(z)
    return abs(complex(piece) - z)


def _piece_contains(piece, z, eps):
    if isinstance(piece, (Disk, Circle)):
        return piece.contains(z, eps)
    return abs(complex(piece) - z) <= eps


@dataclass(frozen=True)
class DeclaredOperator(CoordinateOperator):
    """An operator known only through declared point, residual and continuous parts.

    Each part is a tuple of points, open :class:`Disk` s and :class:`Circle` s.
    The resolvent norm is taken as ``1/dist(lam, spectrum)``, which is exact
    for normal and hyponormal operators; declaring anything else is the
    caller's responsibility.
    """

    point: tuple = ()
    continuous: tuple = ()
    residual: tuple = ()
    norm: float = math.inf
    compact: bool = False
    compact_resolvent: bool = False

    def __post_init__(self):
        for name in ("point", "continuous", "residual"):
            parts = tuple(p if isinstance(p, (Disk, Circle)) else complex(p) for p in getattr(self, name))
            object.__setattr__(self, name, parts)
        if not (self.point or self.continuous or self.residual) and math.isinf(self.norm):
            raise ValueError("an unbounded operator must have non-empty spectrum")

    @property
    def _pieces(self):
        return self.point + self.residual + self.continuous

    @property
    def pure_point(self) -> bool:
        return not self.continuous and not self.residual and all(
            not isinstance(p, (Disk, Circle)) for p in self.point
        )

    def distance_to_spectrum(self, lam):
        lam = as_complex(lam)
        if not self._pieces:
            return math.inf
        return min(_piece_distance(p, lam) for p in self._pieces)

    def classify_point(self, lam, tol=DEFAULT_TOLERANCE):
        lam = as_complex(lam)
        eps = tol.eps_membership
        for cls, parts in (
            (SpectralClass.POINT, self.point),
            (SpectralClass.RESIDUAL, self.residual),
            (SpectralClass.CONTINUOUS, self.continuous),
        ):
            if any(_piece_contains(p, lam, eps) for p in parts):
                return cls
        return SpectralClass.RESOLVENT

    def resolvent_norm(self, lam, tol=DEFAULT_TOLERANCE):
        lam = as_complex(lam)
        if self.classify_point(lam, tol) is not SpectralClass.RESOLVENT:
            return math.inf
        d = self.distance_to_spectrum(lam)
        return 0.0 if math.isinf(d) else 1.0 / d

    def operator_norm(self):
        return float(self.norm)

    def eigenvalues_up_to(self, bound):
        bound = _check_bound(bound)
        if not self.pure_point:
            raise UnsupportedModelError(f"{type(self).__name__} has non-point spectrum; cannot enumerate")
        return sorted((z for z in self.point if abs(z) <= bound), key=lambda z: (abs(z), z.imag))

    def is_compact(self):
        return bool(self.compact)

    def has_compact_resolvent(self):
        return bool(self.compact_resolvent)

    def truncate(self, size):
        size = _check_size(size)
        if not self.pure_point or not self.point:
            raise UnsupportedModelError(f"{type(self).__name__} has no spectral truncation")
        return np.diag(np.array(self.point[:size], dtype=complex))

    def truncation_eigenvalues(self, size):
        self.truncate(size)
        return list(self.point[: _check_size(size)])

    def spectrum_min_modulus(self):
        return self.distance_to_spectrum(0.0)

    def truncation_horizon(self, size):
        size = _check_size(size)
        if not self.pure_point:
            return 0.0
        rest = self.point[size:]
        return min((abs(z) for z in rest), default=math.inf)


class ShiftOperator(DeclaredOperator):
    """Unilateral right shift on ``l^2``.

    No eigenvalues; residual spectrum the open unit disk, continuous spectrum
    the unit circle, resolvent norm ``1/(|lam| - 1)`` outside.
    """

    def __init__(self):
        super().__init__(
            point=(),
            continuous=(Circle(0j, 1.0),),
            residual=(Disk(0j, 1.0),),
            norm=1.0,
            compact=False,
            compact_resolvent=False,
        )

    def __repr__(self):
        return "ShiftOperator()"

    def truncate(self, size):
        size = _check_size(size)
        return np.eye(size, k=-1, dtype=complex)

    def truncation_eigenvalues(self, size):
        # the truncated shift is nilpotent
        return [0j] * _check_size(size)
