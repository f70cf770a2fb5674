"""YAML family descriptions.

A config lists explicit coordinates under ``operators`` and, optionally, a
parametric ``tail`` whose ``generator`` is an operator template.  Any numeric
field may be given as ``{per_n: {coef, base, power, offset}}``, meaning
``coef * base**n * n**power + offset`` evaluated at the coordinate index
``n``.  Complex values are numbers, ``[re, im]`` pairs or strings such as
``"1-2j"``.

Example::

    operators:
      - kind: diagonal
        entries: {k: 3.141592653589793, alpha: 2}
      - kind: shift
    tail:
      kind: parametric
      generator:
        kind: matrix
        entries: [[{per_n: {power: -1}}]]
      norm: zero
      resolvent_at: [{point: 0, limit: infinity}]
"""

from __future__ import annotations

import hashlib
import json
import math
from typing import Annotated, Any, Literal, Optional, Union

import numpy as np
import yaml
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    ValidationError,
    model_validator,
)

from .family import (
    LIMIT_INFINITY,
    LIMIT_ZERO,
    UNKNOWN,
    Limit,
    OperatorFamily,
    TailRule,
    bounded_by,
)
from .models import (
    Circle,
    CoordinateOperator,
    DeclaredOperator,
    DiagonalOperator,
    Disk,
    FiniteMatrixOperator,
    Growth,
    MultipointOperator,
    PowerLawEntries,
    ShiftOperator,
    VectorODEOperator,
)
from .spectrum import SpecsumError, Tolerance

__all__ = [
    "ConfigError",
    "FamilyConfig",
    "load_config",
    "parse_config",
    "dump_config",
    "config_hash",
    "build_family",
    "build_operator",
]


class ConfigError(SpecsumError):
    """Invalid family description; ``errors`` holds ``(field path, message)`` pairs."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(f"{path}: {msg}" for path, msg in self.errors))


def _parse_complex(value):
    if isinstance(value, bool):
        raise ValueError("expected a number, got a boolean")
    if isinstance(value, (int, float, complex)):
        return complex(value)
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError("complex pair must be [re, im]")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", ""))
        except ValueError:
            raise ValueError(f"cannot parse {value!r} as a complex number") from None
    raise ValueError(f"expected a complex number, got {type(value).__name__}")


def _dump_complex(z: complex):
    return float(z.real) if z.imag == 0 else [float(z.real), float(z.imag)]


Cplx = Annotated[complex, BeforeValidator(_parse_complex), PlainSerializer(_dump_complex)]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class PerNParams(_Strict):
    coef: Cplx = 1.0
    base: float = 1.0
    power: float = 0.0
    offset: Cplx = 0.0


class PerN(_Strict):
    """``coef * base**n * n**power + offset``."""

    per_n: PerNParams

    def at(self, n: int) -> complex:
        p = self.per_n
        return p.coef * p.base**n * float(n) ** p.power + p.offset


RealOrN = Union[float, PerN]
CplxOrN = Union[Cplx, PerN]


def _real(value, n) -> float:
    if isinstance(value, PerN):
        z = value.at(n)
        if z.imag != 0:
            raise ValueError(f"per_n value {z} at n={n} is not real")
        return z.real
    return float(value)


def _cplx(value, n) -> complex:
    return value.at(n) if isinstance(value, PerN) else complex(value)


class RandomMatrix(_Strict):
    size: int = Field(ge=1)


class MatrixConfig(_Strict):
    kind: Literal["matrix"]
    entries: Optional[list[list[CplxOrN]]] = None
    random: Optional[RandomMatrix] = None

    @model_validator(mode="after")
    def _one_source(self):
        if (self.entries is None) == (self.random is None):
            raise ValueError("give exactly one of 'entries' or 'random'")
        return self

    def build(self, n, rng):
        if self.random is not None:
            d = self.random.size
            a = rng.uniform(-1, 1, (d, d)) + 1j * rng.uniform(-1, 1, (d, d))
            return FiniteMatrixOperator(a)
        return FiniteMatrixOperator([[_cplx(v, n) for v in row] for row in self.entries])


class PowerRule(_Strict):
    """``c_m = k m^alpha + beta``."""

    k: CplxOrN
    alpha: RealOrN
    beta: CplxOrN = 0.0


class ExplicitList(_Strict):
    values: list[CplxOrN] = Field(min_length=1)


class GrowthConfig(_Strict):
    k: RealOrN
    alpha: RealOrN
    start: int = 1


class DiagonalConfig(_Strict):
    kind: Literal["diagonal"]
    entries: Union[PowerRule, ExplicitList]
    size: Optional[int] = None
    growth: Optional[GrowthConfig] = None
    accumulation_points: list[Cplx] = []
    search_depth: int = Field(default=10_000, ge=1)

    def build(self, n, rng):
        if isinstance(self.entries, ExplicitList):
            return DiagonalOperator(
                [_cplx(v, n) for v in self.entries.values], size=self.size, growth=None,
                search_depth=self.search_depth,
            )
        k, alpha, beta = _cplx(self.entries.k, n), _real(self.entries.alpha, n), _cplx(self.entries.beta, n)
        growth = None
        if self.growth is not None:
            growth = Growth(_real(self.growth.k, n), _real(self.growth.alpha, n), self.growth.start)
        elif self.size is None and not self.accumulation_points and alpha > 0 and k != 0:
            if beta == 0 or (k.imag == 0 and beta.imag == 0 and k.real > 0 and beta.real >= 0):
                growth = Growth(abs(k), alpha)
            else:
                # |k m^a + beta| >= |k|/2 m^a once |k| m^a >= 2|beta|
                start = max(1, math.ceil((2 * abs(beta) / abs(k)) ** (1 / alpha)))
                growth = Growth(abs(k) / 2, alpha, start)
        return DiagonalOperator(
            PowerLawEntries(k, alpha, beta),
            size=self.size,
            growth=growth,
            accumulation_points=tuple(self.accumulation_points),
            search_depth=self.search_depth,
        )


class MultipointConfig(_Strict):
    kind: Literal["multipoint"]
    a: RealOrN = 0.0
    b: RealOrN = 1.0
    amplitude: Cplx = 1.0

    def build(self, n, rng):
        return MultipointOperator(_real(self.a, n), _real(self.b, n), self.amplitude)


class ODEConfig(_Strict):
    kind: Literal["ode"]
    s: RealOrN
    a: RealOrN = 0.0
    b: RealOrN = 1.0
    theta: RealOrN = 0.0

    def build(self, n, rng):
        return VectorODEOperator(_real(self.s, n), _real(self.a, n), _real(self.b, n), _real(self.theta, n))


class ShiftConfig(_Strict):
    kind: Literal["shift"]

    def build(self, n, rng):
        return ShiftOperator()


class Round(_Strict):
    center: Cplx = 0.0
    radius: float = Field(gt=0)


class DiskPiece(_Strict):
    disk: Round


class CirclePiece(_Strict):
    circle: Round


Piece = Union[DiskPiece, CirclePiece, Cplx]


def _piece(p):
    if isinstance(p, DiskPiece):
        return Disk(p.disk.center, p.disk.radius)
    if isinstance(p, CirclePiece):
        return Circle(p.circle.center, p.circle.radius)
    return complex(p)


class DeclaredConfig(_Strict):
    kind: Literal["declared"]
    point: list[Piece] = []
    continuous: list[Piece] = []
    residual: list[Piece] = []
    norm: float = math.inf
    compact: bool = False
    compact_resolvent: bool = False

    def build(self, n, rng):
        return DeclaredOperator(
            tuple(_piece(p) for p in self.point),
            tuple(_piece(p) for p in self.continuous),
            tuple(_piece(p) for p in self.residual),
            self.norm,
            self.compact,
            self.compact_resolvent,
        )


OperatorConfig = Annotated[
    Union[MatrixConfig, DiagonalConfig, MultipointConfig, ODEConfig, ShiftConfig, DeclaredConfig],
    Field(discriminator="kind"),
]


def _parse_limit(value):
    if isinstance(value, Limit):
        return value
    if isinstance(value, str) and value in ("zero", "infinity", "unknown"):
        return {"zero": LIMIT_ZERO, "infinity": LIMIT_INFINITY, "unknown": UNKNOWN}[value]
    if isinstance(value, dict) and set(value) == {"bounded"}:
        return bounded_by(float(value["bounded"]))
    raise ValueError("limit must be 'zero', 'infinity', 'unknown' or {bounded: value}")


def _dump_limit(limit: Limit):
    return {"bounded": limit.value} if limit.value is not None else limit.kind.value


LimitField = Annotated[Limit, BeforeValidator(_parse_limit), PlainSerializer(_dump_limit)]


class PointLimit(_Strict):
    point: Cplx
    limit: LimitField


class FiniteTail(_Strict):
    kind: Literal["finite"] = "finite"


class ParametricTail(_Strict):
    kind: Literal["parametric"]
    generator: OperatorConfig
    norm: LimitField = UNKNOWN
    first_eigenvalue: LimitField = UNKNOWN
    resolvent: LimitField = UNKNOWN
    resolvent_at: list[PointLimit] = []
    max_scan: int = Field(default=1000, ge=1)


TailConfig = Annotated[Union[FiniteTail, ParametricTail], Field(discriminator="kind")]


class TolerancesConfig(_Strict):
    eps_membership: float = Field(default=1e-9, gt=0)
    eps_div: float = Field(default=1e6, gt=0)


class DefaultsConfig(_Strict):
    candidate_lambda: Cplx = -1.0
    blocks: int = Field(default=3, ge=1)
    size: int = Field(default=20, ge=1)
    fit_count: int = Field(default=200, ge=8)
    fit_range: Optional[tuple[int, int]] = None
    slack: float = Field(default=0.1, ge=0)
    n_min: int = Field(default=1, ge=1)
    workers: Optional[int] = Field(default=None, ge=1)


class FamilyConfig(_Strict):
    label: str = ""
    seed: int = 0
    operators: list[OperatorConfig] = Field(min_length=1)
    tail: TailConfig = FiniteTail()
    tolerances: TolerancesConfig = TolerancesConfig()
    defaults: DefaultsConfig = DefaultsConfig()

    @property
    def tolerance(self) -> Tolerance:
        return Tolerance(self.tolerances.eps_membership, self.tolerances.eps_div)


def _path(loc) -> str:
    return ".".join(str(p) for p in loc) or "<root>"


def build_operator(cfg, n: int, rng: Optional[np.random.Generator] = None) -> CoordinateOperator:
    return cfg.build(n, rng if rng is not None else np.random.default_rng(0))


def build_family(cfg: FamilyConfig, seed: Optional[int] = None) -> OperatorFamily:
    """Instantiate the family; random matrix blocks draw from ``seed`` (default: the config's)."""
    rng = np.random.default_rng(cfg.seed if seed is None else seed)
    errors = []
    prefix = []
    for i, op_cfg in enumerate(cfg.operators):
        try:
            prefix.append(op_cfg.build(i + 1, rng))
        except (ValueError, TypeError) as exc:
            errors.append((f"operators.{i}", str(exc)))
    tail = TailRule.finite()
    if isinstance(cfg.tail, ParametricTail):
        t = cfg.tail
        # tail randomness is tied to the index so coordinate(n) is reproducible
        gen_seed = cfg.seed if seed is None else seed

        def generator(n, _t=t, _seed=gen_seed):
            return _t.generator.build(n, np.random.default_rng([_seed, n]))

        try:
            generator(len(cfg.operators) + 1)
            tail = TailRule(
                generator,
                t.norm,
                t.first_eigenvalue,
                t.resolvent,
                tuple((p.point, p.limit) for p in t.resolvent_at),
                t.max_scan,
            )
        except (ValueError, TypeError) as exc:
            errors.append(("tail.generator", str(exc)))
    if errors:
        raise ConfigError(errors)
    return OperatorFamily(tuple(prefix), tail, cfg.label)


def parse_config(data: Any) -> FamilyConfig:
    """Validate a parsed document and check every coordinate against its model."""
    if not isinstance(data, dict):
        raise ConfigError([("<root>", "config must be a mapping")])
    try:
        cfg = FamilyConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError([(_path(e["loc"]), e["msg"]) for e in exc.errors()]) from None
    build_family(cfg)
    return cfg


def load_config(path) -> FamilyConfig:
    """Read and validate a YAML config; ``OSError`` propagates for unreadable files."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError([("<document>", f"YAML syntax error: {exc}")]) from None
    return parse_config(data)


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def config_data(cfg: FamilyConfig) -> dict:
    return _plain(cfg.model_dump(mode="python"))


def dump_config(cfg: FamilyConfig) -> str:
    return yaml.safe_dump(config_data(cfg), sort_keys=False)


def config_hash(cfg: FamilyConfig) -> str:
    """SHA-256 of the canonical JSON form of the validated config."""
    text = json.dumps(config_data(cfg), sort_keys=True, separators=(",", ":"), allow_nan=True)
    return hashlib.sha256(text.encode()).hexdigest()
