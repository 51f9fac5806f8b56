"""Strict JSON experiment configuration.

Every validation failure raises ``ConfigError`` whose message starts with the
dotted path of the offending field, e.g. ``alpha`` or ``domain.radius``.
"""
import json
import numbers

import attr
import attrs

from eigenbound.geometry.domains import (
    DomainError,
    DomainKind,
    DomainSpec,
    annulus,
    ball,
    rectangle,
    soliton_annulus_spec,
)
from eigenbound.fields.drift import (
    DriftField,
    DriftKind,
    constant_drift,
    gaussian_soliton,
    partial_isoparametric,
)
from eigenbound.fields.tensor import (
    TensorField,
    TensorKind,
    affine_conformal_tensor,
    constant_symmetric_tensor,
    diagonal_tensor,
    identity_tensor,
    scaled_tensor,
)
from eigenbound.utils.scenarios import ProblemKind, SpectrumSource, Suite

IDENTITY_ONLY_SUITES = {
    Suite.yang,
    Suite.sharp_gap,
    Suite.recursion,
    Suite.rigidity,
    Suite.expanding_ball,
    Suite.expanding_annulus,
}


class ConfigError(ValueError):
    def __init__(self, path: str, detail: str):
        super().__init__(f"{path}: {detail}")
        self.path = path
        self.detail = detail


def _join(prefix: str, name: str) -> str:
    return f"{prefix}.{name}" if prefix else name


def _is_number(value) -> bool:
    return isinstance(value, numbers.Real) and not isinstance(value, bool)


def _is_int(value) -> bool:
    return isinstance(value, numbers.Integral) and not isinstance(value, bool)


def _check(predicate, message: str):
    def validator(instance, attribute, value):
        if not predicate(value):
            raise ConfigError(attribute.name, message.format(value=value))

    return validator


def _optional(predicate):
    return lambda v: v is None or predicate(v)


def _enum_values(enum) -> list[str]:
    return [e.value for e in enum]


def _one_of(enum):
    values = _enum_values(enum)
    return _check(lambda v: v in values, "{value!r} is not one of " + ", ".join(values))


_number = _check(_is_number, "expected a number, got {value!r}")
_non_negative = _check(lambda v: _is_number(v) and v >= 0, "must be a non-negative number, got {value!r}")
_positive = _check(lambda v: _is_number(v) and v > 0, "must be a positive number, got {value!r}")
_positive_int = _check(lambda v: _is_int(v) and v >= 1, "must be a positive integer, got {value!r}")
_pair = _check(
    lambda v: isinstance(v, (list, tuple)) and len(v) == 2 and all(_is_number(x) for x in v),
    "expected two numbers, got {value!r}",
)


@attrs.define(frozen=True)
class DomainConfig:
    kind: str = attrs.field(validator=_one_of(DomainKind))
    widths: tuple = attrs.field(default=(1.0, 1.0), converter=tuple, validator=_pair)
    radius: float | None = attrs.field(default=None, validator=_check(_optional(_is_number), "expected a number"))
    inner_radius: float | None = attrs.field(default=None, validator=_check(_optional(_is_number), "expected a number"))
    outer_radius: float | None = attrs.field(default=None, validator=_check(_optional(_is_number), "expected a number"))
    index: int = attrs.field(default=1, validator=_positive_int)
    lam: float | None = attrs.field(default=None, validator=_check(_optional(_is_number), "expected a number"))
    dim: int = attrs.field(default=2, validator=_check(lambda v: _is_int(v) and v >= 2, "must be an integer >= 2"))

    def to_spec(self) -> DomainSpec:
        kind = DomainKind(self.kind)
        try:
            if kind == DomainKind.rectangle:
                return rectangle(*self.widths)
            if kind == DomainKind.ball:
                if self.radius is None:
                    raise ConfigError("radius", "required for a ball")
                return ball(self.radius, self.dim)
            if kind == DomainKind.annulus:
                if self.inner_radius is None or self.outer_radius is None:
                    raise ConfigError("inner_radius", "inner_radius and outer_radius are required for an annulus")
                return annulus(self.inner_radius, self.outer_radius, self.dim)
            if self.lam is None:
                raise ConfigError("lam", "required for a soliton annulus")
            return soliton_annulus_spec(self.index, self.lam, self.dim)
        except DomainError as e:
            raise ConfigError("domain", str(e)) from None


@attrs.define(frozen=True)
class DriftConfig:
    kind: str = attrs.field(default=DriftKind.constant.value, validator=_one_of(DriftKind))
    value: float = attrs.field(default=0.0, validator=_number)
    lam: float = attrs.field(default=0.0, validator=_number)
    axes: int = attrs.field(default=1, validator=_check(lambda v: _is_int(v) and v in (1, 2), "must be 1 or 2"))
    offset: float = attrs.field(default=0.0, validator=_number)

    def to_field(self, dim: int = 2) -> DriftField:
        kind = DriftKind(self.kind)
        if kind == DriftKind.constant:
            return constant_drift(self.value + self.offset)
        if kind == DriftKind.gaussian_soliton:
            return gaussian_soliton(self.lam, dim=dim, offset=self.offset)
        return partial_isoparametric(self.lam, self.axes, offset=self.offset)


@attrs.define(frozen=True)
class TensorConfig:
    kind: str = attrs.field(default=TensorKind.identity.value, validator=_one_of(TensorKind))
    scale: float = attrs.field(default=1.0, validator=_positive)
    diag: tuple = attrs.field(default=(1.0, 1.0), converter=tuple, validator=_pair)
    beta: float = attrs.field(default=0.0, validator=_number)
    matrix: tuple = attrs.field(
        default=((1.0, 0.0), (0.0, 1.0)),
        converter=lambda rows: tuple(tuple(r) if isinstance(r, (list, tuple)) else r for r in rows),
        validator=_check(
            lambda m: len(m) == 2 and all(isinstance(r, tuple) and len(r) == 2 and all(map(_is_number, r)) for r in m),
            "expected a 2x2 matrix, got {value!r}",
        ),
    )

    def to_field(self) -> TensorField:
        kind = TensorKind(self.kind)
        try:
            if kind == TensorKind.identity:
                return identity_tensor()
            if kind == TensorKind.scaled:
                return scaled_tensor(self.scale)
            if kind == TensorKind.diagonal:
                return diagonal_tensor(*self.diag)
            if kind == TensorKind.affine_conformal:
                return affine_conformal_tensor(self.beta)
            return constant_symmetric_tensor(self.matrix)
        except ValueError as e:
            raise ConfigError("tensor", str(e)) from None


@attrs.define(frozen=True)
class SolverConfig:
    tol: float = attrs.field(default=1e-9, validator=_positive)
    seed: int = attrs.field(default=42, validator=_check(_is_int, "expected an integer"))
    max_iter: int = attrs.field(default=5000, validator=_positive_int)
    dense_limit: int = attrs.field(default=3000, validator=_check(lambda v: _is_int(v) and v >= 0, "must be >= 0"))


@attrs.define(frozen=True)
class RadialConfig:
    ell_max: int = attrs.field(default=12, validator=_check(lambda v: _is_int(v) and v >= 0, "must be >= 0"))
    grid_size: int = attrs.field(default=2000, validator=_check(lambda v: _is_int(v) and v >= 4, "must be >= 4"))


@attrs.define(frozen=True)
class CrosscheckConfig:
    enabled: bool = attrs.field(default=False, validator=_check(lambda v: isinstance(v, bool), "expected true or false"))
    tolerance: float = attrs.field(default=5e-3, validator=_positive)


_NESTED = {
    "domain": DomainConfig,
    "drift": DriftConfig,
    "tensor": TensorConfig,
    "solver": SolverConfig,
    "radial": RadialConfig,
    "crosscheck": CrosscheckConfig,
}


@attrs.define(frozen=True)
class ExperimentConfig:
    domain: DomainConfig
    name: str = attrs.field(default="experiment", validator=_check(lambda v: isinstance(v, str) and v, "expected a name"))
    drift: DriftConfig = attrs.field(factory=DriftConfig)
    tensor: TensorConfig = attrs.field(factory=TensorConfig)
    alpha: float = attrs.field(default=0.0, validator=_non_negative)
    problem: str = attrs.field(default=ProblemKind.scalar.value, validator=_one_of(ProblemKind))
    spectrum_source: str = attrs.field(default=SpectrumSource.fem.value, validator=_one_of(SpectrumSource))
    resolution: int = attrs.field(default=32, validator=_check(lambda v: _is_int(v) and v >= 2, "must be an integer >= 2"))
    k: int = attrs.field(default=10, validator=_positive_int)
    solver: SolverConfig = attrs.field(factory=SolverConfig)
    radial: RadialConfig = attrs.field(factory=RadialConfig)
    crosscheck: CrosscheckConfig = attrs.field(factory=CrosscheckConfig)
    suite: tuple = attrs.field(
        default=(Suite.quadratic.value,),
        converter=tuple,
        validator=_check(
            lambda v: all(s in _enum_values(Suite) for s in v),
            "entries must be among " + ", ".join(_enum_values(Suite)) + ", got {value!r}",
        ),
    )
    slack: float = attrs.field(default=1e-9, validator=_non_negative)
    analytic_constants: bool = attrs.field(default=True, validator=_check(lambda v: isinstance(v, bool), "expected true or false"))
    emit_plots: bool = attrs.field(default=False, validator=_check(lambda v: isinstance(v, bool), "expected true or false"))
    output_dir: str = attrs.field(default="output", validator=_check(lambda v: isinstance(v, str), "expected a path"))

    def __attrs_post_init__(self):
        suites = self.suites
        radial = self.source == SpectrumSource.radial
        if self.problem_kind == ProblemKind.vector and self.domain.dim != 2:
            raise ConfigError("problem", "vector problems are planar (domain.dim = 2)")
        if not radial and self.domain.dim != 2:
            raise ConfigError("domain.dim", "finite elements need a planar domain")
        if radial or self.crosscheck.enabled:
            where = "spectrum_source" if radial else "crosscheck.enabled"
            if self.domain.kind == DomainKind.rectangle.value:
                raise ConfigError(where, "the radial oracle needs a ball or an annulus")
            if self.drift.kind == DriftKind.partial_isoparametric.value:
                raise ConfigError(where, "the radial oracle needs a radial drift")
            if self.tensor.kind != TensorKind.identity.value:
                raise ConfigError(where, "the radial oracle needs tensor.kind = identity")
            if self.problem_kind != ProblemKind.scalar or self.alpha != 0:
                raise ConfigError(where, "the radial oracle solves scalar problems with alpha = 0")
        if self.tensor.kind != TensorKind.identity.value:
            restricted = sorted(s.value for s in suites if s in IDENTITY_ONLY_SUITES)
            if restricted:
                raise ConfigError("suite", f"{', '.join(restricted)} need tensor.kind = identity")
        if Suite.divfree in suites and self.tensor.kind == TensorKind.affine_conformal.value and self.tensor.beta != 0:
            raise ConfigError("suite", "divfree needs a divergence-free tensor")
        if radial and Suite.mode_checks in suites:
            raise ConfigError("suite", "mode_checks needs finite-element eigenvectors")

    @property
    def suites(self) -> list[Suite]:
        return [Suite(s) for s in self.suite]

    @property
    def source(self) -> SpectrumSource:
        return SpectrumSource(self.spectrum_source)

    @property
    def problem_kind(self) -> ProblemKind:
        return ProblemKind(self.problem)


def _structure(cls, data, path: str):
    if not isinstance(data, dict):
        raise ConfigError(path or "config", "expected a JSON object")
    fields = attrs.fields(cls)
    names = {a.name for a in fields}
    unknown = sorted(set(data) - names)
    if unknown:
        raise ConfigError(_join(path, unknown[0]), "unknown key")

    kwargs = {}
    for a in fields:
        if a.name not in data:
            if a.default is attrs.NOTHING:
                raise ConfigError(_join(path, a.name), "missing required key")
            continue
        value = data[a.name]
        if a.name in _NESTED and cls is ExperimentConfig:
            value = _structure(_NESTED[a.name], value, _join(path, a.name))
        kwargs[a.name] = value
    try:
        return cls(**kwargs)
    except ConfigError as e:
        raise ConfigError(_join(path, e.path), e.detail) from None
    except (TypeError, ValueError) as e:
        raise ConfigError(path or "config", str(e)) from None


def parse_config(data: dict) -> ExperimentConfig:
    return _structure(ExperimentConfig, data, "")


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path) as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError("config", f"invalid JSON in {path}: {e}") from None
    return parse_config(data)


def config_to_dict(config: ExperimentConfig) -> dict:
    return attr.asdict(config, retain_collection_types=False)
