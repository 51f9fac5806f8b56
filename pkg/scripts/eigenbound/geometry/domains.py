import math
from enum import Enum
from fractions import Fraction
from dataclasses import dataclass, field

import numpy as np


class DomainError(ValueError):
    pass


class DomainKind(Enum):
    rectangle = "rectangle"
    ball = "ball"
    annulus = "annulus"
    soliton_annulus = "soliton_annulus"


@dataclass(frozen=True)
class DomainSpec:
    """Parametric bounded domain centred at the origin (rectangles sit in the
    positive quadrant with one corner at the origin).

    Balls are annuli with ``inner_radius == 0``. ``soliton_annulus`` stores the
    index ``l``, the soliton constant ``lam`` and the ambient dimension ``dim``
    together with exact rational radii so that derived constants can be
    evaluated without rounding.
    """

    kind: DomainKind
    widths: tuple[float, float] = (1.0, 1.0)
    inner_radius: float = 0.0
    outer_radius: float = 1.0
    dim: int = 2
    index: int | None = None
    lam: float | None = None
    inner_radius_sq_exact: Fraction | None = field(default=None, compare=False)
    outer_radius_exact: Fraction | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind == DomainKind.rectangle:
            if len(self.widths) != 2 or min(self.widths) <= 0:
                raise DomainError(f"rectangle widths must be positive, got {self.widths}")
        elif self.kind == DomainKind.ball:
            if self.outer_radius <= 0:
                raise DomainError(f"ball radius must be positive, got {self.outer_radius}")
            if self.inner_radius != 0:
                raise DomainError("ball must have inner_radius 0")
        else:
            if not 0 < self.inner_radius < self.outer_radius:
                raise DomainError(
                    f"annulus needs 0 < a < b, got a={self.inner_radius}, b={self.outer_radius}"
                )
        if self.dim < 2:
            raise DomainError(f"dimension must be at least 2, got {self.dim}")

    @property
    def is_curved(self) -> bool:
        return self.kind != DomainKind.rectangle

    @property
    def centroid(self) -> np.ndarray:
        if self.kind == DomainKind.rectangle:
            return 0.5 * np.asarray(self.widths, dtype=float)
        return np.zeros(2)

    @property
    def area(self) -> float:
        """Analytic area of the planar domain."""
        if self.kind == DomainKind.rectangle:
            return float(self.widths[0] * self.widths[1])
        return math.pi * (self.outer_radius**2 - self.inner_radius**2)

    @property
    def min_radius_sq(self) -> Fraction:
        """min |x|^2 over the closed domain, as an exact rational."""
        if self.kind == DomainKind.soliton_annulus and self.inner_radius_sq_exact is not None:
            return self.inner_radius_sq_exact
        if self.kind == DomainKind.annulus:
            return Fraction(self.inner_radius) ** 2
        return Fraction(0)

    @property
    def max_radius(self) -> float:
        """max |x| over the closed domain."""
        if self.kind == DomainKind.rectangle:
            return math.hypot(*self.widths)
        return self.outer_radius

    def axis_range(self, axis: int) -> tuple[float, float]:
        if self.kind == DomainKind.rectangle:
            return 0.0, float(self.widths[axis])
        return -self.outer_radius, self.outer_radius

    def axis_abs_max(self, axes: int) -> float:
        """max |(x_1, ..., x_axes)| over the closed domain."""
        if self.kind == DomainKind.rectangle:
            return math.hypot(*self.widths[:axes])
        return self.outer_radius

    def axis_abs_min_sq(self, axes: int) -> Fraction:
        """min |(x_1, ..., x_axes)|^2 over the closed domain."""
        if axes >= self.dim:
            return self.min_radius_sq
        return Fraction(0)


def rectangle(width: float = 1.0, height: float = 1.0) -> DomainSpec:
    return DomainSpec(DomainKind.rectangle, widths=(float(width), float(height)))


def ball(radius: float, dim: int = 2) -> DomainSpec:
    return DomainSpec(DomainKind.ball, inner_radius=0.0, outer_radius=float(radius), dim=dim)


def annulus(inner_radius: float, outer_radius: float, dim: int = 2) -> DomainSpec:
    return DomainSpec(
        DomainKind.annulus,
        inner_radius=float(inner_radius),
        outer_radius=float(outer_radius),
        dim=dim,
    )


def soliton_annulus_spec(l: int, lam: float, n: int = 2) -> DomainSpec:
    """Annulus 2n/|lam| < |x|^2 < r_l^2 of the Gaussian soliton family.

    r_l is the first multiple of 1/4 strictly above sqrt(2n/|lam|), plus
    (l - 1)/2, so it is rational by construction.
    """
    if lam == 0:
        raise DomainError("soliton constant lam must be nonzero")
    if n < 2:
        raise DomainError(f"ambient dimension must be at least 2, got {n}")
    if l < 1:
        raise DomainError(f"family index must be positive, got {l}")

    inner_sq = Fraction(2 * n) / abs(Fraction(lam))
    inner = math.sqrt(float(inner_sq))
    quarters = math.floor(inner * 4)
    # floor(inner * 4) can be off by one ulp when inner * 4 is an integer
    while Fraction(quarters + 1, 4) ** 2 <= inner_sq:
        quarters += 1
    while quarters > 0 and Fraction(quarters, 4) ** 2 > inner_sq:
        quarters -= 1
    outer = Fraction(quarters + 1, 4) + Fraction(l - 1, 2)

    return DomainSpec(
        DomainKind.soliton_annulus,
        inner_radius=inner,
        outer_radius=float(outer),
        dim=n,
        index=l,
        lam=float(lam),
        inner_radius_sq_exact=inner_sq,
        outer_radius_exact=outer,
    )
