from enum import Enum
from dataclasses import dataclass, replace

import numpy as np


class DriftKind(Enum):
    constant = "constant"
    gaussian_soliton = "gaussian_soliton"
    partial_isoparametric = "partial_isoparametric"


@dataclass(frozen=True)
class IsoparametricProfile:
    """Linear profile pair with |grad f|^2 = b(f) and lap f = a(f).

    ``a(f) = a0`` and ``b(f) = b1 * (f - f0)``; every catalog drift has this form.
    """

    a0: float
    b1: float
    f0: float = 0.0

    def a(self, f):
        return np.full_like(np.asarray(f, dtype=float), self.a0)

    def b(self, f):
        return self.b1 * (np.asarray(f, dtype=float) - self.f0)


@dataclass(frozen=True)
class DriftField:
    """Drift potential eta with closed-form derivatives.

    ``constant``: eta = offset.
    ``gaussian_soliton``: eta = lam/2 |x|^2 + offset, in ``dim`` dimensions.
    ``partial_isoparametric``: eta = lam/2 (x_1^2 + ... + x_axes^2) + offset.

    Points are arrays of shape (..., 2).
    """

    kind: DriftKind
    lam: float = 0.0
    axes: int = 2
    offset: float = 0.0
    dim: int = 2

    def __post_init__(self):
        if self.kind == DriftKind.partial_isoparametric and not 1 <= self.axes <= self.dim:
            raise ValueError(f"partial drift needs 1 <= axes <= {self.dim}, got {self.axes}")

    @property
    def active_axes(self) -> int:
        if self.kind == DriftKind.constant:
            return 0
        if self.kind == DriftKind.gaussian_soliton:
            return self.dim
        return self.axes

    @property
    def is_constant(self) -> bool:
        return self.kind == DriftKind.constant or self.lam == 0.0

    @property
    def is_radial(self) -> bool:
        return self.kind in (DriftKind.constant, DriftKind.gaussian_soliton)

    def _mask(self, points: np.ndarray) -> np.ndarray:
        width = points.shape[-1]
        mask = np.zeros(width)
        mask[: min(self.active_axes, width)] = 1.0
        return mask

    def value(self, points) -> np.ndarray:
        x = np.asarray(points, dtype=float)
        if self.kind == DriftKind.constant:
            return np.full(x.shape[:-1], self.offset)
        return 0.5 * self.lam * np.sum(self._mask(x) * x * x, axis=-1) + self.offset

    def gradient(self, points) -> np.ndarray:
        x = np.asarray(points, dtype=float)
        if self.kind == DriftKind.constant:
            return np.zeros_like(x)
        return self.lam * self._mask(x) * x

    def laplacian(self, points) -> np.ndarray:
        x = np.asarray(points, dtype=float)
        return np.full(x.shape[:-1], self.lam * self.active_axes)

    def hessian(self, points) -> np.ndarray:
        x = np.asarray(points, dtype=float)
        h = self.lam * np.diag(self._mask(x))
        return np.broadcast_to(h, x.shape[:-1] + h.shape)

    def shifted(self, c: float) -> "DriftField":
        return replace(self, offset=self.offset + c)

    @property
    def profile(self) -> IsoparametricProfile:
        if self.kind == DriftKind.constant:
            return IsoparametricProfile(a0=0.0, b1=0.0, f0=self.offset)
        return IsoparametricProfile(
            a0=self.lam * self.active_axes, b1=2.0 * self.lam, f0=self.offset
        )

    def radial_profile(self):
        """(eta(rho), eta'(rho)) callables for radially symmetric drifts."""
        if not self.is_radial:
            raise ValueError(f"{self.kind.value} drift is not radial")
        lam = 0.0 if self.kind == DriftKind.constant else self.lam
        offset = self.offset

        def eta(rho):
            return 0.5 * lam * np.asarray(rho, dtype=float) ** 2 + offset

        def deta(rho):
            return lam * np.asarray(rho, dtype=float)

        return eta, deta


def constant_drift(value: float = 0.0) -> DriftField:
    return DriftField(DriftKind.constant, offset=float(value))


def gaussian_soliton(lam: float, dim: int = 2, offset: float = 0.0) -> DriftField:
    return DriftField(DriftKind.gaussian_soliton, lam=float(lam), dim=dim, offset=float(offset))


def partial_isoparametric(lam: float, axes: int, offset: float = 0.0) -> DriftField:
    return DriftField(DriftKind.partial_isoparametric, lam=float(lam), axes=axes, offset=float(offset))
