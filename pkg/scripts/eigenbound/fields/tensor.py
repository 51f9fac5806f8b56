from enum import Enum
from dataclasses import dataclass

import numpy as np


class TensorKind(Enum):
    identity = "identity"
    scaled = "scaled"
    diagonal = "diagonal"
    affine_conformal = "affine_conformal"
    constant_symmetric = "constant_symmetric"


@dataclass(frozen=True)
class TensorField:
    """Symmetric 2x2 coefficient field T(x).

    ``affine_conformal`` is (1 + beta * x_1) I; every other kind is constant.
    """

    kind: TensorKind
    scale: float = 1.0
    diag: tuple[float, float] = (1.0, 1.0)
    beta: float = 0.0
    entries: tuple[tuple[float, float], tuple[float, float]] = ((1.0, 0.0), (0.0, 1.0))

    def __post_init__(self):
        if self.kind == TensorKind.scaled and self.scale <= 0:
            raise ValueError(f"scaled tensor needs a positive factor, got {self.scale}")
        if self.kind == TensorKind.diagonal and min(self.diag) <= 0:
            raise ValueError(f"diagonal tensor needs positive entries, got {self.diag}")
        if self.kind == TensorKind.constant_symmetric:
            a = np.asarray(self.entries, dtype=float)
            if a.shape != (2, 2) or a[0, 1] != a[1, 0]:
                raise ValueError(f"constant tensor must be a symmetric 2x2 matrix, got {self.entries}")
            if np.linalg.eigvalsh(a)[0] <= 0:
                raise ValueError(f"constant tensor must be positive definite, got {self.entries}")

    @property
    def is_constant(self) -> bool:
        return self.kind != TensorKind.affine_conformal or self.beta == 0.0

    @property
    def is_divergence_free(self) -> bool:
        return self.is_constant

    @property
    def is_scalar_multiple(self) -> bool:
        if self.kind in (TensorKind.identity, TensorKind.scaled):
            return True
        if self.kind == TensorKind.diagonal:
            return self.diag[0] == self.diag[1]
        return False

    def constant_matrix(self) -> np.ndarray:
        if self.kind == TensorKind.identity:
            return np.eye(2)
        if self.kind == TensorKind.scaled:
            return self.scale * np.eye(2)
        if self.kind == TensorKind.diagonal:
            return np.diag(np.asarray(self.diag, dtype=float))
        if self.kind == TensorKind.constant_symmetric:
            return np.asarray(self.entries, dtype=float)
        if self.beta == 0.0:
            return np.eye(2)
        raise ValueError("affine_conformal tensor is not constant")

    def _conformal_factor(self, x: np.ndarray) -> np.ndarray:
        return 1.0 + self.beta * x[..., 0]

    def matrix(self, points) -> np.ndarray:
        x = np.asarray(points, dtype=float)
        if self.kind == TensorKind.affine_conformal:
            return self._conformal_factor(x)[..., None, None] * np.eye(2)
        a = self.constant_matrix()
        return np.broadcast_to(a, x.shape[:-1] + (2, 2))

    def squared(self, points) -> np.ndarray:
        t = self.matrix(points)
        return t @ t

    def divergence(self, points) -> np.ndarray:
        """tr(grad T) with components sum_i d_i T_ij."""
        x = np.asarray(points, dtype=float)
        out = np.zeros(x.shape)
        if self.kind == TensorKind.affine_conformal:
            out[..., 0] = self.beta
        return out

    def squared_divergence(self, points) -> np.ndarray:
        """sum_i d_i (T^2)_ij, the divergence of T^2."""
        x = np.asarray(points, dtype=float)
        out = np.zeros(x.shape)
        if self.kind == TensorKind.affine_conformal:
            out[..., 0] = 2.0 * self.beta * self._conformal_factor(x)
        return out


def identity_tensor() -> TensorField:
    return TensorField(TensorKind.identity)


def scaled_tensor(c: float) -> TensorField:
    return TensorField(TensorKind.scaled, scale=float(c))


def diagonal_tensor(d1: float, d2: float) -> TensorField:
    return TensorField(TensorKind.diagonal, diag=(float(d1), float(d2)))


def affine_conformal_tensor(beta: float) -> TensorField:
    return TensorField(TensorKind.affine_conformal, beta=float(beta))


def constant_symmetric_tensor(matrix) -> TensorField:
    a = np.asarray(matrix, dtype=float)
    entries = ((float(a[0, 0]), float(a[0, 1])), (float(a[1, 0]), float(a[1, 1])))
    return TensorField(TensorKind.constant_symmetric, entries=entries)
