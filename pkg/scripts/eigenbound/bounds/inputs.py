from dataclasses import dataclass, field

import numpy as np

from eigenbound.fields.constants import FieldConstants


DEFAULT_SLACK = 1e-9


class BoundInputError(ValueError):
    pass


def _identity_constants() -> FieldConstants:
    return FieldConstants(eps=1.0, delta=1.0, T0=0.0, eta0=0.0, C0=0.0)


@dataclass(frozen=True, eq=False)
class BoundInput:
    """Spectrum and constants fed to the bound evaluators.

    ``divnorms`` default to zeros, which is exact when ``alpha == 0``.
    """

    n: int
    alpha: float
    sigmas: np.ndarray
    divnorms: np.ndarray | None = None
    constants: FieldConstants = field(default_factory=_identity_constants)
    slack: float = DEFAULT_SLACK

    def __post_init__(self):
        sigmas = np.asarray(self.sigmas, dtype=float)
        divnorms = np.zeros_like(sigmas) if self.divnorms is None else np.asarray(self.divnorms, dtype=float)
        object.__setattr__(self, "sigmas", sigmas)
        object.__setattr__(self, "divnorms", divnorms)

        if self.n < 1:
            raise BoundInputError(f"dimension must be positive, got {self.n}")
        if self.alpha < 0:
            raise BoundInputError(f"alpha must be non-negative, got {self.alpha}")
        if sigmas.ndim != 1 or sigmas.size == 0:
            raise BoundInputError("sigmas must be a non-empty 1-D array")
        if divnorms.shape != sigmas.shape:
            raise BoundInputError(
                f"need one divnorm per eigenvalue, got {divnorms.size} for {sigmas.size}"
            )
        if sigmas[0] <= 0:
            raise BoundInputError(f"eigenvalues must be positive, got sigma_1={sigmas[0]}")
        if np.any(np.diff(sigmas) < 0):
            raise BoundInputError("eigenvalues must be sorted ascending")
        if np.any(divnorms < 0):
            raise BoundInputError("divnorms must be non-negative")
        reduced = sigmas - self.alpha * divnorms
        if np.any(reduced < -1e-10 * sigmas):
            i = int(np.argmin(reduced / sigmas))
            raise BoundInputError(
                f"sigma_{i + 1} - alpha * divnorm_{i + 1} = {reduced[i]:.6g} is negative"
            )

    @property
    def num_modes(self) -> int:
        return self.sigmas.size

    def sigma(self, i: int) -> float:
        """1-based access, matching the usual eigenvalue numbering."""
        return float(self.sigmas[i - 1])

    def require(self, count: int, what: str):
        if self.num_modes < count:
            raise BoundInputError(f"{what} needs {count} eigenvalues, got {self.num_modes}")


def compute_D0(inp: BoundInput, k: int, divide_by_delta: bool = False) -> float:
    """-alpha min_{j<=k} divnorm_j + C0 (C0 / delta for divergence-free tensors)."""
    inp.require(k, "D0")
    c0 = inp.constants.C0 / inp.constants.delta if divide_by_delta else inp.constants.C0
    d0 = -inp.alpha * float(np.min(inp.divnorms[:k])) + c0
    shifted = inp.sigmas[:k] + d0
    if np.any(shifted <= 0):
        i = int(np.argmin(shifted))
        raise BoundInputError(f"sigma_{i + 1} + D0 = {shifted[i]:.6g} is not positive")
    return d0


def compute_D1(inp: BoundInput, divide_by_delta: bool = False) -> float:
    """-alpha divnorm_1 + C0 (C0 / delta for divergence-free tensors)."""
    c0 = inp.constants.C0 / inp.constants.delta if divide_by_delta else inp.constants.C0
    return -inp.alpha * float(inp.divnorms[0]) + c0
