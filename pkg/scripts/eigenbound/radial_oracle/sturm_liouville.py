import math
import logging
from dataclasses import dataclass, field

import numpy as np
import tqdm
from scipy.linalg import eigh_tridiagonal

from eigenbound.geometry.domains import DomainKind, DomainSpec
from eigenbound.fields.drift import DriftField, constant_drift

logger = logging.getLogger(__name__)


class OracleResolutionError(RuntimeError):
    pass


@dataclass(frozen=True)
class RadialProblem:
    """Scalar drifted Laplacian on the ball (inner_radius == 0) or annulus
    inner_radius < |x| < outer_radius in R^n, with a radial drift."""

    inner_radius: float
    outer_radius: float
    n: int = 2
    drift: DriftField = field(default_factory=constant_drift)
    ell_max: int = 12
    grid_size: int = 2000

    def __post_init__(self):
        if not 0 <= self.inner_radius < self.outer_radius:
            raise ValueError(
                f"need 0 <= a < b, got a={self.inner_radius}, b={self.outer_radius}"
            )
        if self.n < 2:
            raise ValueError(f"dimension must be at least 2, got {self.n}")
        if not self.drift.is_radial:
            raise ValueError(f"{self.drift.kind.value} drift is not radial")
        if self.ell_max < 0 or self.grid_size < 4:
            raise ValueError("need ell_max >= 0 and grid_size >= 4")

    @property
    def is_ball(self) -> bool:
        return self.inner_radius == 0.0


def radial_problem(spec: DomainSpec, drift: DriftField, ell_max: int = 12, grid_size: int = 2000) -> RadialProblem:
    if spec.kind == DomainKind.rectangle:
        raise ValueError("the radial oracle needs a ball or an annulus")
    return RadialProblem(
        inner_radius=spec.inner_radius,
        outer_radius=spec.outer_radius,
        n=spec.dim,
        drift=drift,
        ell_max=ell_max,
        grid_size=grid_size,
    )


def harmonic_multiplicity(ell: int, n: int) -> int:
    """Dimension of the degree-ell spherical harmonics on S^{n-1}."""
    if ell == 0:
        return 1
    lower = math.comb(ell + n - 3, n - 1) if ell + n - 3 >= 0 else 0
    return math.comb(ell + n - 1, n - 1) - lower


def _tridiagonal_residuals(d: np.ndarray, e: np.ndarray, w: np.ndarray, y: np.ndarray) -> np.ndarray:
    """||(T - w I) y|| / (||T||_inf ||y||) per column of y."""
    Ty = d[:, None] * y
    Ty[:-1] += e[:, None] * y[1:]
    Ty[1:] += e[:, None] * y[:-1]
    row_sums = np.abs(d)
    row_sums[:-1] += np.abs(e)
    row_sums[1:] += np.abs(e)
    num = np.linalg.norm(Ty - y * w[None, :], axis=0)
    return num / (row_sums.max() * np.linalg.norm(y, axis=0))


def _branch_eigenpairs(problem: RadialProblem, ell: int, count: int, cells: int):
    """Cell-centred finite volumes for -(p R')' + q R = sigma m R with
    p = m = e^{-eta} rho^{n-1} and q = m ell(ell + n - 2) / rho^2.

    Returns the eigenvalues and the relative residuals of the symmetrized
    tridiagonal pairs."""
    a, b, n = problem.inner_radius, problem.outer_radius, problem.n
    # the spectrum does not see the offset of eta
    eta, _ = problem.drift.shifted(-problem.drift.offset).radial_profile()
    h = (b - a) / cells
    centers = a + (np.arange(cells) + 0.5) * h
    faces = a + np.arange(cells + 1) * h

    p = np.exp(-eta(faces)) * faces ** (n - 1)
    m = np.exp(-eta(centers)) * centers ** (n - 1)
    q = m * ell * (ell + n - 2) / centers**2

    diag = (p[:-1] + p[1:]) / h**2 + q
    # Dirichlet through a mirrored ghost cell; the ball centre has p = 0 and needs nothing
    diag[-1] += p[-1] / h**2
    if a > 0:
        diag[0] += p[0] / h**2
    off = -p[1:-1] / h**2

    scale = 1.0 / np.sqrt(m)
    d = diag * scale**2
    e = off * scale[:-1] * scale[1:]
    count = min(count, cells)
    w, y = eigh_tridiagonal(d, e, select="i", select_range=(0, count - 1))
    return w, _tridiagonal_residuals(d, e, w, y)


def _branch(problem: RadialProblem, ell: int, count: int, cells: int, richardson: bool):
    coarse, residuals = _branch_eigenpairs(problem, ell, count, cells)
    if not richardson:
        return coarse, residuals
    fine, residuals = _branch_eigenpairs(problem, ell, count, 2 * cells)
    fine, residuals = fine[: coarse.size], residuals[: coarse.size]
    return (4.0 * fine - coarse) / 3.0, residuals


def radial_branch(
    problem: RadialProblem,
    ell: int,
    count: int,
    grid_size: int | None = None,
    richardson: bool = True,
) -> np.ndarray:
    """Smallest ``count`` eigenvalues of angular branch ``ell``, Richardson-extrapolated
    once from ``grid_size`` and ``2 * grid_size`` cells unless ``richardson`` is False."""
    cells = problem.grid_size if grid_size is None else grid_size
    return _branch(problem, ell, count, cells, richardson)[0]


@dataclass(frozen=True, eq=False)
class RadialSpectrum:
    """``residuals`` belong to the finest tridiagonal solve behind each value."""

    sigmas: np.ndarray
    ells: np.ndarray
    branches: dict
    residuals: np.ndarray

    @property
    def k(self) -> int:
        return self.sigmas.size


def radial_spectrum(problem: RadialProblem, k: int, show_progress: bool = False) -> RadialSpectrum:
    """First ``k`` eigenvalues over all branches ell = 0..ell_max, each repeated by
    its multiplicity; ties keep the smaller ell first."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    branches = {}
    entries = []
    for ell in tqdm.tqdm(range(problem.ell_max + 1), desc="radial branches", disable=not show_progress):
        values, residuals = _branch(problem, ell, k, problem.grid_size, richardson=True)
        branches[ell] = values
        mult = harmonic_multiplicity(ell, problem.n)
        entries.extend((float(s), ell, float(r)) for s, r in zip(values, residuals) for _ in range(mult))

    entries.sort(key=lambda item: (item[0], item[1]))
    accepted = entries[:k]
    if len(accepted) < k:
        raise OracleResolutionError(f"only {len(accepted)} eigenvalues available, need {k}")
    last = accepted[-1][0]
    ceiling = float(branches[problem.ell_max][0])
    if last > ceiling:
        raise OracleResolutionError(
            f"ell_max={problem.ell_max} cannot certify the first {k} eigenvalues "
            f"(sigma_{k}={last:.10g} exceeds the lowest ell_max eigenvalue {ceiling:.10g}); "
            "increase ell_max"
        )
    logger.info(
        "radial oracle: n=%d ell_max=%d grid=%d sigma_1=%.10g",
        problem.n,
        problem.ell_max,
        problem.grid_size,
        accepted[0][0],
    )
    return RadialSpectrum(
        sigmas=np.array([s for s, _, _ in accepted]),
        ells=np.array([ell for _, ell, _ in accepted], dtype=int),
        branches=branches,
        residuals=np.array([r for _, _, r in accepted]),
    )
