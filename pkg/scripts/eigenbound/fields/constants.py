import logging
from fractions import Fraction
from dataclasses import dataclass, field, asdict

import numpy as np

from eigenbound.geometry.domains import DomainKind, DomainSpec
from eigenbound.geometry.mesh import Mesh
from eigenbound.fields.drift import DriftField
from eigenbound.fields.tensor import TensorField, TensorKind

logger = logging.getLogger(__name__)

ANALYTIC = "analytic"
NUMERIC = "numeric"


class FieldError(ValueError):
    def __init__(self, message: str, point=None):
        super().__init__(message)
        self.point = None if point is None else tuple(float(v) for v in point)


@dataclass(frozen=True)
class FieldConstants:
    """Pointwise spectral bounds of T and the drift/tensor sups entering the
    eigenvalue bounds. ``provenance`` maps each constant to ANALYTIC or NUMERIC."""

    eps: float
    delta: float
    T0: float
    eta0: float
    C0: float
    C0_sup_term: float = 0.0
    C0_coupling_term: float = 0.0
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0 < self.eps <= self.delta:
            raise FieldError(f"need 0 < eps <= delta, got eps={self.eps}, delta={self.delta}")
        if self.T0 < 0 or self.eta0 < 0:
            raise FieldError(f"T0 and eta0 must be non-negative, got {self.T0}, {self.eta0}")

    def is_identity_context(self, tol: float = 1e-12) -> bool:
        return abs(self.eps - 1.0) <= tol and abs(self.delta - 1.0) <= tol and self.T0 <= tol

    def to_dict(self) -> dict:
        return asdict(self)


def _sample(mesh: Mesh) -> np.ndarray:
    return mesh.sample_points()


def _eps_delta(T: TensorField, mesh: Mesh, analytic: bool):
    if analytic:
        if T.kind == TensorKind.identity:
            return 1.0, 1.0, ANALYTIC
        if T.kind == TensorKind.scaled:
            return T.scale, T.scale, ANALYTIC
        if T.kind == TensorKind.diagonal:
            return float(min(T.diag)), float(max(T.diag)), ANALYTIC
        if T.kind == TensorKind.constant_symmetric:
            w = np.linalg.eigvalsh(T.constant_matrix())
            return float(w[0]), float(w[1]), ANALYTIC
        # (1 + beta x_1) is monotone in x_1, so its extremes sit on the ends of the x_1 range
        lo, hi = mesh.spec.axis_range(0)
        ends = np.array([[lo, 0.0], [hi, 0.0]])
        factors = 1.0 + T.beta * ends[:, 0]
        if factors.min() <= 0:
            bad = ends[int(np.argmin(factors))]
            raise FieldError(f"tensor is not positive definite at x={tuple(bad)}", point=bad)
        return float(factors.min()), float(factors.max()), ANALYTIC

    points = _sample(mesh)
    w = np.linalg.eigvalsh(T.matrix(points))
    if np.any(w[:, 0] <= 0):
        bad = points[int(np.argmin(w[:, 0]))]
        raise FieldError(f"tensor is not positive definite at x={tuple(bad)}", point=bad)
    return float(w[:, 0].min()), float(w[:, 1].max()), NUMERIC


def compute_eps_delta(T: TensorField, mesh: Mesh, analytic: bool = True):
    eps, delta, _ = _eps_delta(T, mesh, analytic)
    return eps, delta


def _T0(T: TensorField, mesh: Mesh, analytic: bool):
    if analytic:
        return (abs(T.beta) if T.kind == TensorKind.affine_conformal else 0.0), ANALYTIC
    div = T.divergence(_sample(mesh))
    return float(np.linalg.norm(div, axis=1).max()), NUMERIC


def compute_T0(T: TensorField, mesh: Mesh, analytic: bool = True) -> float:
    return _T0(T, mesh, analytic)[0]


def _eta0(eta: DriftField, mesh: Mesh, analytic: bool):
    if eta.is_constant:
        return 0.0, ANALYTIC
    if analytic:
        reach = mesh.spec.axis_abs_max(eta.active_axes)
        return abs(eta.lam) * reach, ANALYTIC
    grad = eta.gradient(_sample(mesh))
    return float(np.linalg.norm(grad, axis=1).max()), NUMERIC


def compute_eta0(eta: DriftField, mesh: Mesh, analytic: bool = True) -> float:
    return _eta0(eta, mesh, analytic)[0]


def _fd_divergence(flux, points: np.ndarray, step: float) -> np.ndarray:
    div = np.zeros(points.shape[0])
    for i in range(points.shape[1]):
        e = np.zeros(points.shape[1])
        e[i] = step
        div += (flux(points + e)[:, i] - flux(points - e)[:, i]) / (2.0 * step)
    return div


def c0_density(T: TensorField, eta: DriftField, points, fd_step: float | None = None) -> np.ndarray:
    """1/2 div(T^2 grad eta) - 1/4 |T grad eta|^2 at each point."""
    points = np.asarray(points, dtype=float)
    grad = eta.gradient(points)
    t_grad = np.einsum("...ij,...j->...i", T.matrix(points), grad)
    if fd_step is None:
        div = np.einsum("...j,...j->...", T.squared_divergence(points), grad)
        div = div + np.einsum("...ij,...ij->...", T.squared(points), eta.hessian(points))
    else:
        div = _fd_divergence(
            lambda p: np.einsum("...ij,...j->...i", T.squared(p), eta.gradient(p)),
            points,
            fd_step,
        )
    return 0.5 * div - 0.25 * np.sum(t_grad**2, axis=-1)


def _analytic_sup_term(T: TensorField, eta: DriftField, spec: DomainSpec) -> float:
    """Closed-form sup for a constant tensor A and a quadratic catalog drift.

    The density is lam/2 tr(A^2 P) - lam^2/4 (Px)^T A^2 (Px) with P the
    projection onto the active axes, so the sup sits where |Px| is smallest.
    """
    k = eta.active_axes
    min_sq = spec.axis_abs_min_sq(k)
    lam = Fraction(eta.lam)
    if T.is_scalar_multiple:
        c_sq = Fraction(float(T.constant_matrix()[0, 0])) ** 2
        return float(lam / 2 * c_sq * k - lam**2 / 4 * c_sq * min_sq)

    a_sq = T.constant_matrix() @ T.constant_matrix()
    block = a_sq[:k, :k]
    trace_part = 0.5 * eta.lam * float(np.trace(block))
    if min_sq == 0:
        return trace_part
    return trace_part - 0.25 * eta.lam**2 * float(np.linalg.eigvalsh(block)[0]) * float(min_sq)


def compute_C0_terms(
    T: TensorField,
    eta: DriftField,
    mesh: Mesh,
    delta: float,
    T0: float,
    eta0: float,
    analytic: bool = True,
    finite_difference: bool = False,
):
    """Returns (sup term, (delta/2) T0 eta0 term, provenance of the sup term)."""
    coupling = 0.5 * delta * T0 * eta0
    if eta.is_constant:
        return 0.0, coupling, ANALYTIC
    if analytic and not finite_difference and T.is_constant:
        return _analytic_sup_term(T, eta, mesh.spec), coupling, ANALYTIC

    step = 1e-5 * mesh.h if finite_difference else None
    sup = float(c0_density(T, eta, _sample(mesh), fd_step=step).max())
    return sup, coupling, NUMERIC


def compute_C0(
    T: TensorField,
    eta: DriftField,
    mesh: Mesh,
    delta: float,
    T0: float,
    eta0: float,
    analytic: bool = True,
    finite_difference: bool = False,
) -> float:
    sup, coupling, _ = compute_C0_terms(T, eta, mesh, delta, T0, eta0, analytic, finite_difference)
    return sup + coupling


def field_constants(
    T: TensorField,
    eta: DriftField,
    mesh: Mesh,
    analytic: bool = True,
    finite_difference: bool = False,
) -> FieldConstants:
    eps, delta, src_ed = _eps_delta(T, mesh, analytic)
    T0, src_t0 = _T0(T, mesh, analytic)
    eta0, src_eta0 = _eta0(eta, mesh, analytic)
    sup, coupling, src_c0 = compute_C0_terms(
        T, eta, mesh, delta, T0, eta0, analytic, finite_difference
    )
    constants = FieldConstants(
        eps=eps,
        delta=delta,
        T0=T0,
        eta0=eta0,
        C0=sup + coupling,
        C0_sup_term=sup,
        C0_coupling_term=coupling,
        provenance={
            "eps": src_ed,
            "delta": src_ed,
            "T0": src_t0,
            "eta0": src_eta0,
            "C0": src_c0 if src_t0 == ANALYTIC and src_eta0 == ANALYTIC else NUMERIC,
        },
    )
    logger.info(
        "field constants: eps=%.6g delta=%.6g T0=%.6g eta0=%.6g C0=%.6g",
        eps,
        delta,
        T0,
        eta0,
        constants.C0,
    )
    return constants


def soliton_constants(spec: DomainSpec, lam: float) -> FieldConstants:
    """Constants for T = I and eta = lam/2 |x|^2 on a ball or annulus of any
    dimension; C0 = lam n / 2 - lam^2 min|x|^2 / 4, evaluated exactly."""
    if spec.kind == DomainKind.rectangle:
        raise FieldError("soliton constants need a ball or an annulus")
    n = spec.dim
    exact_lam = Fraction(lam)
    c0 = float(exact_lam * n / 2 - exact_lam**2 / 4 * spec.min_radius_sq)
    outer = spec.outer_radius_exact if spec.outer_radius_exact is not None else spec.outer_radius
    eta0 = float(abs(exact_lam) * Fraction(outer))
    return FieldConstants(
        eps=1.0,
        delta=1.0,
        T0=0.0,
        eta0=eta0,
        C0=c0,
        C0_sup_term=c0,
        C0_coupling_term=0.0,
        provenance={k: ANALYTIC for k in ("eps", "delta", "T0", "eta0", "C0")},
    )


def verify_isoparametric(eta: DriftField, mesh: Mesh, profile=None) -> float:
    """Max over quadrature points of ||grad eta|^2 - b(eta)| and |lap eta - a(eta)|."""
    profile = eta.profile if profile is None else profile
    if not (callable(getattr(profile, "a", None)) and callable(getattr(profile, "b", None))):
        raise FieldError(f"{eta.kind.value} drift has no isoparametric profile a, b")
    points = mesh.quad_points.reshape(-1, 2)
    values = eta.value(points)
    grad_sq = np.sum(eta.gradient(points) ** 2, axis=1)
    transnormal = np.abs(grad_sq - profile.b(values))
    mean_curvature = np.abs(eta.laplacian(points) - profile.a(values))
    return float(max(transnormal.max(), mean_curvature.max()))
