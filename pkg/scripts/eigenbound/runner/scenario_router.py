import logging
from dataclasses import dataclass, field

import numpy as np

from eigenbound.assembly.forms import DiscreteSystem, assemble_system
from eigenbound.bounds import (
    BoundInput,
    BoundInputError,
    BoundReport,
    compute_D0,
    compute_D1,
    eval_divfree_suite,
    eval_expanding_annulus,
    eval_expanding_ball,
    eval_expanding_ball_gap,
    eval_identity_quadratic,
    eval_lower_order_sum,
    eval_mode_checks,
    eval_oracle_agreement,
    eval_recursion,
    eval_rigidity_suite,
    eval_sharpgap,
    eval_thm_quadratic,
    eval_yang_suite,
)
from eigenbound.eigensolve.modes import mode_quantities
from eigenbound.eigensolve.solver import solve_smallest
from eigenbound.fields.constants import FieldConstants, field_constants, soliton_constants
from eigenbound.fields.drift import DriftField, DriftKind
from eigenbound.geometry.domains import DomainKind, DomainSpec
from eigenbound.geometry.mesh import Mesh, build_mesh
from eigenbound.radial_oracle import radial_problem, radial_spectrum
from eigenbound.runner.config import ExperimentConfig
from eigenbound.utils.scenarios import ProblemKind, SpectrumSource, Suite

logger = logging.getLogger(__name__)

RIGIDITY_MAX_K = 8


@dataclass(eq=False)
class ExperimentResult:
    config: ExperimentConfig
    n: int
    sigmas: np.ndarray
    residuals: np.ndarray
    divnorms: np.ndarray
    t_energy: np.ndarray | None
    constants: FieldConstants
    method: str
    tol: float
    t_gradnorm_sq: np.ndarray | None = None
    oracle_sigmas: np.ndarray | None = None
    reports: list[BoundReport] = field(default_factory=list)
    D0: float | None = None
    D1: float | None = None

    @property
    def residuals_ok(self) -> bool:
        return bool(np.all(self.residuals <= self.tol))

    @property
    def all_satisfied(self) -> bool:
        return all(r.satisfied for r in self.reports)

    @property
    def exit_status(self) -> int:
        return 0 if self.all_satisfied and self.residuals_ok else 2


def build_problem(config: ExperimentConfig) -> tuple[DomainSpec, DriftField, object]:
    spec = config.domain.to_spec()
    return spec, config.drift.to_field(spec.dim), config.tensor.to_field()


def build_system(config: ExperimentConfig) -> tuple[Mesh, DiscreteSystem]:
    spec, eta, T = build_problem(config)
    mesh = build_mesh(spec, config.resolution)
    vector = config.problem_kind == ProblemKind.vector
    return mesh, assemble_system(mesh, T, eta, config.alpha, vector=vector)


def _oracle_sigmas(config: ExperimentConfig, spec: DomainSpec, eta: DriftField) -> np.ndarray:
    problem = radial_problem(spec, eta, config.radial.ell_max, config.radial.grid_size)
    return radial_spectrum(problem, config.k).sigmas


def _radial_constants(spec: DomainSpec, eta: DriftField) -> FieldConstants:
    lam = 0.0 if eta.kind == DriftKind.constant else eta.lam
    return soliton_constants(spec, lam)


def compute_spectrum(config: ExperimentConfig) -> ExperimentResult:
    spec, eta, T = build_problem(config)
    tol = config.solver.tol

    if config.source == SpectrumSource.radial:
        problem = radial_problem(spec, eta, config.radial.ell_max, config.radial.grid_size)
        oracle = radial_spectrum(problem, config.k)
        # no eigenvectors, so no energy split; scalar modes carry no divergence
        return ExperimentResult(
            config=config,
            n=spec.dim,
            sigmas=oracle.sigmas,
            residuals=oracle.residuals,
            divnorms=np.zeros_like(oracle.sigmas),
            t_energy=None,
            constants=_radial_constants(spec, eta),
            method="radial",
            tol=tol,
        )

    mesh, system = build_system(config)
    spectrum = solve_smallest(
        system.A,
        system.M,
        config.k,
        tol=tol,
        seed=config.solver.seed,
        max_iter=config.solver.max_iter,
        dense_limit=config.solver.dense_limit,
    )
    modes = mode_quantities(spectrum, system.stiffness, system.coupling, mesh, T, eta, config.alpha)
    oracle = _oracle_sigmas(config, spec, eta) if config.crosscheck.enabled else None
    return ExperimentResult(
        config=config,
        n=spec.dim,
        sigmas=spectrum.sigmas,
        residuals=spectrum.residuals,
        divnorms=modes.divnorm,
        t_energy=modes.t_energy,
        t_gradnorm_sq=modes.t_gradnorm_sq,
        constants=field_constants(T, eta, mesh, analytic=config.analytic_constants),
        method=spectrum.method,
        tol=tol,
        oracle_sigmas=oracle,
    )


def _quadratic(inp: BoundInput, kmax: int) -> list[BoundReport]:
    reports = [eval_thm_quadratic(inp, k) for k in range(1, kmax + 1)]
    if inp.constants.is_identity_context():
        reports += [eval_identity_quadratic(inp, k) for k in range(1, kmax + 1)]
    return reports


def _lower_order_sum(inp: BoundInput, kmax: int) -> list[BoundReport]:
    if inp.num_modes < inp.n + 1:
        logger.warning("lower-order sums need %d eigenvalues, have %d", inp.n + 1, inp.num_modes)
        return []
    return eval_lower_order_sum(inp)


def _yang(inp: BoundInput, kmax: int) -> list[BoundReport]:
    return [r for k in range(1, kmax + 1) for r in eval_yang_suite(inp, k)]


def _sharp_gap(inp: BoundInput, kmax: int) -> list[BoundReport]:
    return [r for k in range(1, kmax + 1) for r in eval_sharpgap(inp, k)]


def _recursion(inp: BoundInput, kmax: int) -> list[BoundReport]:
    return [eval_recursion(inp, k) for k in range(1, kmax + 1)]


def _rigidity(inp: BoundInput, kmax: int) -> list[BoundReport]:
    return [r for k in range(1, min(RIGIDITY_MAX_K, kmax) + 1) for r in eval_rigidity_suite(inp, k)]


def _divfree(inp: BoundInput, kmax: int) -> list[BoundReport]:
    return [r for k in range(1, kmax + 1) for r in eval_divfree_suite(inp, k)]


def _soliton_lam(config: ExperimentConfig) -> float:
    if config.drift.kind != DriftKind.gaussian_soliton.value:
        raise BoundInputError("expanding soliton bounds need a gaussian_soliton drift")
    return config.drift.lam


def _expanding_ball(inp: BoundInput, kmax: int, config: ExperimentConfig, spec: DomainSpec) -> list[BoundReport]:
    if spec.kind != DomainKind.ball:
        raise BoundInputError("expanding_ball bounds need a ball domain")
    lam = _soliton_lam(config)
    reports = list(eval_expanding_ball(inp, spec.outer_radius, lam))
    if inp.num_modes >= 2:
        reports.append(eval_expanding_ball_gap(inp, lam))
    return reports


def _expanding_annulus(inp: BoundInput, kmax: int, config: ExperimentConfig, spec: DomainSpec) -> list[BoundReport]:
    if spec.kind == DomainKind.rectangle or spec.kind == DomainKind.ball:
        raise BoundInputError("expanding_annulus bounds need an annulus domain")
    return [eval_expanding_annulus(inp, _soliton_lam(config))]


def suite_router(suite: Suite):
    if suite == Suite.quadratic:
        return _quadratic
    elif suite == Suite.lower_order_sum:
        return _lower_order_sum
    elif suite == Suite.yang:
        return _yang
    elif suite == Suite.sharp_gap:
        return _sharp_gap
    elif suite == Suite.recursion:
        return _recursion
    elif suite == Suite.rigidity:
        return _rigidity
    elif suite == Suite.divfree:
        return _divfree
    else:
        raise ValueError(f"Suite {suite} not implemented")


def _dedupe(reports: list[BoundReport]) -> list[BoundReport]:
    seen = set()
    out = []
    for r in reports:
        key = (r.id, r.k)
        if key not in seen:
            seen.add(key)
            out.append(r)
    return out


def evaluate_suites(result: ExperimentResult) -> list[BoundReport]:
    config = result.config
    spec = config.domain.to_spec()
    inp = BoundInput(
        n=result.n,
        alpha=config.alpha,
        sigmas=result.sigmas,
        divnorms=result.divnorms,
        constants=result.constants,
        slack=config.slack,
    )
    kmax = inp.num_modes - 1

    reports = []
    for suite in config.suites:
        if suite == Suite.mode_checks:
            reports += eval_mode_checks(
                result.sigmas,
                result.divnorms,
                result.t_energy,
                result.t_gradnorm_sq,
                config.alpha,
                result.constants.delta,
                config.slack,
            )
        elif suite == Suite.expanding_ball:
            reports += _expanding_ball(inp, kmax, config, spec)
        elif suite == Suite.expanding_annulus:
            reports += _expanding_annulus(inp, kmax, config, spec)
        else:
            reports += suite_router(suite)(inp, kmax)
    if result.oracle_sigmas is not None:
        reports += eval_oracle_agreement(
            result.sigmas, result.oracle_sigmas, config.crosscheck.tolerance, config.slack
        )

    result.reports = _dedupe(reports)
    result.D0, result.D1 = _shift_constants(inp, kmax)
    return result.reports


def _shift_constants(inp: BoundInput, kmax: int):
    try:
        d0 = compute_D0(inp, max(kmax, 1))
    except BoundInputError:
        d0 = None
    try:
        d1 = compute_D1(inp)
    except BoundInputError:
        d1 = None
    return d0, d1


def run_config(config: ExperimentConfig) -> ExperimentResult:
    result = compute_spectrum(config)
    evaluate_suites(result)
    violated = [f"{r.id}[k={r.k}]" for r in result.reports if not r.satisfied]
    logger.info("%s: %d reports, %d violated", config.name, len(result.reports), len(violated))
    if violated:
        logger.warning("%s: violated %s", config.name, ", ".join(violated))
    return result
