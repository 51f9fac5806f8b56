"""Bounds specific to the Gaussian soliton drift eta = lam/2 |x|^2 with T = I and alpha = 0."""
import math

from eigenbound.bounds.inputs import BoundInput, BoundInputError
from eigenbound.bounds.reports import BoundReport, make_report
from eigenbound.bounds.yang import (
    lower_order_sum_lhs,
    recursion_report,
    sharpgap_reports,
    yang_report,
)

RIGIDITY_C0_TOL = 1e-12


def _require_drifted_laplacian(inp: BoundInput, what: str):
    if inp.alpha != 0:
        raise BoundInputError(f"{what} needs alpha = 0, got {inp.alpha}")
    if not inp.constants.is_identity_context():
        raise BoundInputError(f"{what} needs T = I (eps = delta = 1, T0 = 0)")


def _certify_C0(inp: BoundInput, expected: float, what: str):
    got = inp.constants.C0
    if abs(got - expected) > 1e-12 * max(1.0, abs(expected)):
        raise BoundInputError(f"{what} needs C0 = {expected:.17g}, got {got:.17g}")


def eval_rigidity_suite(inp: BoundInput, k: int) -> list[BoundReport]:
    """Classical Laplacian-form inequalities applied verbatim to drifted eigenvalues.

    Every shift constant is forced to 0; the premise is C0 = 0.
    """
    _require_drifted_laplacian(inp, "rigidity suite")
    if abs(inp.constants.C0) > RIGIDITY_C0_TOL:
        raise BoundInputError(f"rigidity suite needs C0 = 0, got {inp.constants.C0:.3e}")

    c = 2.0 / inp.n
    level, gap = sharpgap_reports(inp, k, c, 0.0, "rigidity_sharp_gap", family="rigidity")
    return [
        yang_report(inp, k, 0.0, "rigidity_quadratic", family="rigidity"),
        level,
        gap,
        recursion_report(inp, k, c, 0.0, "rigidity_recursion", family="rigidity"),
        make_report(
            "rigidity_lower_order_sum",
            "rigidity",
            inp.n,
            lower_order_sum_lhs(inp),
            4.0 * inp.sigma(1),
            inp.slack,
        ),
    ]


def expanding_ball_first_bound(n: int, r: float, lam: float) -> float:
    """pi^2 n / (64 r^2) - lam n / 2."""
    return math.pi**2 * n / (64.0 * r**2) - lam * n / 2.0


def eval_expanding_ball(inp: BoundInput, r: float, lam: float) -> tuple[BoundReport, BoundReport]:
    if lam >= 0:
        raise BoundInputError(f"expanding soliton needs lam < 0, got {lam}")
    _require_drifted_laplacian(inp, "expanding ball bounds")
    _certify_C0(inp, lam * inp.n / 2.0, "expanding ball bounds")

    first = make_report(
        "expanding_ball_first",
        "expanding_soliton",
        1,
        expanding_ball_first_bound(inp.n, r, lam),
        inp.sigma(1),
        inp.slack,
    )
    lower_sum = make_report(
        "expanding_ball_lower_order_sum",
        "expanding_soliton",
        inp.n,
        lower_order_sum_lhs(inp),
        4.0 * (inp.sigma(1) + lam * inp.n / 2.0),
        inp.slack,
    )
    return first, lower_sum


def eval_expanding_ball_gap(inp: BoundInput, lam: float) -> BoundReport:
    """sigma_2 - sigma_1 <= (4/n) sigma_1 + 2 lam, the recursion bound at k = 1 with D0 = lam n / 2."""
    if lam >= 0:
        raise BoundInputError(f"expanding soliton needs lam < 0, got {lam}")
    _require_drifted_laplacian(inp, "expanding ball gap")
    inp.require(2, "expanding ball gap")
    return make_report(
        "expanding_ball_gap",
        "expanding_soliton",
        1,
        inp.sigma(2) - inp.sigma(1),
        4.0 / inp.n * inp.sigma(1) + 2.0 * lam,
        inp.slack,
    )


def eval_expanding_annulus(inp: BoundInput, lam: float) -> BoundReport:
    """sum_{i<=n} (sigma_{i+1} - sigma_1) <= 4 (sigma_1 + lam n) on the soliton annuli, where C0 = lam n."""
    if lam >= 0:
        raise BoundInputError(f"expanding soliton needs lam < 0, got {lam}")
    _require_drifted_laplacian(inp, "expanding annulus bound")
    _certify_C0(inp, lam * inp.n, "expanding annulus bound")
    return make_report(
        "expanding_annulus_lower_order_sum",
        "expanding_soliton",
        inp.n,
        lower_order_sum_lhs(inp),
        4.0 * (inp.sigma(1) + lam * inp.n),
        inp.slack,
    )
