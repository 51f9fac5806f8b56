"""Bounds for divergence-free tensors, where T0 = 0 and C0 enters divided by delta."""
from eigenbound.bounds.inputs import BoundInput, BoundInputError, compute_D0, compute_D1
from eigenbound.bounds.reports import BoundReport, make_report
from eigenbound.bounds.yang import (
    reduced_sigmas,
    gap_exponent,
    lower_order_sum_lhs,
    quadratic_factor,
    quadratic_sides,
    recursion_report,
    sharpgap_reports,
)

DIVFREE_T0_TOL = 1e-12


def eval_divfree_quadratic(inp: BoundInput, k: int) -> BoundReport:
    c = inp.constants
    terms = reduced_sigmas(inp, k) + c.C0 / c.delta
    lhs, rhs = quadratic_sides(inp, k, quadratic_factor(inp), terms)
    return make_report("divfree_quadratic", "divfree", k, lhs, rhs, inp.slack)


def eval_divfree_lower_order_sum(inp: BoundInput) -> BoundReport:
    c = inp.constants
    rhs = 4.0 * c.delta * (c.delta + inp.alpha) / c.eps**2 * (inp.sigma(1) + compute_D1(inp, divide_by_delta=True))
    return make_report("divfree_lower_order_sum", "divfree", inp.n, lower_order_sum_lhs(inp), rhs, inp.slack)


def eval_divfree_suite(inp: BoundInput, k: int) -> list[BoundReport]:
    if inp.constants.T0 > DIVFREE_T0_TOL:
        raise BoundInputError(f"divergence-free suite needs T0 = 0, got {inp.constants.T0:.3e}")
    c = gap_exponent(inp, tensor_scaled=True)
    d0 = compute_D0(inp, k, divide_by_delta=True)
    level, gap = sharpgap_reports(inp, k, c, d0, "divfree_sharp_gap", family="divfree")
    return [
        eval_divfree_quadratic(inp, k),
        eval_divfree_lower_order_sum(inp),
        level,
        gap,
        recursion_report(inp, k, c, d0, "divfree_recursion", family="divfree"),
    ]
