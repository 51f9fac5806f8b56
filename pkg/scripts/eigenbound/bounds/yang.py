"""Quadratic (Yang-type) bounds and the closed forms derived from them.

All evaluators are pure functions of a ``BoundInput``; eigenvalue indices are 1-based.
"""
import math

import numpy as np

from eigenbound.bounds.inputs import BoundInput, BoundInputError, compute_D0, compute_D1
from eigenbound.bounds.reports import BoundReport, make_report


def quadratic_factor(inp: BoundInput) -> float:
    c = inp.constants
    return 4.0 * c.delta * (inp.n * c.delta + inp.alpha) / (inp.n**2 * c.eps**2)


def gap_exponent(inp: BoundInput, tensor_scaled: bool = False) -> float:
    """2(n + alpha)/n^2, or 2 delta (n delta + alpha)/(eps^2 n^2) with tensor scaling."""
    if not tensor_scaled:
        return 2.0 * (inp.n + inp.alpha) / inp.n**2
    c = inp.constants
    return 2.0 * c.delta * (inp.n * c.delta + inp.alpha) / (c.eps**2 * inp.n**2)


def reduced_sigmas(inp: BoundInput, k: int) -> np.ndarray:
    """sigma_i - alpha ||div_eta u_i||^2, with round-off negatives clamped to 0."""
    sig = inp.sigmas[:k]
    rad = sig - inp.alpha * inp.divnorms[:k]
    if np.any(rad < -1e-10 * sig):
        raise BoundInputError("sigma_i - alpha * divnorm_i is negative")
    return np.maximum(rad, 0.0)


def quadratic_sides(inp: BoundInput, k: int, factor: float, terms: np.ndarray):
    """sum (s_{k+1} - s_i)^2 and factor * sum (s_{k+1} - s_i) * terms_i."""
    inp.require(k + 1, f"quadratic bound at k={k}")
    gaps = inp.sigma(k + 1) - inp.sigmas[:k]
    return float(np.sum(gaps**2)), float(factor * np.sum(gaps * terms))


def eval_thm_quadratic(inp: BoundInput, k: int) -> BoundReport:
    c = inp.constants
    rad = reduced_sigmas(inp, k)
    terms = (np.sqrt(rad) + c.T0 / (2.0 * math.sqrt(c.delta))) ** 2 + c.C0 / c.delta
    lhs, rhs = quadratic_sides(inp, k, quadratic_factor(inp), terms)
    return make_report("thm_quadratic", "quadratic", k, lhs, rhs, inp.slack)


def eval_identity_quadratic(inp: BoundInput, k: int) -> BoundReport:
    """T = I form with per-mode divnorms: terms sigma_i - alpha divnorm_i + C0."""
    terms = reduced_sigmas(inp, k) + inp.constants.C0
    factor = 4.0 * (inp.n + inp.alpha) / inp.n**2
    lhs, rhs = quadratic_sides(inp, k, factor, terms)
    return make_report("identity_quadratic", "quadratic", k, lhs, rhs, inp.slack)


def yang_report(inp: BoundInput, k: int, d0: float, id: str, family: str = "quadratic") -> BoundReport:
    factor = 4.0 * (inp.n + inp.alpha) / inp.n**2
    lhs, rhs = quadratic_sides(inp, k, factor, inp.sigmas[:k] + d0)
    return make_report(id, family, k, lhs, rhs, inp.slack)


def eval_yang_D0(inp: BoundInput, k: int) -> BoundReport:
    return yang_report(inp, k, compute_D0(inp, k), "yang_D0")


def eval_yang_classical(inp: BoundInput, k: int) -> BoundReport:
    """The D0 = 0 variant."""
    return yang_report(inp, k, 0.0, "yang_classical")


def eval_yang_suite(inp: BoundInput, k: int) -> list[BoundReport]:
    """The D0 report, plus the classical variant whenever D0 <= 0 makes it a consequence."""
    d0 = compute_D0(inp, k)
    reports = [yang_report(inp, k, d0, "yang_D0")]
    if d0 <= 0:
        reports.append(eval_yang_classical(inp, k))
    return reports


def lower_order_sum_lhs(inp: BoundInput) -> float:
    inp.require(inp.n + 1, "lower-order sum")
    return float(np.sum(inp.sigmas[1 : inp.n + 1] - inp.sigmas[0]))


def eval_lower_order_sum(inp: BoundInput) -> list[BoundReport]:
    c = inp.constants
    lhs = lower_order_sum_lhs(inp)
    rad = reduced_sigmas(inp, 1)[0]
    bracket = (math.sqrt(rad) + c.T0 / (2.0 * math.sqrt(c.delta))) ** 2 + c.C0 / c.delta
    rhs = 4.0 * c.delta * (c.delta + inp.alpha) / c.eps**2 * bracket
    reports = [make_report("lower_order_sum", "lower_order_sum", inp.n, lhs, rhs, inp.slack)]
    if c.is_identity_context():
        identity_rhs = 4.0 * (1.0 + inp.alpha) * (inp.sigma(1) + compute_D1(inp))
        reports.append(
            make_report("lower_order_sum_identity", "lower_order_sum", inp.n, lhs, identity_rhs, inp.slack)
        )
    return reports


def sharpgap_reports(
    inp: BoundInput, k: int, c: float, d0: float, prefix: str, family: str = "sharp_gap"
) -> tuple[BoundReport, BoundReport]:
    inp.require(k + 1, f"sharp-gap bound at k={k}")
    sig = inp.sigmas[:k]
    mean = float(np.mean(sig + d0))
    variance = float(np.mean((sig - np.mean(sig)) ** 2))
    radicand = (c * mean) ** 2 - (1.0 + 2.0 * c) * variance
    if radicand < -1e-12 * mean**2:
        raise BoundInputError(f"sharp-gap radicand {radicand:.6g} is negative at k={k}")
    root = math.sqrt(max(radicand, 0.0))
    level = make_report(
        f"{prefix}_level", family, k, inp.sigma(k + 1) + d0, (1.0 + c) * mean + root, inp.slack
    )
    gap = make_report(
        f"{prefix}_gap", family, k, inp.sigma(k + 1) - inp.sigma(k), 2.0 * root, inp.slack
    )
    return level, gap


def eval_sharpgap(inp: BoundInput, k: int) -> tuple[BoundReport, BoundReport]:
    return sharpgap_reports(inp, k, gap_exponent(inp), compute_D0(inp, k), "sharp_gap")


def recursion_report(
    inp: BoundInput, k: int, c: float, d0: float, id: str, family: str = "recursion"
) -> BoundReport:
    inp.require(k + 1, f"recursion bound at k={k}")
    if inp.sigma(1) + d0 <= 0:
        raise BoundInputError(f"sigma_1 + D0 = {inp.sigma(1) + d0:.6g} is not positive")
    rhs = (1.0 + 2.0 * c) * k**c * (inp.sigma(1) + d0)
    return make_report(id, family, k, inp.sigma(k + 1) + d0, rhs, inp.slack)


def eval_recursion(inp: BoundInput, k: int) -> BoundReport:
    return recursion_report(inp, k, gap_exponent(inp), compute_D0(inp, k), "recursion")
