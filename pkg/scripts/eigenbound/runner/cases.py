"""Pinned builtin experiments."""
from eigenbound.runner.config import ExperimentConfig, parse_config
from eigenbound.utils.scenarios import BuiltinCase

_SOLITON_ANNULUS = {"kind": "soliton_annulus", "index": 1, "lam": 1.0}
_RADIAL = {"ell_max": 12, "grid_size": 2000}

BUILTIN_CASES = {
    BuiltinCase.square_laplace: {
        "domain": {"kind": "rectangle", "widths": [1.0, 1.0]},
        "resolution": 64,
        "k": 10,
        "suite": ["quadratic", "lower_order_sum", "yang", "sharp_gap", "recursion", "mode_checks"],
    },
    BuiltinCase.square_lame: {
        "domain": {"kind": "rectangle", "widths": [1.0, 1.0]},
        "problem": "vector",
        "alpha": 1.0,
        "resolution": 32,
        "k": 8,
        "suite": ["quadratic", "lower_order_sum", "yang", "sharp_gap", "recursion", "mode_checks"],
    },
    BuiltinCase.anisotropic_square: {
        "domain": {"kind": "rectangle", "widths": [1.0, 1.0]},
        "tensor": {"kind": "diagonal", "diag": [2.0, 3.0]},
        "resolution": 64,
        "k": 8,
        "suite": ["quadratic", "lower_order_sum", "divfree", "mode_checks"],
    },
    BuiltinCase.shrinking_rigidity: {
        "domain": dict(_SOLITON_ANNULUS),
        "drift": {"kind": "gaussian_soliton", "lam": 1.0},
        "spectrum_source": "radial",
        "radial": dict(_RADIAL),
        "k": 10,
        "suite": ["rigidity", "quadratic", "lower_order_sum", "yang", "sharp_gap", "recursion"],
    },
    BuiltinCase.expanding_ball: {
        "domain": {"kind": "ball", "radius": 1.0},
        "drift": {"kind": "gaussian_soliton", "lam": -1.0},
        "resolution": 16,
        "k": 6,
        "suite": ["expanding_ball", "quadratic", "lower_order_sum", "mode_checks"],
    },
    BuiltinCase.expanding_annulus: {
        "domain": {"kind": "soliton_annulus", "index": 1, "lam": -1.0},
        "drift": {"kind": "gaussian_soliton", "lam": -1.0},
        "spectrum_source": "radial",
        "radial": dict(_RADIAL),
        "k": 6,
        "suite": ["expanding_annulus", "quadratic", "lower_order_sum"],
    },
    BuiltinCase.divfree_suite: {
        "domain": {"kind": "rectangle", "widths": [1.0, 1.0]},
        "tensor": {"kind": "constant_symmetric", "matrix": [[2.0, 0.5], [0.5, 1.5]]},
        "drift": {"kind": "gaussian_soliton", "lam": 1.0},
        "problem": "vector",
        "alpha": 0.5,
        "resolution": 24,
        "k": 8,
        "suite": ["divfree", "quadratic", "lower_order_sum", "mode_checks"],
    },
    BuiltinCase.oracle_crosscheck: {
        "domain": dict(_SOLITON_ANNULUS),
        "drift": {"kind": "gaussian_soliton", "lam": 1.0},
        "resolution": 36,
        "k": 8,
        "radial": dict(_RADIAL),
        "crosscheck": {"enabled": True, "tolerance": 5e-3},
        "suite": ["rigidity", "mode_checks"],
    },
}


def builtin_names() -> list[str]:
    return [case.value for case in BuiltinCase]


def builtin_config(case: BuiltinCase | str) -> ExperimentConfig:
    case = BuiltinCase(case)
    return parse_config({"name": case.value, **BUILTIN_CASES[case]})
