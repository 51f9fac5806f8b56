from enum import Enum


class BuiltinCase(Enum):
    square_laplace = "square-laplace"
    square_lame = "square-lame"
    anisotropic_square = "anisotropic-square"
    shrinking_rigidity = "shrinking-rigidity"
    expanding_ball = "expanding-ball"
    expanding_annulus = "expanding-annulus"
    divfree_suite = "divfree-suite"
    oracle_crosscheck = "oracle-crosscheck"


class Suite(Enum):
    quadratic = "quadratic"
    lower_order_sum = "lower_order_sum"
    yang = "yang"
    sharp_gap = "sharp_gap"
    recursion = "recursion"
    rigidity = "rigidity"
    expanding_ball = "expanding_ball"
    expanding_annulus = "expanding_annulus"
    divfree = "divfree"
    mode_checks = "mode_checks"


class SpectrumSource(Enum):
    fem = "fem"
    radial = "radial"


class ProblemKind(Enum):
    scalar = "scalar"
    vector = "vector"
