"""Numerical verification and sharpness exploration for Zygmund-type L^p
inequalities on polar derivatives of complex polynomials with restricted
zeros."""

__version__ = "0.1.0"

from .circlequad import (INF, QuadratureResult, QuadratureSpec, circle_integral,
                         cp_constant, cp_constant_gamma, double_circle_integral,
                         lp_norm, sup_norm)
from .families import FamilySpec, SampleBatch, Side
from .inequalities import HypothesisError, InequalityParams, InequalityReport
from .polycore import (LacunaryShape, Polynomial, RootMultiset,
                       conjugate_reciprocal, derivative, evaluate, from_roots,
                       matches_lacunary, min_root_modulus, polar_derivative,
                       roots)

__all__ = [
    "INF", "QuadratureResult", "QuadratureSpec", "circle_integral",
    "cp_constant", "cp_constant_gamma", "double_circle_integral", "lp_norm",
    "sup_norm", "FamilySpec", "SampleBatch", "Side", "HypothesisError",
    "InequalityParams", "InequalityReport", "LacunaryShape", "Polynomial",
    "RootMultiset", "conjugate_reciprocal", "derivative", "evaluate",
    "from_roots", "matches_lacunary", "min_root_modulus", "polar_derivative",
    "roots", "__version__",
]
