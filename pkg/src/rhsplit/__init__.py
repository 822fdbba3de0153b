"""Birkhoff factorization, transmission problems and Fuchsian monodromy on the sphere."""

from .birkhoff import Factorization, SplittingType, factorize, partial_indices
from .cauchy_kernel import solve_rhtp
from .errors import NumericalError, RHSplitError, ValidationError
from .loop_algebra import MatrixLoop, PiecewiseLoop, diagonal_monomial_loop, global_index
from .regularization import normalized_log, regularize_transmission

__all__ = [
    "Factorization",
    "MatrixLoop",
    "NumericalError",
    "PiecewiseLoop",
    "RHSplitError",
    "SplittingType",
    "ValidationError",
    "diagonal_monomial_loop",
    "factorize",
    "global_index",
    "normalized_log",
    "partial_indices",
    "regularize_transmission",
    "solve_rhtp",
]
