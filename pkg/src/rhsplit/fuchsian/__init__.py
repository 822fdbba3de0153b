"""Fuchsian and regular systems: monodromy, exponents, reduction, scalarization."""

from .levelt import LeveltEntry, fuchs_weight_beta, levelt_numeric, local_exponents
from .monodromy import MonodromyRep, monodromy
from .reduction import gauge_transform, reduce_exponents, splitting_via_reduction
from .scalarize import count_wronskian_zeros, scalarize
from .systems import INF, FuchsianSystem, RegularSystem

__all__ = [
    "INF",
    "FuchsianSystem",
    "LeveltEntry",
    "MonodromyRep",
    "RegularSystem",
    "count_wronskian_zeros",
    "fuchs_weight_beta",
    "gauge_transform",
    "levelt_numeric",
    "local_exponents",
    "monodromy",
    "reduce_exponents",
    "scalarize",
    "splitting_via_reduction",
]
