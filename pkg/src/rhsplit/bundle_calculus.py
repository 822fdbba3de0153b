"""Closed-form invariants of a splitting type K = (k_1 >= ... >= k_n).

All arithmetic is exact: integers, or ``fractions.Fraction`` for slopes and
type codimensions.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Sequence

from .birkhoff import SplittingType, _as_K, is_stable, stratum_invariants
from .errors import ValidationError

__all__ = [
    "chern_number",
    "weight_tau",
    "reduced_dimension_nu",
    "fuchsian_weight",
    "splitting_from_invariants_rank2",
    "splitting_from_invariants_rank3",
    "solvability_count",
    "brute_force_solution_count",
    "endo_cohomology",
    "slope",
    "apparent_singularity_bound",
    "apparent_bound_from_genus",
    "partial_index_bound",
    "minimal_singularities_rank2",
    "type_codimension",
    "moduli_dimension",
    "all_invariants",
    "is_stable",
    "stratum_invariants",
]


def chern_number(K) -> int:
    return sum(_as_K(K).K)


def weight_tau(K) -> int:
    """tau = sum_i (k_1 - k_i)."""
    K = _as_K(K).K
    return sum(K[0] - k for k in K)


def reduced_dimension_nu(K) -> int:
    """nu = sum over strict pairs k_i > k_j of (k_i - k_j)."""
    K = _as_K(K).K
    return sum(a - b for a in K for b in K if a > b)


def fuchsian_weight(K) -> int:
    """k_1 - k_2 for rank 2; coincides with nu there."""
    K = _as_K(K).K
    if len(K) != 2:
        raise ValidationError("the Fuchsian weight is defined for rank 2")
    return K[0] - K[1]


def splitting_from_invariants_rank2(c1: int, nu: int) -> SplittingType:
    if nu < 0 or (c1 + nu) % 2:
        raise ValidationError(f"no rank-2 splitting type has c1={c1}, nu={nu}")
    return SplittingType(((c1 + nu) // 2, (c1 - nu) // 2))


def splitting_from_invariants_rank3(c1: int, tau: int, nu: int) -> SplittingType:
    """Inverse of K -> (c1, tau, nu) in rank 3.

    k1 = (c1 + tau)/3, k3 = k1 - nu/2 and k2 = c1 - k1 - k3.
    """
    if (c1 + tau) % 3 or nu % 2 or tau < 0 or nu < 0:
        raise ValidationError(f"no rank-3 splitting type has c1={c1}, tau={tau}, nu={nu}")
    k1 = (c1 + tau) // 3
    k3 = k1 - nu // 2
    k2 = c1 - k1 - k3
    if not k1 >= k2 >= k3:
        raise ValidationError(f"invariants (c1={c1}, tau={tau}, nu={nu}) give non-monotone {(k1, k2, k3)}")
    K = SplittingType((k1, k2, k3))
    if weight_tau(K) != tau or reduced_dimension_nu(K) != nu:
        raise ValidationError(f"invariants (c1={c1}, tau={tau}, nu={nu}) are not realized")
    return K


def solvability_count(K) -> dict:
    """Dimension l of bounded solutions of the diagonal problem Phi+ = d_K Phi-."""
    K = _as_K(K).K
    l = sum(max(k + 1, 0) for k in K)
    return {"solvable": l > 0, "l": l}


def brute_force_solution_count(K: Sequence[int]) -> int:
    """Count monomial solutions of Phi+ = d_K Phi- by enumeration.

    Component i solves t^j = t^(k_i) t^(j - k_i) with Phi-_i = t^(j - k_i)
    bounded at infinity (j - k_i <= 0) and Phi+_i = t^j analytic inside (j >= 0).
    """
    D = max(abs(k) for k in K) + 2
    count = 0
    for k, e in product(K, range(-D, 1)):
        if 0 <= k + e <= D:
            count += 1
    return count


def endo_cohomology(K) -> dict:
    K = _as_K(K).K
    h0 = sum(a - b + 1 for a in K for b in K if a >= b)
    h1 = sum(a - b - 1 for a in K for b in K if a - b >= 2)
    return {"h0": h0, "h1": h1}


def slope(K) -> Fraction:
    K = _as_K(K).K
    return Fraction(sum(K), len(K))


def apparent_singularity_bound(n: int, g: int, m: int) -> int:
    """Upper bound for apparent singularities of a scalarized rank-n system with m points on genus g."""
    return 1 - n * (1 - g) + n * (n - 1) * (m + 2 * g - 2) // 2


def apparent_bound_from_genus(n: int, g: int) -> int:
    """Apparent-singularity bound that depends only on rank and genus."""
    return n * n * g - n * (n - 1) // 2 + 1


def partial_index_bound(n: int, m: int, l: int) -> int:
    """Upper bound for tau of a rank-n system with m points and l apparent singularities."""
    return (m - 2) * n * (n - 1) // 2 + 1 - l


def minimal_singularities_rank2(K) -> int:
    K = _as_K(K).K
    if len(K) != 2:
        raise ValidationError("rank 2 only")
    return K[0] - K[1] + 2


def type_codimension(mu: Sequence, g: int) -> Fraction:
    """sum over pairs mu_i > mu_j of (mu_i - mu_j + g - 1)."""
    mu = [Fraction(x) for x in mu]
    if any(a < b for a, b in zip(mu, mu[1:])):
        raise ValidationError("mu must be weakly decreasing")
    return sum((a - b + g - 1 for a in mu for b in mu if a > b), Fraction(0))


def moduli_dimension(n: int, g: int) -> int:
    return n * n * (g - 1) + 1


def all_invariants(K) -> dict:
    K = _as_K(K)
    out = {
        "K": K.as_list(),
        "c1": chern_number(K),
        "tau": weight_tau(K),
        "nu": reduced_dimension_nu(K),
        **endo_cohomology(K),
        "stable": is_stable(K),
        "l": solvability_count(K)["l"],
        "slope": str(slope(K)),
        **stratum_invariants(K),
    }
    return out
