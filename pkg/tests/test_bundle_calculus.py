from fractions import Fraction

import pytest

from rhsplit import bundle_calculus as bc
from rhsplit.errors import ValidationError


def test_invariants_of_2_1_0():
    inv = bc.all_invariants([2, 1, 0])
    assert inv["c1"] == 3
    assert inv["tau"] == 3
    assert inv["nu"] == 4
    assert inv["h0"] == 10
    assert inv["h1"] == 1
    assert inv["l"] == 6
    assert inv["stable"] is False
    assert inv["slope"] == "1"


@pytest.mark.parametrize(
    "K, l",
    [([0], 1), ([-1], 0), ([3], 4), ([1, -1], 2), ([-2, -3], 0), ([2, 0, -1], 4)],
)
def test_solution_count_matches_enumeration(K, l):
    assert bc.solvability_count(K) == {"solvable": l > 0, "l": l}
    assert bc.brute_force_solution_count(K) == l


def test_fuchsian_weight_is_sum_of_gaps_to_top():
    assert bc.weight_tau([3, 1, -2]) == 2 + 5
    assert bc.fuchsian_weight([0, 0]) == 0


def test_endo_cohomology_small_cases():
    assert bc.endo_cohomology([0, 0]) == {"h0": 4, "h1": 0}
    assert bc.endo_cohomology([1, -1]) == {"h0": 5, "h1": 1}
    assert bc.endo_cohomology([3, 0]) == {"h0": 6, "h1": 2}


@pytest.mark.parametrize("K", [[4, -3], [0, 0], [5, 5], [-1, -6]])
def test_rank2_round_trip(K):
    assert bc.splitting_from_invariants_rank2(bc.chern_number(K), bc.reduced_dimension_nu(K)).as_list() == K


@pytest.mark.parametrize("K", [[4, 0, -3], [1, 1, 0], [2, 2, 2], [0, -1, -1]])
def test_rank3_round_trip(K):
    c1, tau, nu = bc.chern_number(K), bc.weight_tau(K), bc.reduced_dimension_nu(K)
    assert bc.splitting_from_invariants_rank3(c1, tau, nu).as_list() == K


def test_unrealizable_invariants_rejected():
    with pytest.raises(ValidationError):
        bc.splitting_from_invariants_rank2(1, 2)
    with pytest.raises(ValidationError):
        bc.splitting_from_invariants_rank3(0, 1, 0)


def test_bounds():
    assert bc.apparent_singularity_bound(2, 0, 3) == 0
    assert bc.apparent_singularity_bound(2, 0, 4) == 1
    assert bc.apparent_singularity_bound(3, 0, 4) == 4
    assert bc.apparent_bound_from_genus(2, 1) == 4
    assert bc.partial_index_bound(2, 3, 0) == 2
    assert bc.minimal_singularities_rank2([1, -1]) == 4
    assert bc.moduli_dimension(2, 0) == -3


def test_type_codimension_on_integers_and_fractions():
    assert bc.type_codimension([2, 1, 0], 0) == 1
    assert bc.type_codimension([Fraction(1, 2), 0], 1) == Fraction(1, 2)
    with pytest.raises(ValidationError):
        bc.type_codimension([0, 1], 0)


def test_slope():
    assert bc.slope([1, 0]) == Fraction(1, 2)
