import numpy as np
import pytest

from rhsplit.birkhoff import (
    SplittingType,
    factorize,
    is_stable,
    kernel_profile,
    partial_indices,
    random_symbol,
    stratum_invariants,
)
from rhsplit.cauchy_kernel import solve_rhtp
from rhsplit.errors import DegenerateSymbolError, ValidationError
from rhsplit.fixtures import twisted_loop
from rhsplit.loop_algebra import MatrixLoop, diagonal_monomial_loop, global_index


def test_splitting_type_must_be_decreasing():
    with pytest.raises(ValidationError):
        SplittingType((0, 1))
    assert SplittingType.sorted([0, 2, -1]).K == (2, 0, -1)


def test_diagonal_fixture():
    assert partial_indices(diagonal_monomial_loop([2, 0, -1])).as_list() == [2, 0, -1]


def test_twisted_loop_is_trivial_but_its_transpose_is_not():
    # [[t, 1], [0, 1/t]] = [[1, 0], [1/t, 1]] [[t, 1], [-1, 0]]
    G = twisted_loop()
    assert partial_indices(G).as_list() == [0, 0]
    assert partial_indices(G.transpose()).as_list() == [1, -1]
    fm = MatrixLoop({0: np.eye(2), -1: np.array([[0, 0], [1, 0]])})
    fp = MatrixLoop({1: np.diag([1.0, 0.0]), 0: np.array([[0, 1], [-1, 0]])})
    assert (fm @ fp).allclose(G)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_solution_counts_determine_transposed_indices(m):
    # dim of solutions with pole order p equals sum max(k + p + 1, 0) over indices of G^T
    G = MatrixLoop({m: np.diag([1.0, 0.0]), 0: np.array([[0, 1], [0, 0]]), -m: np.diag([0.0, 1.0])})
    KT = partial_indices(G.transpose()).K
    assert KT == (m, -m)
    for p in range(3):
        assert len(solve_rhtp(G, p)) == sum(max(k + p + 1, 0) for k in KT)


def test_factorization_reassembles_twisted_loop():
    fac = factorize(twisted_loop())
    assert fac.K.as_list() == [0, 0]
    assert fac.reassemble().allclose(twisted_loop(), atol=1e-10)
    assert np.allclose(fac.minus.coefficient(0), np.eye(2))
    assert fac.minus.support[1] <= 0
    assert fac.plus.support[0] >= 0


@pytest.mark.parametrize("K", [[3, 1, -2], [0, 0], [2, -2], [1, 1, 1], [-1]])
def test_random_symbols_recover_K(K):
    rng = np.random.default_rng(sum(K) + 7 * len(K))
    G, _, _ = random_symbol(rng, K)
    fac = factorize(G)
    assert fac.K.as_list() == K
    assert fac.residual < 1e-10
    assert global_index(G) == sum(K)
    assert global_index(fac.plus) == 0 and global_index(fac.minus) == 0


def test_kernel_profile_counts_nonnegative_shifts():
    # for d_K the kernel of the section at shift m has dimension sum max(k - m + 1, 0)
    K = [2, 0, -1]
    H = diagonal_monomial_loop(K).transpose()
    prof = kernel_profile(H, [-2, 0, 1, 3], 20)
    for m, d in prof.items():
        assert d == sum(max(k - m + 1, 0) for k in K)


def test_singular_symbol_rejected():
    with pytest.raises(DegenerateSymbolError):
        partial_indices(MatrixLoop({0: np.diag([1.0, 0.0])}))


def test_stratum_invariants_and_stability():
    assert stratum_invariants([2, 1, 0]) == {"dim_HK": 10, "codim": 1}
    assert stratum_invariants([0, 0]) == {"dim_HK": 4, "codim": 0}
    assert is_stable([1, 0]) and not is_stable([2, 0])
