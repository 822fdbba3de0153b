"""Property tests for identities that hold on every input."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from rhsplit import bundle_calculus as bc
from rhsplit.birkhoff import factorize, partial_indices, random_symbol, stratum_invariants
from rhsplit.errors import BranchAmbiguityError
from rhsplit.fuchsian.monodromy import monodromy
from rhsplit.fuchsian.reduction import gauge_transform
from rhsplit.fuchsian.systems import FuchsianSystem
from rhsplit.jsonio import decode_loop, encode_loop
from rhsplit.loop_algebra import diagonal_monomial_loop, global_index
from rhsplit.regularization import normalized_log


def splittings(n_min=1, n_max=4, lo=-5, hi=5):
    return st.lists(st.integers(lo, hi), min_size=n_min, max_size=n_max).map(lambda ks: sorted(ks, reverse=True))


@given(splittings())
def test_diagonal_indices_exact(K):
    G = diagonal_monomial_loop(K)
    assert partial_indices(G).as_list() == K
    assert global_index(G) == sum(K)


@settings(max_examples=25)
@given(splittings(1, 3, -3, 3), st.integers(0, 2**31 - 1))
def test_random_symbol_factorization(K, seed):
    G, _, _ = random_symbol(np.random.default_rng(seed), K)
    fac = factorize(G)
    assert fac.K.as_list() == K
    assert fac.residual < 1e-8
    assert global_index(G) == sum(fac.K)


@settings(max_examples=25)
@given(splittings(1, 3, -3, 3), st.integers(0, 2**31 - 1))
def test_indices_transpose_conjugate_invariance(K, seed):
    # multiplying by constant invertible matrices on either side keeps the type
    rng = np.random.default_rng(seed)
    n = len(K)
    C = rng.standard_normal((n, n)) + 3 * np.eye(n)
    G = diagonal_monomial_loop(K).left_mul(C).right_mul(np.linalg.inv(C))
    assert partial_indices(G).as_list() == K


@given(splittings(2, 2, -10, 10))
def test_rank2_round_trip(K):
    back = bc.splitting_from_invariants_rank2(bc.chern_number(K), bc.reduced_dimension_nu(K))
    assert back.as_list() == K


@given(splittings(3, 3, -10, 10))
def test_rank3_round_trip(K):
    back = bc.splitting_from_invariants_rank3(bc.chern_number(K), bc.weight_tau(K), bc.reduced_dimension_nu(K))
    assert back.as_list() == K


@given(splittings(1, 5, -6, 6))
def test_cohomology_and_stratum_agree(K):
    st_ = stratum_invariants(K)
    eh = bc.endo_cohomology(K)
    assert eh["h0"] == st_["dim_HK"]
    assert bc.type_codimension(K, 0) == st_["codim"]
    # Riemann-Roch for End E: h0 - h1 = n^2
    assert eh["h0"] - eh["h1"] == len(K) ** 2
    assert bc.solvability_count(K)["l"] == bc.brute_force_solution_count(K)


@given(splittings(1, 4, -4, 4))
def test_twist_shifts_indices(K):
    # multiplying by t shifts every index by one
    G = diagonal_monomial_loop(K).shifted(1)
    assert partial_indices(G).as_list() == [k + 1 for k in K]


def _matrices(n):
    return st.lists(st.floats(-2, 2, allow_nan=False), min_size=2 * n * n, max_size=2 * n * n).map(
        lambda v: (np.array(v[: n * n]) + 1j * np.array(v[n * n :])).reshape(n, n)
    )


@given(_matrices(2))
def test_normalized_log_properties(A):
    G = expm(A) + 0.1 * np.eye(2)
    if abs(np.linalg.det(G)) < 1e-3 or np.linalg.cond(G) > 1e6:
        return
    try:
        E = normalized_log(G)
    except BranchAmbiguityError:
        # eigenvalues on the window edge are reported, not guessed
        return
    assert np.allclose(expm(2j * np.pi * E), G, atol=1e-8 * max(1, np.abs(G).max()))
    re = np.linalg.eigvals(E).real
    # defective eigenvalues carry sqrt(eps) noise
    assert np.all(re > -1e-6) and np.all(re < 1 + 1e-6)


@settings(max_examples=8)
@given(_matrices(2), _matrices(2))
def test_monodromy_relation_and_conjugation(A0, A1):
    A0, A1 = 0.3 * A0, 0.3 * A1
    sysm = FuchsianSystem((0.0, 1.0, 2.5j), (A0, A1, -(A0 + A1)))
    rep = monodromy(sysm)
    assert rep.relation_defect < 1e-8
    C = np.array([[1.0, 0.5], [0.0, 2.0]])
    base = FuchsianSystem(sysm.points, sysm.residues, rep.basepoint)
    rep_c = monodromy(gauge_transform(base, C))
    for G, Gc in zip(rep.generators, rep_c.generators):
        assert np.allclose(Gc, C @ G @ np.linalg.inv(C), atol=1e-8)


@given(splittings(1, 3, -4, 4))
def test_loop_json_round_trip(K):
    G = diagonal_monomial_loop(K)
    assert decode_loop(encode_loop(G)).allclose(G)
