import numpy as np
import pytest

from rhsplit.errors import DegenerateSymbolError, UnderResolvedError, ValidationError
from rhsplit.loop_algebra import (
    MatrixLoop,
    PiecewiseLoop,
    UnitCircleGrid,
    diagonal_monomial_loop,
    global_index,
    loop_from_function,
    loop_from_samples,
    winding_number,
)


def test_grid_nodes_and_weights():
    g = UnitCircleGrid(16)
    assert np.allclose(np.abs(g.nodes), 1)
    assert np.isclose(g.weights.sum(), 2 * np.pi)
    with pytest.raises(ValidationError):
        UnitCircleGrid(12)


def test_evaluate_matches_coefficients():
    A = np.array([[1, 2], [3, 4]], dtype=complex)
    B = np.array([[0, 1j], [1, 0]])
    L = MatrixLoop({-1: A, 2: B})
    z = 0.7 * np.exp(0.3j)
    assert np.allclose(L(z), A / z + B * z**2)
    assert L.support == (-1, 2)
    assert L.degree_span == 3


def test_product_and_transpose():
    L = MatrixLoop({0: np.eye(2), 1: np.array([[0, 1], [0, 0]])})
    M = MatrixLoop({-1: np.array([[1, 0], [2, 1]])})
    z = np.exp(1.1j)
    assert np.allclose((L @ M)(z), L(z) @ M(z))
    assert np.allclose(L.transpose()(z), L(z).T)


def test_samples_round_trip_through_fft():
    rng = np.random.default_rng(1)
    L = MatrixLoop({k: rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for k in range(-2, 3)})
    L = MatrixLoop({**L.coeffs, 0: L.coeffs[0] + 10 * np.eye(2)})
    back = loop_from_samples(L.samples(64))
    assert back.allclose(L, atol=1e-12)


def test_loop_from_samples_detects_under_resolution():
    t = UnitCircleGrid(16).nodes
    f = np.exp(4 * t)[:, None, None]
    with pytest.raises(UnderResolvedError):
        loop_from_samples(f)


def test_loop_from_function_exponential():
    L = loop_from_function(lambda t: np.exp(t)[..., None, None], 64)
    # Taylor coefficients of exp
    assert np.isclose(L.coefficient(3)[0, 0], 1 / 6)
    assert L.support[0] == 0


def test_singular_loop_rejected():
    L = MatrixLoop({0: np.diag([1.0, 0.0])})
    with pytest.raises(DegenerateSymbolError):
        L.check_invertible()
    assert not L.is_invertible_on_grid()


@pytest.mark.parametrize("k", range(-5, 6))
def test_global_index_of_monomials(k):
    assert global_index(MatrixLoop.scalar_monomial(k)) == k


def test_global_index_is_sum_of_diagonal_exponents():
    assert global_index(diagonal_monomial_loop([3, -1, 0])) == 2


def test_winding_number_of_shifted_circle():
    t = UnitCircleGrid(128).nodes
    assert winding_number(t - 0.5) == 1
    assert winding_number(t - 2.0) == 0


def test_piecewise_limits():
    s = np.exp(1j * np.array([0.5, 2.0]))
    pl = PiecewiseLoop.piecewise_constant(s, [np.eye(2) * 2, np.eye(2) * 3])
    assert np.allclose(pl.plus_limit(0), 2 * np.eye(2))
    assert np.allclose(pl.minus_limit(0), 3 * np.eye(2))
    assert np.allclose(pl.evaluate(np.exp(1.0j)), 2 * np.eye(2))
    assert np.allclose(pl.evaluate(np.exp(3.0j)), 3 * np.eye(2))


def test_piecewise_validation():
    with pytest.raises(ValidationError):
        PiecewiseLoop.piecewise_constant(np.exp(1j * np.array([2.0, 0.5])), [np.eye(1), np.eye(1)])
    with pytest.raises(ValidationError):
        PiecewiseLoop.piecewise_constant(np.array([1.5, 1j]), [np.eye(1), np.eye(1)])
