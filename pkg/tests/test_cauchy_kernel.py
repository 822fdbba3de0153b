import numpy as np
import pytest

from rhsplit.cauchy_kernel import (
    Density,
    assemble_transmission_system,
    cauchy_offcurve,
    plemelj_boundary,
    principal_value,
    pv_matrix,
    solve_rhtp,
    transmission_residual,
)
from rhsplit.errors import ValidationError
from rhsplit.loop_algebra import MatrixLoop, UnitCircleGrid, diagonal_monomial_loop

N = 64
T = UnitCircleGrid(N).nodes


@pytest.mark.parametrize("m", [-3, -1, 0, 1, 4])
def test_principal_value_of_monomials(m):
    # PV of t^m is +t^m/2 for m >= 0 and -t^m/2 for m < 0
    sign = 0.5 if m >= 0 else -0.5
    assert np.allclose(pv_matrix(N) @ T**m, sign * T**m, atol=1e-13)
    d = Density(T**m)
    assert np.isclose(principal_value(d, k=7), sign * T[7] ** m, atol=1e-13)
    assert np.isclose(principal_value(d, t0=T[7]), sign * T[7] ** m, atol=1e-13)


@pytest.mark.parametrize("m", [-2, 0, 3])
def test_offcurve_values_and_plemelj_jump(m):
    d = Density(T**m)
    zin, zout = 0.3 + 0.1j, 3.0
    inside = zin**m if m >= 0 else 0.0
    outside = 0.0 if m >= 0 else -(zout**m)
    assert np.isclose(cauchy_offcurve(d, zin), inside, atol=1e-13)
    assert np.isclose(cauchy_offcurve(d, zout), outside, atol=1e-13)
    plus, minus = plemelj_boundary(d)
    assert np.allclose(plus - minus, T**m, atol=1e-13)


def test_principal_value_needs_a_node():
    d = Density(T)
    with pytest.raises(ValidationError):
        principal_value(d)
    with pytest.raises(ValidationError):
        principal_value(d, t0=np.exp(0.01j))
    with pytest.raises(ValidationError):
        cauchy_offcurve(d, 1.0)


@pytest.mark.parametrize(
    "K, p, dim",
    [([0], 0, 1), ([1], 0, 2), ([-1], 0, 0), ([3], 0, 4), ([-2], 2, 1), ([1, 1], 0, 4), ([2, -1], 0, 3)],
)
def test_solution_dimensions_for_diagonal_symbols(K, p, dim):
    G = diagonal_monomial_loop(K)
    basis = solve_rhtp(G, p)
    assert len(basis) == dim
    for sol in basis:
        assert transmission_residual(G, sol) < 1e-10


def test_unipotent_symbol_has_two_bounded_solutions():
    G = MatrixLoop({0: np.eye(2), 1: np.array([[0, 1], [0, 0]])})
    assert len(solve_rhtp(G, 0)) == 2


def test_solution_is_holomorphic_off_the_circle():
    G = diagonal_monomial_loop([2])
    for sol in solve_rhtp(G, 0, N=128):
        plus, _ = sol.boundary()
        # Phi+ extends inside: the Cauchy integral of its trace reproduces it
        z = 0.4 - 0.2j
        assert np.isclose(sol(z), cauchy_offcurve(Density(plus[:, 0]), z) + 0, atol=1e-10)


def test_assembled_operator_shape():
    G = diagonal_monomial_loop([1, 0])
    sysm = assemble_transmission_system(G, N=32)
    assert sysm.matrix.shape == (64, 64)


def test_grid_too_small_is_rejected():
    G = MatrixLoop({0: [[3.0]], 12: [[1.0]]})
    with pytest.raises(ValidationError):
        solve_rhtp(G, 0, N=32)
