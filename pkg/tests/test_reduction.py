import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rhsplit import bundle_calculus as bc
from rhsplit.errors import DegenerateSymbolError, ResonanceError, ValidationError
from rhsplit.fixtures import (
    commuting_nilpotent_system,
    diagonal_two_point_system,
    hypergeometric_system,
    regular_3x3_system,
)
from rhsplit.fuchsian.levelt import local_exponents
from rhsplit.fuchsian.monodromy import monodromy
from rhsplit.fuchsian.reduction import (
    GaugedSystem,
    RationalGauge,
    gauge_transform,
    reduce_exponents,
    splitting_via_reduction,
)
from rhsplit.fuchsian.scalarize import count_wronskian_zeros, scalarize
from rhsplit.fuchsian.systems import FuchsianSystem


def test_rational_gauge_log_derivative():
    g = RationalGauge(2).then(("const", np.array([[1.0, 1.0], [0.0, 1.0]])), ("shear", 0.5, (1, 0)))
    z, h = 0.2 + 0.9j, 1e-6
    dT = (g(z + h) - g(z - h)) / (2 * h)
    assert np.allclose(g.log_derivative(z), dT @ np.linalg.inv(g(z)), atol=1e-7)


def test_shear_moves_exponent():
    # shear diag(-1, 0) at 0 lowers the first exponent by one
    s = FuchsianSystem((0.0, 1.0), (np.diag([1.0, 0.3]), -np.diag([1.0, 0.3])))
    g = gauge_transform(s, RationalGauge(2, (("shear", 0.0, (-1, 0)),)))
    assert isinstance(g, GaugedSystem)
    assert g.is_fuchsian_at(0)
    assert np.allclose(np.sort(np.linalg.eigvals(g.residue_at(0)).real), [0.0, 0.3], atol=1e-9)


def test_constant_gauge_of_fuchsian_stays_fuchsian():
    h = hypergeometric_system()
    C = np.array([[2.0, 1.0], [1.0, 1.0]])
    g = gauge_transform(h, C)
    assert isinstance(g, FuchsianSystem)
    with pytest.raises(ValidationError):
        gauge_transform(h, np.zeros((2, 2)))


@pytest.mark.parametrize(
    "sysm, K",
    [
        (diagonal_two_point_system(), [1, 0]),
        (hypergeometric_system(), [0, -1]),
        (hypergeometric_system(0.25, 0.25, -0.5), [0, -1]),
        (hypergeometric_system(0.3, 0.45, 0.8), [0, -1]),
        (FuchsianSystem((0.0, 1.0), (np.zeros((2, 2)), np.zeros((2, 2)))), [0, 0]),
    ],
)
def test_splitting_via_reduction(sysm, K):
    red = reduce_exponents(sysm)
    for j in range(sysm.finite_points.size):
        e = local_exponents(red.system, j, allow_resonant=True)
        assert all(int(np.floor(b.real + 1e-8)) == 0 for b in e.beta)
    got = splitting_via_reduction(sysm).as_list()
    assert got == K
    assert bc.splitting_from_invariants_rank2(bc.chern_number(got), bc.reduced_dimension_nu(got)).as_list() == got


def test_reduced_system_keeps_monodromy_relation():
    red = reduce_exponents(hypergeometric_system())
    assert monodromy(red.system).relation_defect < 1e-8


def test_hypergeometric_type_respects_index_bound():
    K = splitting_via_reduction(hypergeometric_system()).as_list()
    assert bc.weight_tau(K) <= bc.partial_index_bound(2, 3, 0)


def test_hypergeometric_wronskian_has_no_apparent_zeros():
    sc = scalarize(hypergeometric_system(), 0)
    assert count_wronskian_zeros(sc, 5.0) == 0
    assert bc.apparent_singularity_bound(2, 0, 3) == 0


def test_scalar_coefficients_of_hypergeometric_equation():
    # row 0 solves z(1-z) y'' + (c - (a+b+1) z) y' - ab y = 0
    a, b, c = 0.25, 0.25, 0.5
    sc = scalarize(hypergeometric_system(a, b, c), 0)
    z = 0.4 + 0.3j
    w = z * (z - 1)
    assert np.allclose(sc.scalar_coefficients(z), [-a * b / w, (c - (a + b + 1) * z) / w], atol=1e-12)


def test_commuting_nilpotent_wronskian():
    sc = scalarize(commuting_nilpotent_system(), 0)
    assert count_wronskian_zeros(sc, 3.0) == 0
    # row 1 of the solution is constant, so its Wronskian vanishes identically
    with pytest.raises(DegenerateSymbolError):
        scalarize(commuting_nilpotent_system(), 1)


def test_scalar_system_and_plain_callables():
    s = FuchsianSystem((0.0,), (np.array([[0.5]]),))
    assert count_wronskian_zeros(scalarize(s, 0), 2.0) == 0
    assert count_wronskian_zeros(lambda z: z - 5, 10.0) == 1
    assert count_wronskian_zeros(lambda z: 3.0 + 0 * z, 1.0) == 0
    with pytest.raises(ValidationError):
        count_wronskian_zeros(lambda z: z - 2, 2.0)


def test_wronskian_satisfies_abel_identity():
    sc = scalarize(hypergeometric_system(), 0)
    z1, z2 = -1.5 + 0.5j, -1.5 + 0.6j
    h = 1e-5
    dW = (sc.wronskian(z1 + h) - sc.wronskian(z1 - h)) / (2 * h)
    assert np.isclose(dW / sc.wronskian(z1), sc.log_derivative(z1), rtol=1e-5)
    assert abs(sc.wronskian(z2)) > 0


def test_regular_3x3_first_row_scalarizes():
    sc = scalarize(regular_3x3_system(), 0)
    assert np.isfinite(sc.log_derivative(2.0 + 1.0j))


@settings(max_examples=15)
@given(st.tuples(*[st.floats(0.05, 0.95) for _ in range(3)]))
def test_degree_equals_minus_trace_of_reduced_residues(abc):
    # c1 of the splitting type is minus the residue traces of the reduced system
    sysm = hypergeometric_system(*abc)
    try:
        red = reduce_exponents(sysm)
    except ResonanceError:
        return
    K = splitting_via_reduction(sysm).as_list()
    tr = sum(np.trace(red.system.residue_at(j)) for j in range(2)) + np.trace(sysm.infinity_residue())
    assert abs(sum(K) + tr) < 1e-8
