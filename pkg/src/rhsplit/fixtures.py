"""Named example systems, loops and piecewise data used by tests, scripts and the CLI."""

from __future__ import annotations

import numpy as np

from .fuchsian.systems import FuchsianSystem, RegularSystem
from .loop_algebra import MatrixLoop, PiecewiseLoop, diagonal_monomial_loop

NILPOTENT = np.array([[0, 1], [0, 0]], dtype=complex)


def commuting_nilpotent_system() -> FuchsianSystem:
    """A_1 = N at 1 and A_2 = -N at -1; the solution is exp(N log((z-1)/(z+1)))."""
    return FuchsianSystem((1.0, -1.0), (NILPOTENT, -NILPOTENT))


def hypergeometric_system(alpha: complex = 0.25, beta: complex = 0.25, gamma: complex = 0.5) -> FuchsianSystem:
    """Companion system of the hypergeometric equation with points 0, 1 and infinity."""
    A0 = np.array([[0, 0], [-alpha * beta, -gamma]], dtype=complex)
    A1 = np.array([[0, 1], [0, gamma - alpha - beta]], dtype=complex)
    return FuchsianSystem((0.0, 1.0, "inf"), (A0, A1, -(A0 + A1)))


def diagonal_two_point_system() -> FuchsianSystem:
    """A = diag(1, 0) at 0 and -A at infinity."""
    A = np.diag([1.0, 0.0]).astype(complex)
    return FuchsianSystem((0.0, "inf"), (A, -A))


def regular_3x3_system() -> RegularSystem:
    """Rank-3 system with a double pole at 0 and simple poles at -1, 1, 1/2.

    The first column of every coefficient vanishes, so e_1 is a constant
    solution and the monodromy is reducible.
    """
    C01 = np.diag([0.0, 1.0, -1.0])
    C02 = np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]], dtype=complex)
    Am1 = np.array([[0, 6, 0], [0, -1, 1], [0, -1, 1]], dtype=complex) / 6
    A1 = np.array([[0, 0, 2], [0, -1, -1], [0, 0, 1]], dtype=complex) / 2
    Ah = np.array([[0, -3, -3], [0, -1, 1], [0, -1, 1]], dtype=complex) / 3
    return RegularSystem((0.0, -1.0, 1.0, 0.5), ((C01, C02), (Am1,), (A1,), (Ah,)))


def unipotent(c: complex) -> np.ndarray:
    return np.array([[1, c], [0, 1]], dtype=complex)


def unipotent_triple(c1: complex = 1.0, c2: complex = 2.0) -> list[np.ndarray]:
    """Unipotent generators G1, G2, G3 with G3 G2 G1 = I; requires c1 c2 (c1 + c2) != 0."""
    return [unipotent(c1), unipotent(c2), unipotent(-c1 - c2)]


def scalar_two_jump() -> PiecewiseLoop:
    s = np.exp(1j * np.array([0.3, 2.5]))
    return PiecewiseLoop.piecewise_constant(s, [[[2.0]], [[1.0 + 1.0j]]])


def generic_two_jump() -> PiecewiseLoop:
    """2x2 constant pieces whose jump matrix has eigenvalues 1.2 e^(0.6 pi i), 0.9 e^(0.9 pi i)."""
    P = np.array([[1.0, 0.3], [0.2, 1.5]], dtype=complex)
    J = np.array([[1.2 * np.exp(2j * np.pi * 0.3), 0.4], [0.1, 0.9 * np.exp(2j * np.pi * 0.45)]])
    return PiecewiseLoop.piecewise_constant(np.exp(1j * np.array([1.0, 3.5])), [P, P @ J])


def unipotent_three_jump(c1: complex = 1.0, c2: complex = 2.0) -> PiecewiseLoop:
    """Piecewise-constant loop whose jump matrices are the unipotent triple.

    Arc values I, G1, G2 G1 make the jump matrices G(s_j+0)^-1 G(s_j-0) equal to
    G3, G1^-1 and G2^-1.
    """
    G1, G2, _ = unipotent_triple(c1, c2)
    s = np.exp(1j * np.array([0.5, 2.0, 4.0]))
    return PiecewiseLoop.piecewise_constant(s, [np.eye(2), G1, G2 @ G1])


def piecewise_fixtures() -> dict:
    return {
        "scalar_two_jump": scalar_two_jump(),
        "generic_two_jump": generic_two_jump(),
        "unipotent_three_jump": unipotent_three_jump(),
    }


def system_fixtures() -> dict:
    return {
        "commuting_nilpotent": commuting_nilpotent_system(),
        "hypergeometric": hypergeometric_system(),
        "diagonal_two_point": diagonal_two_point_system(),
        "regular_3x3": regular_3x3_system(),
    }


def twisted_loop() -> MatrixLoop:
    """[[t, 1], [0, 1/t]]."""
    return MatrixLoop({1: np.diag([1.0, 0.0]), 0: NILPOTENT, -1: np.diag([0.0, 1.0])})


def diagonal_fixture() -> MatrixLoop:
    return diagonal_monomial_loop([2, 0, -1])
