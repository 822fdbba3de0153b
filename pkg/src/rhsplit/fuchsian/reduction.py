"""Gauge transformations g = T(z) f and the exponent-reduction algorithm.

T(z) is stored as a product of constant matrices and diagonal shears
(z - s)^diag(d).  Under g = T f the coefficient becomes B = T' T^-1 + T A T^-1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eig, qr

from ..birkhoff import SplittingType, partial_indices
from ..errors import NumericalError, ValidationError
from ..loop_algebra import UnitCircleGrid, loop_from_samples
from .systems import FuchsianSystem, _SystemBase, laurent_coefficients

POLE_TOL = 1e-9


@dataclass(frozen=True)
class RationalGauge:
    """T(z) = H_k ... H_1 where factors are listed in application order H_1, ..., H_k.

    Each factor is ("const", C) or ("shear", s, d) for diag((z - s)^d_i).
    """

    n: int
    factors: tuple = field(default_factory=tuple)

    def then(self, *factors) -> "RationalGauge":
        return RationalGauge(self.n, self.factors + tuple(factors))

    def _factor_value(self, f, z) -> np.ndarray:
        if f[0] == "const":
            return np.asarray(f[1], dtype=complex)
        return np.diag((z - f[1]) ** np.asarray(f[2], dtype=float)).astype(complex)

    def evaluate(self, z: complex) -> np.ndarray:
        T = np.eye(self.n, dtype=complex)
        for f in self.factors:
            T = self._factor_value(f, z) @ T
        return T

    __call__ = evaluate

    def log_derivative(self, z: complex) -> np.ndarray:
        """T'(z) T(z)^-1."""
        out = np.zeros((self.n, self.n), dtype=complex)
        for f in self.factors:
            H = self._factor_value(f, z)
            out = H @ out @ np.linalg.inv(H)
            if f[0] == "shear":
                out = out + np.diag(np.asarray(f[2], dtype=complex)) / (z - f[1])
        return out

    @property
    def shear_points(self) -> list[complex]:
        return [complex(f[1]) for f in self.factors if f[0] == "shear"]

    @property
    def is_constant(self) -> bool:
        return all(f[0] == "const" for f in self.factors)


@dataclass(frozen=True)
class GaugedSystem(_SystemBase):
    """The system obtained from ``base`` by g = T f."""

    base: object
    gauge: RationalGauge

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def basepoint(self):
        return self.base.basepoint

    @property
    def finite_points(self) -> np.ndarray:
        pts = list(self.base.finite_points)
        for s in self.gauge.shear_points:
            if all(abs(s - p) > 1e-12 for p in pts):
                pts.append(s)
        return np.array(pts, dtype=complex)

    def coefficient(self, z: complex) -> np.ndarray:
        T = self.gauge(z)
        return self.gauge.log_derivative(z) + T @ self.base.coefficient(z) @ np.linalg.inv(T)

    def infinity_residue(self) -> np.ndarray:
        R = 4 * max(1.0, float(np.max(np.abs(self.finite_points))))
        c = laurent_coefficients(self.coefficient, 0.0, R, [-1])
        return -c[-1]

    @property
    def infinity_singular(self) -> bool:
        return bool(self.base.infinity_singular or self.gauge.shear_points)

    def local_laurent(self, j: int, ks=(-3, -2, -1)) -> dict:
        r = 0.125 * self.min_distance(j)
        return laurent_coefficients(self.coefficient, self.finite_points[j], r, ks)

    def pole_order(self, j: int) -> int:
        c = self.local_laurent(j, range(-4, 1))
        scale = max(1.0, max(float(np.abs(v).max()) for v in c.values()))
        nz = [-k for k in range(-4, 0) if np.abs(c[k]).max() > POLE_TOL * scale]
        return max(nz) if nz else 0

    def is_fuchsian_at(self, j: int) -> bool:
        return self.pole_order(j) <= 1

    def residue_at(self, j: int) -> np.ndarray:
        return self.local_laurent(j, (-1,))[-1]


def gauge_transform(sys, H) -> object:
    """Transform by g = H f; H is a constant matrix or a RationalGauge."""
    if not isinstance(H, RationalGauge):
        C = np.atleast_2d(np.asarray(H, dtype=complex))
        if abs(np.linalg.det(C)) < 1e-14:
            raise ValidationError("constant gauge matrix is singular")
        H = RationalGauge(C.shape[0], (("const", C),))
    if H.n != sys.n:
        raise ValidationError("gauge size does not match the system")
    if isinstance(sys, FuchsianSystem) and H.is_constant:
        T = H(0.0)
        Ti = np.linalg.inv(T)
        return FuchsianSystem(sys.points, tuple(T @ a @ Ti for a in sys.residues), sys.basepoint)
    if isinstance(sys, GaugedSystem):
        return GaugedSystem(sys.base, RationalGauge(sys.n, sys.gauge.factors + H.factors))
    return GaugedSystem(sys, H)


def _unitary_with_first_column(v: np.ndarray) -> np.ndarray:
    n = v.size
    Q, _ = qr(np.column_stack([v, np.eye(n)]))
    return Q[:, :n]


@dataclass(frozen=True)
class ReductionResult:
    system: object
    T: RationalGauge
    steps: int


def _floor(x: float) -> int:
    return int(np.floor(x + 1e-6))


def reduce_exponents(sys: FuchsianSystem, max_steps: int = 200) -> ReductionResult:
    """Shift every finite exponent into 0 <= Re beta < 1 by constant conjugations and shears."""
    if not isinstance(sys, FuchsianSystem):
        raise ValidationError("reduction starts from a FuchsianSystem")
    n = sys.n
    gauge = RationalGauge(n)
    current: object = sys
    pts = sys.finite_points
    steps = 0
    for j, s in enumerate(pts):
        while True:
            if isinstance(current, FuchsianSystem):
                R = current.residues[[k for k, p in enumerate(current.points) if p != "inf"][j]]
            else:
                if not current.is_fuchsian_at(j):
                    raise NumericalError(f"reduction produced a higher-order pole at {s}")
                R = current.residue_at(j)
            w, vl, vr = eig(R, left=True, right=True)
            fl = np.array([_floor(b.real) for b in w])
            if np.all(fl == 0):
                break
            if steps >= max_steps:
                raise NumericalError("exponent reduction did not terminate")
            if fl.max() >= 1:
                i = int(np.argmax(w.real))
                # first row of T1 is a left eigenvector
                T1 = _unitary_with_first_column(vl[:, i]).conj().T
                d = [-1] + [0] * (n - 1)
            else:
                i = int(np.argmin(w.real))
                # first column of T1^-1 is a right eigenvector
                T1 = _unitary_with_first_column(vr[:, i]).conj().T
                d = [1] + [0] * (n - 1)
            gauge = gauge.then(("const", T1), ("shear", complex(s), tuple(d)))
            current = GaugedSystem(sys, gauge)
            steps += 1
    return ReductionResult(current, gauge, steps)


def splitting_via_reduction(sys: FuchsianSystem, N: int = 256) -> SplittingType:
    """Splitting type from the transition function T on a circle enclosing all finite points.

    T = Gamma^-1 z^K U with Gamma holomorphic in the plane and U near infinity;
    the splitting type is -K.
    """
    res = reduce_exponents(sys)
    pts = sys.finite_points
    rho = 4 * max(1.0, float(np.max(np.abs(pts)))) if pts.size else 1.0
    t = UnitCircleGrid(N).nodes
    samples = np.array([res.T(rho * x) for x in t])
    dets = np.abs(np.linalg.det(samples))
    if dets.min() < 1e-12:
        raise ValidationError("transition function is singular on the circle; enlarge the radius")
    loop = loop_from_samples(samples, tail_tolerance=1e-11)
    K = partial_indices(loop.transpose())
    return SplittingType.sorted([-k for k in K])
