"""Scalar equation from one row of a system, and counting zeros of its Wronskian.

For a solution f of f' = A f, the scalar y = e_r^T f has derivatives
y^(k) = e_r^T A_k f with A_0 = I and A_{k+1} = A_k' + A_k A.  Stacking these
rows into M(z) gives the Wronskian W = det M det Phi.  Zeros of W off the
singular points are apparent singularities of the scalar equation; they are
counted with the single-valued log-derivative W'/W = tr(M^-1 M') + tr A.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from ..errors import DegenerateSymbolError, NumericalError, UnderResolvedError, ValidationError
from ..loop_algebra import winding_number
from .systems import FuchsianSystem

JET_SAMPLES = 64


def coefficient_jet(sys, z: complex, order: int) -> np.ndarray:
    """Taylor coefficients A^(m)(z)/m! for m = 0..order."""
    if isinstance(sys, FuchsianSystem):
        out = np.zeros((order + 1, sys.n, sys.n), dtype=complex)
        for s, R in zip(sys.finite_points, sys.finite_residues):
            u = z - s
            for m in range(order + 1):
                out[m] += (-1) ** m * R / u ** (m + 1)
        return out
    pts = sys.finite_points
    rho = 0.5 * float(np.min(np.abs(pts - z))) if pts.size else 1.0
    theta = 2 * np.pi * np.arange(JET_SAMPLES) / JET_SAMPLES
    w = rho * np.exp(1j * theta)
    vals = np.array([sys.coefficient(z + x) for x in w])
    return np.array([np.tensordot(w ** (-m), vals, axes=(0, 0)) / JET_SAMPLES for m in range(order + 1)])


def _jet_mul(a: np.ndarray, b: np.ndarray, L: int) -> np.ndarray:
    out = np.zeros((L,) + a.shape[1:], dtype=complex)
    for i in range(min(L, a.shape[0])):
        for j in range(min(L - i, b.shape[0])):
            out[i + j] += a[i] @ b[j]
    return out


def _jet_diff(a: np.ndarray) -> np.ndarray:
    m = np.arange(1, a.shape[0])
    return a[1:] * m[:, None, None]


@dataclass(frozen=True)
class Scalarization:
    system: object
    row: int = 0

    def __post_init__(self):
        if not 0 <= self.row < self.system.n:
            raise ValidationError("row index out of range")
        rng = np.random.default_rng(12345)
        pts = self.system.finite_points
        R = 1.0 + (float(np.max(np.abs(pts))) if pts.size else 0.0)
        probes = R * (0.3 + rng.random(5)) * np.exp(2j * np.pi * rng.random(5))
        dets = [abs(np.linalg.det(self.matrix(z))) for z in probes]
        if max(dets) < 1e-12:
            raise DegenerateSymbolError("Wronskian vanishes identically for this row")

    @property
    def n(self) -> int:
        return self.system.n

    def _chain(self, z: complex):
        """A_k(z) and A_k'(z) for k = 0..n."""
        n = self.n
        L = n + 2
        Aj = coefficient_jet(self.system, z, L)
        cur = np.zeros((L, n, n), dtype=complex)
        cur[0] = np.eye(n)
        vals, ders = [], []
        for k in range(n + 1):
            vals.append(cur[0])
            d = _jet_diff(cur)
            ders.append(d[0] if d.shape[0] else np.zeros((n, n), dtype=complex))
            Lk = cur.shape[0] - 1
            cur = d[:Lk] + _jet_mul(cur, Aj, Lk)
        return vals, ders

    def matrix(self, z: complex) -> np.ndarray:
        vals, _ = self._chain(z)
        return np.array([v[self.row] for v in vals[: self.n]])

    def scalar_coefficients(self, z: complex) -> np.ndarray:
        """c with y^(n) = sum_k c_k y^(k)."""
        vals, _ = self._chain(z)
        M = np.array([v[self.row] for v in vals[: self.n]])
        return np.linalg.solve(M.T, vals[self.n][self.row])

    def log_derivative(self, z: complex) -> complex:
        vals, ders = self._chain(z)
        M = np.array([v[self.row] for v in vals[: self.n]])
        dM = np.array([d[self.row] for d in ders[: self.n]])
        return complex(np.trace(np.linalg.solve(M, dM)) + np.trace(self.system.coefficient(z)))

    def wronskian(self, z: complex, z0: complex | None = None) -> complex:
        """det M(z) det Phi(z), with det Phi(z0) = 1 and det Phi continued along [z0, z]."""
        if z0 is None:
            pts = self.system.finite_points
            z0 = -2.0 * (1.0 + (float(np.max(np.abs(pts))) if pts.size else 0.0)) + 0.1j
        d = z - z0

        def tr(t, part):
            v = np.trace(self.system.coefficient(z0 + t * d)) * d
            return v.real if part == 0 else v.imag

        re = quad(tr, 0, 1, args=(0,), limit=200, epsabs=1e-13)[0]
        im = quad(tr, 0, 1, args=(1,), limit=200, epsabs=1e-13)[0]
        return complex(np.linalg.det(self.matrix(z)) * np.exp(re + 1j * im))


def scalarize(sys, row: int = 0) -> Scalarization:
    return Scalarization(sys, row)


def _contour_integral(f: Callable, center: complex, radius: float, samples: int) -> complex:
    """(1/2 pi i) integral of f over the circle, trapezoid rule."""
    z = center + radius * np.exp(2j * np.pi * np.arange(samples) / samples)
    return complex(np.mean([f(x) * (x - center) for x in z]))


def count_wronskian_zeros(evaluator, radius: float, samples: int = 512, tol: float = 1e-6) -> int:
    """Number of zeros of W inside |z| < radius, excluding the singular points themselves.

    ``evaluator`` is a Scalarization (log-derivative contour integrals, with the
    contributions of enclosed singular points removed) or a plain callable W
    (winding number of its values).
    """
    if isinstance(evaluator, Scalarization):
        total = _contour_integral(evaluator.log_derivative, 0.0, radius, samples)
        pts = evaluator.system.finite_points
        if pts.size and np.min(np.abs(np.abs(pts) - radius)) < 1e-3 * radius:
            raise ValidationError("a singular point lies on the contour")
        for j, s in enumerate(pts):
            if abs(s) < radius:
                r = 0.25 * evaluator.system.min_distance(j)
                total -= _contour_integral(evaluator.log_derivative, s, r, 256)
        k = round(total.real)
        if abs(total - k) > tol:
            raise NumericalError(f"zero count {total:.8g} is not an integer")
        return int(k)
    N = samples
    for _ in range(6):
        z = radius * np.exp(2j * np.pi * np.arange(N) / N)
        vals = np.array([evaluator(x) for x in z], dtype=complex)
        if np.min(np.abs(vals)) < 1e-14 * max(1.0, np.max(np.abs(vals))):
            raise ValidationError("W vanishes on the contour")
        try:
            return winding_number(vals)
        except UnderResolvedError:
            N *= 2
    raise UnderResolvedError("winding of W did not resolve")
