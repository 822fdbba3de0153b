"""Linear ODE systems df/dz = A(z) f on the Riemann sphere with finitely many singular points."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import ValidationError

INF = "inf"
RESIDUE_SUM_TOL = 1e-12


def _mat(a) -> np.ndarray:
    a = np.array(np.atleast_2d(a), dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    a.setflags(write=False)
    return a


def _check_distinct(points: Sequence[complex], tol: float = 1e-12) -> None:
    for i, a in enumerate(points):
        for b in points[i + 1 :]:
            if abs(a - b) <= tol:
                raise ValidationError(f"marked points {a} and {b} coincide")


def laurent_coefficients(coefficient, s: complex, radius: float, ks: Sequence[int], samples: int = 64) -> dict:
    """Laurent coefficients c_k of A(z) = sum_k c_k (z - s)^k by the trapezoid rule on |z - s| = radius."""
    theta = 2 * np.pi * np.arange(samples) / samples
    u = radius * np.exp(1j * theta)
    vals = np.array([coefficient(s + x) for x in u])
    return {k: np.tensordot(u ** (-k), vals, axes=(0, 0)) / samples for k in ks}


class _SystemBase:
    """Shared interface: n, finite_points, coefficient(z), infinity data."""

    n: int
    basepoint: complex | None

    @property
    def finite_points(self) -> np.ndarray:
        raise NotImplementedError

    def coefficient(self, z: complex) -> np.ndarray:
        raise NotImplementedError

    def infinity_residue(self) -> np.ndarray:
        raise NotImplementedError

    @property
    def infinity_singular(self) -> bool:
        return bool(np.abs(self.infinity_residue()).max() > RESIDUE_SUM_TOL) or self.infinity_pole_order() > 1

    def infinity_pole_order(self) -> int:
        return 1

    def min_distance(self, j: int) -> float:
        pts = self.finite_points
        others = np.delete(pts, j)
        return float(np.min(np.abs(others - pts[j]))) if others.size else max(1.0, abs(pts[j]))

    def marked_points(self) -> list:
        pts: list = [complex(p) for p in self.finite_points]
        if self.infinity_singular:
            pts.append(INF)
        return pts


@dataclass(frozen=True)
class FuchsianSystem(_SystemBase):
    """df = sum_i A_i dz / (z - s_i) f.

    ``points`` may contain ``INF``; the residue stored there is the residue of the
    1-form in the coordinate w = 1/z, which equals minus the sum of the finite residues.
    """

    points: tuple
    residues: tuple
    basepoint: complex | None = None

    def __post_init__(self):
        pts = tuple(INF if (isinstance(p, str) and p == INF) else complex(p) for p in self.points)
        res = tuple(_mat(a) for a in self.residues)
        if len(pts) != len(res) or not pts:
            raise ValidationError("need one residue per marked point")
        if len({a.shape for a in res}) != 1:
            raise ValidationError("residues must share one size")
        if sum(p == INF for p in pts) > 1:
            raise ValidationError("infinity listed twice")
        _check_distinct([p for p in pts if p != INF])
        if self.basepoint is not None:
            object.__setattr__(self, "basepoint", complex(self.basepoint))
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "residues", res)

    @property
    def n(self) -> int:
        return self.residues[0].shape[0]

    @property
    def finite_points(self) -> np.ndarray:
        return np.array([p for p in self.points if p != INF], dtype=complex)

    @property
    def finite_residues(self) -> list[np.ndarray]:
        return [a for p, a in zip(self.points, self.residues) if p != INF]

    def coefficient(self, z: complex) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=complex)
        for s, a in zip(self.finite_points, self.finite_residues):
            out += a / (z - s)
        return out

    def infinity_residue(self) -> np.ndarray:
        return -sum(self.finite_residues)

    def residue_at(self, j: int) -> np.ndarray:
        if self.points[j] == INF:
            return self.infinity_residue()
        return self.residues[j]

    def with_infinity(self) -> "FuchsianSystem":
        """Same system with infinity listed explicitly when it is singular."""
        if INF in self.points or not self.infinity_singular:
            return self
        return FuchsianSystem(self.points + (INF,), self.residues + (self.infinity_residue(),), self.basepoint)


def validate_fuchsian(sys: FuchsianSystem, tol: float = RESIDUE_SUM_TOL) -> dict:
    """Check that the residues over all marked points (including infinity if listed) sum to zero."""
    total = sum(sys.residues)
    scale = max(1.0, max(float(np.abs(a).max()) for a in sys.residues))
    defect = float(np.abs(total).max())
    return {
        "valid": defect <= tol * scale,
        "residue_sum_defect": defect,
        "infinity_marked": INF in sys.points,
        "eigenvalues": [np.linalg.eigvals(a) for a in sys.residues],
    }


@dataclass(frozen=True)
class RegularSystem(_SystemBase):
    """A(z) = sum_j sum_k C_jk / (z - s_j)^k + sum_d P_d z^d.

    ``principal_parts[j][k-1]`` is C_jk.  The polynomial part is optional.
    """

    points: tuple
    principal_parts: tuple
    polynomial: tuple = field(default_factory=tuple)
    basepoint: complex | None = None

    def __post_init__(self):
        pts = tuple(complex(p) for p in self.points)
        parts = tuple(tuple(_mat(c) for c in pp) for pp in self.principal_parts)
        if len(pts) != len(parts) or not pts or any(len(pp) == 0 for pp in parts):
            raise ValidationError("need a nonempty principal part per marked point")
        _check_distinct(list(pts))
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "principal_parts", parts)
        object.__setattr__(self, "polynomial", tuple(_mat(p) for p in self.polynomial))
        if self.basepoint is not None:
            object.__setattr__(self, "basepoint", complex(self.basepoint))

    @classmethod
    def from_fuchsian(cls, sys: FuchsianSystem) -> "RegularSystem":
        return cls(tuple(sys.finite_points), tuple((a,) for a in sys.finite_residues), basepoint=sys.basepoint)

    @property
    def n(self) -> int:
        return self.principal_parts[0][0].shape[0]

    @property
    def finite_points(self) -> np.ndarray:
        return np.array(self.points, dtype=complex)

    def coefficient(self, z: complex) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=complex)
        for s, pp in zip(self.points, self.principal_parts):
            u = z - s
            for k, c in enumerate(pp, start=1):
                out += c / u**k
        for d, p in enumerate(self.polynomial):
            out += p * z**d
        return out

    def pole_order(self, j: int, tol: float = 1e-14) -> int:
        pp = self.principal_parts[j]
        nz = [k for k, c in enumerate(pp, start=1) if np.abs(c).max() > tol]
        return max(nz) if nz else 0

    def infinity_residue(self) -> np.ndarray:
        return -sum(pp[0] for pp in self.principal_parts)

    def infinity_pole_order(self) -> int:
        # in w = 1/z, z^d dz = -w^(-d-2) dw
        nz = [d for d, p in enumerate(self.polynomial) if np.abs(p).max() > 0]
        return max(nz) + 2 if nz else 1

    def is_fuchsian_at(self, j: int) -> bool:
        return self.pole_order(j) <= 1
