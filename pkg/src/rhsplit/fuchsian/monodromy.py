"""Monodromy generators by numerical continuation of the fundamental solution.

Each generator loop runs from the basepoint z0 along a straight ray to a small
circle around s_i, once counterclockwise around it, and back along the ray.
With Phi(z0) = I the continued solution is Phi(z) G_i, so for a path made of
loops a then b the continuation matrix is G_b G_a.  Finite generators are
ordered by increasing argument of s_i - z0 (counterclockwise sweep as seen from
z0); a generator around infinity, when it is singular, goes last.  With this
ordering G_last ... G_2 G_1 = I.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NumericalError, ValidationError
from .paths import check_clearance, segment_distance, transport_circle, transport_segment
from .systems import INF

RELATION_TOL = 1e-8


@dataclass(frozen=True)
class MonodromyRep:
    """Generators indexed like ``points``; ``order`` lists point indices in relation order."""

    points: tuple
    generators: tuple
    basepoint: complex
    order: tuple
    relation_defect: float

    def generator(self, point) -> np.ndarray:
        for p, g in zip(self.points, self.generators):
            if p == point or (p != INF and point != INF and abs(p - complex(point)) < 1e-12):
                return g
        raise KeyError(point)

    def relation_product(self) -> np.ndarray:
        n = self.generators[0].shape[0]
        out = np.eye(n, dtype=complex)
        for i in self.order:
            out = self.generators[i] @ out
        return out


def circle_radius(sys, j: int) -> float:
    return 0.25 * sys.min_distance(j)


def choose_basepoint(sys) -> complex:
    """Basepoint near -2 max|s|, rotated slightly when a ray would graze another point."""
    pts = sys.finite_points
    R = max(1.0, float(np.max(np.abs(pts))))
    radii = [circle_radius(sys, j) for j in range(pts.size)]
    for k in range(0, 121):
        delta = 0.025 * ((k + 1) // 2) * (1 if k % 2 else -1)
        z0 = 2 * R * np.exp(1j * (np.pi + delta))
        ok = True
        for j, s in enumerate(pts):
            end = s + radii[j] * (z0 - s) / abs(z0 - s)
            for i, p in enumerate(pts):
                if i != j and segment_distance(p, z0, end) < 1.25 * radii[i]:
                    ok = False
        if ok:
            return complex(z0)
    raise ValidationError("no basepoint with clear rays found")


def _generator_finite(sys, j: int, z0: complex, rtol: float, atol: float) -> np.ndarray:
    s = sys.finite_points[j]
    r = circle_radius(sys, j)
    direction = (z0 - s) / abs(z0 - s)
    start = s + r * direction
    check_clearance(sys.finite_points, z0, start, 1e-3 * r, exclude=j)
    ray = transport_segment(sys, z0, start, rtol=rtol, atol=atol)
    circ = transport_circle(sys, s, r, float(np.angle(direction)), +1, rtol=rtol, atol=atol)
    return np.linalg.solve(ray, circ @ ray)


def _generator_infinity(sys, z0: complex, rtol: float, atol: float) -> np.ndarray:
    rho = 2 * abs(z0)
    start = z0 * rho / abs(z0)
    ray = transport_segment(sys, z0, start, rtol=rtol, atol=atol)
    # clockwise around the origin is counterclockwise around infinity
    circ = transport_circle(sys, 0.0, rho, float(np.angle(z0)), -1, rtol=rtol, atol=atol)
    return np.linalg.solve(ray, circ @ ray)


def monodromy(sys, rtol: float = 1e-12, atol: float = 1e-14, tol: float = RELATION_TOL) -> MonodromyRep:
    """Monodromy generators of a Fuchsian or regular system and the product-relation defect."""
    z0 = sys.basepoint if sys.basepoint is not None else choose_basepoint(sys)
    pts = sys.finite_points
    if pts.size and np.min(np.abs(pts - z0)) < 1e-3 * min(circle_radius(sys, j) for j in range(pts.size)):
        raise ValidationError("basepoint too close to a singular point")
    gens = [_generator_finite(sys, j, z0, rtol, atol) for j in range(pts.size)]
    points: list = [complex(p) for p in pts]
    angle = np.angle((pts - z0) / (-z0)) if z0 != 0 else np.angle(pts - z0)
    order = [int(i) for i in np.argsort(angle, kind="stable")]
    if sys.infinity_singular:
        gens.append(_generator_infinity(sys, z0, rtol, atol))
        points.append(INF)
        order.append(len(gens) - 1)
    for g in gens:
        if abs(np.linalg.det(g)) < 1e-12:
            raise NumericalError("a monodromy generator came out singular")
    rep = MonodromyRep(tuple(points), tuple(gens), complex(z0), tuple(order), 0.0)
    defect = float(np.abs(rep.relation_product() - np.eye(sys.n)).max())
    rep = MonodromyRep(rep.points, rep.generators, rep.basepoint, rep.order, defect)
    if defect > tol:
        raise NumericalError(f"product relation defect {defect:.3e} exceeds {tol:g}")
    return rep
