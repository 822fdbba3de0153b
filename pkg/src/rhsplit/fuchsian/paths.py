"""Transport of the fundamental solution along straight segments and circles."""

from __future__ import annotations

import numpy as np
from scipy.integrate import solve_ivp

from ..errors import IntegrationError, ValidationError

RTOL = 1e-12
ATOL = 1e-14


def _integrate(sys, z_of, dz_of, tau_end: float, Y0: np.ndarray, t_eval=None, rtol=RTOL, atol=ATOL):
    n = sys.n

    def rhs(tau, y):
        z = z_of(tau)
        A = sys.coefficient(z) * dz_of(tau)
        return (A @ y.reshape(n, n)).reshape(-1)

    sol = solve_ivp(
        rhs, (0.0, tau_end), Y0.reshape(-1).astype(complex), method="DOP853", rtol=rtol, atol=atol, t_eval=t_eval
    )
    if not sol.success:
        raise IntegrationError(f"integrator failed: {sol.message}")
    return sol


def transport_segment(sys, a: complex, b: complex, Y0=None, **kw) -> np.ndarray:
    """Solution at b of dY/dz = A Y along the segment [a, b] with Y(a) = Y0 (identity by default)."""
    Y0 = np.eye(sys.n, dtype=complex) if Y0 is None else Y0
    d = b - a
    sol = _integrate(sys, lambda t: a + t * d, lambda t: d, 1.0, Y0, **kw)
    return sol.y[:, -1].reshape(sys.n, sys.n)


def transport_circle(sys, center: complex, radius: float, start_angle: float, direction: int = 1, Y0=None, t_eval=None, **kw):
    """Transport once around the circle |z - center| = radius starting at angle start_angle.

    Returns the final matrix, or (angles, samples) when t_eval is given.
    """
    Y0 = np.eye(sys.n, dtype=complex) if Y0 is None else Y0

    def z_of(t):
        return center + radius * np.exp(1j * (start_angle + direction * t))

    def dz_of(t):
        return 1j * direction * radius * np.exp(1j * (start_angle + direction * t))

    sol = _integrate(sys, z_of, dz_of, 2 * np.pi, Y0, t_eval=t_eval, **kw)
    if t_eval is None:
        return sol.y[:, -1].reshape(sys.n, sys.n)
    return sol.t, sol.y.T.reshape(-1, sys.n, sys.n)


def segment_distance(p: complex, a: complex, b: complex) -> float:
    d = b - a
    if d == 0:
        return abs(p - a)
    t = np.clip(((p - a) * np.conj(d)).real / abs(d) ** 2, 0.0, 1.0)
    return float(abs(p - (a + t * d)))


def check_clearance(points, a: complex, b: complex, min_dist: float, exclude=None) -> None:
    for k, s in enumerate(points):
        if exclude is not None and k == exclude:
            continue
        if segment_distance(s, a, b) < min_dist:
            raise ValidationError(f"path from {a} to {b} passes within {min_dist:.2e} of singular point {s}")
