"""Levelt exponents beta = phi + mu at singular points.

At a Fuchsian non-resonant point the exponents are the residue eigenvalues.
At any regular singular point they are obtained numerically: transport the
fundamental solution Phi once around a small circle to get the local
monodromy G, take E = normalized_log(G), and expand the single-valued factor
M(u) = Phi(u) u^-E in a Laurent series.  For a generalized eigenvector c of E
with eigenvalue mu, the solution M u^E c has valuation
min over l of ord(M N^l c) with N = E - mu; counting dimensions of the
subspaces with valuation >= k gives the integer exponents phi.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from ..errors import NumericalError, ResonanceError, ValidationError
from ..regularization import normalized_log, spectral_projector
from .monodromy import circle_radius
from .paths import transport_circle
from .systems import INF, FuchsianSystem

RESONANCE_TOL = 1e-8
COEFF_CUTOFF = 1e-7


@dataclass(frozen=True)
class LeveltEntry:
    point: object
    phi: tuple  # weakly decreasing integers
    mu: tuple  # 0 <= Re mu < 1, paired with phi
    method: str = "residue"

    @property
    def beta(self) -> tuple:
        return tuple(p + m for p, m in zip(self.phi, self.mu))

    @property
    def beta_sum(self) -> complex:
        return complex(sum(self.beta))


def _split(beta: complex) -> tuple[int, complex]:
    fl = int(np.floor(beta.real + 1e-8))
    return fl, beta - fl


def _entry(point, pairs, method) -> LeveltEntry:
    pairs = sorted(pairs, key=lambda pm: (-pm[0], pm[1].real, pm[1].imag))
    return LeveltEntry(point, tuple(p for p, _ in pairs), tuple(complex(m) for _, m in pairs), method)


def check_resonance(eigs, tol: float = RESONANCE_TOL) -> None:
    for i, a in enumerate(eigs):
        for b in eigs[i + 1 :]:
            d = a - b
            k = round(d.real)
            if k != 0 and abs(d - k) < tol:
                raise ResonanceError(f"eigenvalues {a:.6g} and {b:.6g} differ by the integer {k}")


def local_exponents(sys: FuchsianSystem, j: int, allow_resonant: bool = False) -> LeveltEntry:
    """Exponents at a marked point from the residue eigenvalues.

    Accepts a FuchsianSystem, or any system exposing residue_at and
    is_fuchsian_at (such as a gauge-transformed system).
    """
    if not isinstance(sys, FuchsianSystem):
        if not hasattr(sys, "residue_at") or not sys.is_fuchsian_at(j):
            raise ValidationError("point is not Fuchsian; use levelt_numeric")
    eigs = np.linalg.eigvals(sys.residue_at(j))
    if not allow_resonant:
        check_resonance(eigs)
    point = sys.points[j] if isinstance(sys, FuchsianSystem) else complex(sys.finite_points[j])
    return _entry(point, [_split(complex(b)) for b in eigs], "residue")


def fuchsian_exponents(sys: FuchsianSystem, allow_resonant: bool = False) -> list[LeveltEntry]:
    full = sys.with_infinity()
    return [local_exponents(full, j, allow_resonant) for j in range(len(full.points))]


def _local_circle(sys, point):
    """(center, radius, direction, coordinate map) for the local loop around a point."""
    if point == INF:
        R = max(1.0, float(np.max(np.abs(sys.finite_points)))) if sys.finite_points.size else 1.0
        rho = 2 * R
        return 0.0, rho, -1, 1.0 / rho
    j = int(np.argmin(np.abs(sys.finite_points - complex(point))))
    r = circle_radius(sys, j)
    return sys.finite_points[j], r, +1, r


def _null_dim(rows: list[np.ndarray], d: int, scale: float) -> int:
    if not rows:
        return d
    A = np.vstack(rows)
    s = np.linalg.svd(A, compute_uv=False)
    return d - int(np.sum(s > COEFF_CUTOFF * scale))


def levelt_numeric(sys, point, samples: int = 128) -> LeveltEntry:
    """Levelt exponents at any regular singular point (finite or INF) by continuation."""
    center, radius, direction, ur = _local_circle(sys, point)
    theta = 2 * np.pi * np.arange(samples + 1) / samples
    _, Phi = transport_circle(sys, center, radius, 0.0, direction, t_eval=theta)
    G = Phi[-1]
    E = normalized_log(G)
    # local coordinate u = z - s (or 1/z) runs counterclockwise with |u| = ur
    log_u = np.log(ur) + 1j * theta[:-1]
    M = Phi[:-1] @ expm(-log_u[:, None, None] * E)
    c = np.fft.fft(M, axis=0) / samples  # c[k] = m_k ur^k
    ks = np.fft.fftfreq(samples, 1.0 / samples).astype(int)
    coef = {int(k): c[i] for i, k in enumerate(ks)}
    scale = max(float(np.abs(c).max()), 1e-300)
    tail = max(np.abs(coef[k]).max() for k in ks if abs(k) >= samples // 2 - 4)
    if tail > 1e-9 * scale:
        raise NumericalError(f"Laurent tail {tail:.2e} too large; increase samples")
    present = [k for k in sorted(coef) if np.abs(coef[k]).max() > COEFF_CUTOFF * scale]
    if not present:
        raise NumericalError("single-valued factor vanished")
    kmin = present[0]

    lam = np.linalg.eigvals(E)
    pairs = []
    used = np.zeros(lam.size, dtype=bool)
    for i, mu in enumerate(lam):
        if used[i]:
            continue
        members = np.abs(lam - mu) < 1e-6
        used |= members
        d = int(members.sum())
        mu_c = complex(np.mean(lam[members]))
        P = spectral_projector(E, lambda x, mc=mu_c: abs(x - mc) < 1e-6)
        U, sv, _ = np.linalg.svd(P)
        B = U[:, :d]
        Nm = E - mu_c * np.eye(E.shape[0])
        powers = [np.linalg.matrix_power(Nm, l) @ B for l in range(d)]
        dims = {kmin: d}
        rows: list[np.ndarray] = []
        k = kmin
        while dims[k] > 0:
            rows.extend(coef[k] @ Np for Np in powers)
            k += 1
            dims[k] = _null_dim(rows, d, scale)
            if k > kmin + samples // 4:
                raise NumericalError("valuation search did not terminate")
        for kk in range(kmin, k):
            pairs += [(kk, mu_c)] * (dims[kk] - dims[kk + 1])
    if len(pairs) != sys.n:
        raise NumericalError("exponent count mismatch")
    return _entry(point, pairs, "numeric")


def fuchs_weight_beta(entries, tol: float = 1e-8) -> dict:
    """Sum of all exponents: an integer <= 0 that vanishes exactly for Fuchsian systems."""
    beta = complex(sum(e.beta_sum for e in entries))
    k = round(beta.real)
    integer = abs(beta - k) <= tol
    return {"beta": k if integer else beta, "integer": bool(integer), "fuchsian": bool(integer and k == 0)}


def chern_canonical(generators, tol: float = 1e-8) -> int:
    """sum of tr normalized_log(G_i); must be an integer."""
    total = complex(sum(np.trace(normalized_log(G)) for G in generators))
    k = round(total.real)
    if abs(total - k) > tol:
        raise NumericalError(f"sum of traces {total:.12g} is not an integer")
    return int(k)
