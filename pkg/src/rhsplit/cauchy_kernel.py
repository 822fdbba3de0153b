"""Cauchy integrals over the unit circle, principal values and the transmission problem.

The singular operator is discretized on the grid t_k = exp(2 pi i k / N) by the
trapezoid rule with the singularity subtracted analytically:

    PV[phi](t0) = (1/2 pi i) PV int phi(t) dt / (t - t0)
                = (1/2 pi i) int (phi(t) - phi(t0)) dt / (t - t0) + phi(t0) / 2

The regularized integrand equals phi'(t0) at t = t0; that value is supplied by
spectral differentiation, so the rule is exact on Fourier modes |m| < N/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import RankAmbiguityError, ValidationError, NumericalError
from .loop_algebra import MatrixLoop, UnitCircleGrid

RANK_CUTOFF = 1e-8
# singular values inside this relative band make the rank decision unsafe
AMBIGUITY_BAND = (1e-11, 1e-6)
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class Density:
    """Samples phi(t_k) on the unit-circle grid; trailing axes hold vector/matrix values."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        UnitCircleGrid(v.shape[0])
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, f, N: int) -> "Density":
        t = UnitCircleGrid(N).nodes
        return cls(np.array([f(x) for x in t]))

    @property
    def N(self) -> int:
        return self.values.shape[0]

    @property
    def grid(self) -> UnitCircleGrid:
        return UnitCircleGrid(self.N)


@lru_cache(maxsize=16)
def _pv_matrix_cached(N: int) -> np.ndarray:
    t = UnitCircleGrid(N).nodes
    diff = t[None, :] - t[:, None]
    np.fill_diagonal(diff, 1.0)
    S = t[None, :] / (N * diff)
    np.fill_diagonal(S, 0.0)
    S[np.diag_indices(N)] = 0.5 - S.sum(axis=1)
    # spectral d/dtheta, Nyquist mode dropped
    m = np.fft.fftfreq(N, 1.0 / N)
    m[N // 2] = 0.0
    F = np.fft.fft(np.eye(N), axis=0)
    D = np.fft.ifft(1j * m[:, None] * F, axis=0)
    S = S + D / (1j * N)
    S.setflags(write=False)
    return S


def pv_matrix(N: int) -> np.ndarray:
    """Matrix of the principal-value operator acting on grid samples."""
    UnitCircleGrid(N)
    return _pv_matrix_cached(N)


def _apply(S: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.tensordot(S, v, axes=(1, 0))


def cauchy_offcurve(density: Density, z: complex):
    """(1/2 pi i) int phi(t) dt / (t - z) for z off the unit circle."""
    z = complex(z)
    if abs(abs(z) - 1.0) < 1e-14:
        raise ValidationError("z lies on the unit circle; use principal_value or plemelj_boundary")
    t = density.grid.nodes
    w = t / (density.N * (t - z))
    return _apply(w[None, :], density.values)[0]


def principal_value(density: Density, k: int | None = None, t0: complex | None = None):
    """Principal value of the Cauchy integral at grid node index k (or node t0)."""
    N = density.N
    if k is None:
        if t0 is None:
            raise ValidationError("give a node index k or a node t0")
        k = int(round(np.angle(t0) / (2 * np.pi) * N)) % N
        if abs(UnitCircleGrid(N).nodes[k] - t0) > 1e-12:
            raise ValidationError("t0 is not a grid node")
    S = pv_matrix(N)
    return _apply(S[k : k + 1], density.values)[0]


def plemelj_boundary(density: Density) -> tuple[np.ndarray, np.ndarray]:
    """Boundary traces (Phi+, Phi-) from inside and outside the disk."""
    pv = _apply(pv_matrix(density.N), density.values)
    half = density.values / 2
    return pv + half, pv - half


def _poly_values(gamma: np.ndarray, z) -> np.ndarray:
    """gamma has shape (p+1, n): gamma(z) = sum_p gamma[p] z**p."""
    z = np.asarray(z, dtype=complex)
    powers = z[..., None] ** np.arange(gamma.shape[0])
    return powers @ gamma


@dataclass(frozen=True)
class PiecewiseHolomorphic:
    """Phi(z) = Cauchy integral of a density plus a polynomial part gamma at infinity."""

    density: Density
    gamma: np.ndarray  # shape (p+1, n)

    def __call__(self, z: complex) -> np.ndarray:
        return cauchy_offcurve(self.density, z) + _poly_values(self.gamma, z)

    def boundary(self) -> tuple[np.ndarray, np.ndarray]:
        plus, minus = plemelj_boundary(self.density)
        g = _poly_values(self.gamma, self.density.grid.nodes)
        return plus + g, minus + g

    @property
    def pole_order(self) -> int:
        nz = np.flatnonzero(np.linalg.norm(self.gamma, axis=1) > 1e-10)
        return int(nz[-1]) if nz.size and nz[-1] > 0 else 0


@dataclass(frozen=True)
class TransmissionSystem:
    """Discretized A phi + (B / pi i) PV int phi dt/(t - t0) = F on the grid.

    Unknown ordering is node-major: index k * n + i holds phi_i(t_k).
    """

    A: np.ndarray  # (N, n, n)
    B: np.ndarray  # (N, n, n)
    F: np.ndarray  # (N, n)
    matrix: np.ndarray  # (nN, nN)

    @property
    def rhs(self) -> np.ndarray:
        return self.F.reshape(-1)


def _block_diag(blocks: np.ndarray) -> np.ndarray:
    N, n, _ = blocks.shape
    out = np.zeros((N * n, N * n), dtype=complex)
    for k in range(N):
        out[k * n : (k + 1) * n, k * n : (k + 1) * n] = blocks[k]
    return out


def _operator_matrix(Gs: np.ndarray) -> np.ndarray:
    N, n, _ = Gs.shape
    eye = np.eye(n)
    A = eye + Gs
    B = eye - Gs
    S = pv_matrix(N)
    # (B/pi i) PV int = 2 B S
    return _block_diag(A) + _block_diag(2 * B) @ np.kron(S, eye)


def assemble_transmission_system(G: MatrixLoop, gamma=None, N: int | None = None) -> TransmissionSystem:
    """Singular integral system for the density of Phi = C[phi] + gamma.

    Substituting the Plemelj formulas into Phi+ = G Phi- gives
    (1 + G) phi + 2 (1 - G) PV[phi] = 2 (G - 1) gamma on the circle.
    """
    N = N or G.grid_size
    Gs = G.samples(N)
    n = G.n
    gamma = np.zeros((1, n)) if gamma is None else np.atleast_2d(np.asarray(gamma, dtype=complex))
    if gamma.shape[1] != n:
        raise ValidationError(f"gamma must have shape (p+1, {n})")
    eye = np.eye(n)
    g = _poly_values(gamma, UnitCircleGrid(N).nodes)
    F = 2 * np.einsum("kij,kj->ki", Gs - eye, g)
    return TransmissionSystem(eye + Gs, eye - Gs, F, _operator_matrix(Gs))


def null_space(M: np.ndarray, cutoff: float = RANK_CUTOFF, band=AMBIGUITY_BAND) -> np.ndarray:
    """Orthonormal null-space basis (columns) with a guarded relative rank cutoff."""
    _, s, vh = np.linalg.svd(M)
    smax = s[0] if s.size else 1.0
    rel = s / smax
    amb = (rel > band[0]) & (rel < band[1])
    if np.any(amb):
        raise RankAmbiguityError(
            f"singular value {s[amb][0]:.3e} (relative {rel[amb][0]:.3e}) lies near the rank cutoff; refine the grid"
        )
    rank = int(np.sum(rel > cutoff))
    return vh[rank:].conj().T


def solve_rhtp(
    G: MatrixLoop,
    pole_order_at_infinity: int = 0,
    N: int | None = None,
    cutoff: float = RANK_CUTOFF,
) -> list[PiecewiseHolomorphic]:
    """Basis of solutions of Phi+ = G Phi- with pole order at most p at infinity.

    The density is parameterized by its Fourier modes |m| <= N/4 so that products
    with G stay below the Nyquist frequency; the grid system is then imposed at
    all N nodes and solved for its null space together with the coefficients of
    the polynomial part.
    """
    p = int(pole_order_at_infinity)
    if p < 0:
        raise ValidationError("pole order must be >= 0")
    N = N or max(G.grid_size, 128)
    if G.degree_span + 2 > N // 4:
        raise ValidationError("grid too small for the symbol degree; increase N")
    n = G.n
    Gs = G.samples(N)
    G.check_invertible(N)
    t = UnitCircleGrid(N).nodes
    modes = np.arange(-(N // 4), N // 4 + 1)
    E = t[:, None] ** modes[None, :]  # samples from coefficients
    eye = np.eye(n)
    Eb = np.kron(E, eye)
    op = _operator_matrix(Gs) @ Eb
    polys = np.zeros((N * n, (p + 1) * n), dtype=complex)
    for q in range(p + 1):
        blocks = -2 * (Gs - eye) * (t**q)[:, None, None]
        for k in range(N):
            polys[k * n : (k + 1) * n, q * n : (q + 1) * n] = blocks[k]
    M = np.hstack([op, polys])
    ns = null_space(M, cutoff)
    nc = modes.size * n
    basis = []
    for v in ns.T:
        coeffs = v[:nc].reshape(modes.size, n)
        phi = E @ coeffs
        gamma = v[nc:].reshape(p + 1, n)
        sol = PiecewiseHolomorphic(Density(phi), gamma)
        plus, minus = sol.boundary()
        scale = max(np.abs(plus).max(), np.abs(minus).max(), 1e-300)
        res = np.abs(plus - np.einsum("kij,kj->ki", Gs, minus)).max() / scale
        if res > RESIDUAL_TOL:
            raise NumericalError(f"transmission residual {res:.3e} exceeds {RESIDUAL_TOL:g}")
        basis.append(sol)
    return basis


def transmission_residual(G: MatrixLoop, sol: PiecewiseHolomorphic) -> float:
    plus, minus = sol.boundary()
    Gs = G.samples(sol.density.N)
    return float(np.abs(plus - np.einsum("kij,kj->ki", Gs, minus)).max())
