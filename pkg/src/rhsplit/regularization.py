"""Normalized matrix logarithms and removal of jumps from piecewise transmission data.

Near each jump s_j the data is multiplied by factors built from (z - s_j)^Gamma_j,
where exp(2 pi i Gamma_j) is the jump matrix G(s_j+0)^-1 G(s_j-0) and the
eigenvalues of Gamma_j have real parts in [0, 1).  The product
G1 = (prod Omega_j+)^-1 G (prod Omega_j-) is continuous on the circle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import expm, logm, schur, solve_sylvester

from .errors import (
    BranchAmbiguityError,
    DegenerateSymbolError,
    LimitMismatchError,
    NumericalError,
    OnBranchCutError,
    ValidationError,
)
from .loop_algebra import PiecewiseLoop, UnitCircleGrid

CLUSTER_TOL = 1e-6
WINDOW_SNAP = 1e-12
WINDOW_AMBIGUOUS = 1e-9
EXP_TOL = 1e-10
LIMIT_TOL = 1e-8


def _clusters(lam: np.ndarray, tol: float) -> list[list[int]]:
    groups: list[list[int]] = []
    for i, x in enumerate(lam):
        for g in groups:
            if abs(x - lam[g[0]]) <= tol * max(1.0, abs(x)):
                g.append(i)
                break
        else:
            groups.append([i])
    return groups


def _cut_direction(args: np.ndarray) -> float:
    """Direction in the middle of the widest angular gap between eigenvalue arguments."""
    a = np.sort(np.mod(args, 2 * np.pi))
    gaps = np.diff(np.concatenate([a, [a[0] + 2 * np.pi]]))
    i = int(np.argmax(gaps))
    return float(a[i] + gaps[i] / 2)


def spectral_projector(G: np.ndarray, select: Callable[[complex], bool]) -> np.ndarray:
    """Projector onto the invariant subspace of the selected eigenvalues along the rest."""
    n = G.shape[0]
    T, Z, k = schur(G.astype(complex), output="complex", sort=select)
    if k == 0:
        return np.zeros((n, n), dtype=complex)
    if k == n:
        return np.eye(n, dtype=complex)
    Y = solve_sylvester(T[:k, :k], -T[k:, k:], -T[:k, k:])
    P = np.zeros((n, n), dtype=complex)
    P[:k, :k] = np.eye(k)
    P[:k, k:] = -Y
    return Z @ P @ Z.conj().T


def normalized_log(G, cluster_tol: float = CLUSTER_TOL) -> np.ndarray:
    """Gamma with exp(2 pi i Gamma) = G and every eigenvalue real part in [0, 1).

    A primary logarithm is taken with its branch cut placed in the widest gap
    between eigenvalue arguments; eigenvalue clusters are then moved into the
    window by integer shifts along their spectral projectors.
    """
    G = np.atleast_2d(np.asarray(G, dtype=complex))
    n = G.shape[0]
    lam = np.linalg.eigvals(G)
    scale = max(1.0, float(np.linalg.norm(G, 2)))
    if np.min(np.abs(lam)) < 1e-14 * scale:
        raise DegenerateSymbolError("matrix is singular; logarithm undefined")
    phi = _cut_direction(np.angle(lam))
    rot = np.exp(1j * (np.pi - phi))
    L = logm(rot * G) - 1j * (np.pi - phi) * np.eye(n)
    Gamma = L / (2j * np.pi)
    # real parts of the eigenvalues of Gamma on the branch used for L
    mu_branch = np.angle(lam * rot) / (2 * np.pi) - (np.pi - phi) / (2 * np.pi)
    shifts = np.zeros(n, dtype=int)
    for g in _clusters(lam, cluster_tol):
        re = float(np.mean(mu_branch[g]))
        fl = np.floor(re)
        frac = re - fl
        if 1 - frac <= WINDOW_SNAP:
            fl += 1
        elif 1 - frac <= WINDOW_AMBIGUOUS:
            raise BranchAmbiguityError(
                f"eigenvalue argument {re:.3e} sits within {1 - frac:.1e} of the window edge"
            )
        shifts[g] = -int(fl)
    for g in _clusters(lam, cluster_tol):
        s = shifts[g[0]]
        if s:
            members = lam[g]
            P = spectral_projector(
                G, lambda x, members=members: bool(np.min(np.abs(members - x)) <= cluster_tol * max(1.0, abs(x)))
            )
            Gamma = Gamma + s * P
    err = np.linalg.norm(expm(2j * np.pi * Gamma) - G) / scale
    if err > EXP_TOL:
        raise NumericalError(f"exp round trip of the normalized log is off by {err:.3e}")
    return Gamma


def log_branch(w, cut_angle: float | None = None) -> np.ndarray:
    """log w with argument in (cut_angle - 2 pi, cut_angle); principal when cut_angle is None."""
    w = np.asarray(w, dtype=complex)
    if np.any(w == 0):
        raise OnBranchCutError("log of zero")
    if cut_angle is None:
        cut_angle = np.pi
    gap = np.mod(cut_angle - np.angle(w), 2 * np.pi)
    if np.any(gap < 1e-14) or np.any(2 * np.pi - gap < 1e-14):
        raise OnBranchCutError("point lies on the branch cut")
    return np.log(np.abs(w)) + 1j * (cut_angle - gap)


def matrix_power(z, Gamma, s: complex = 0.0, cut_angle: float | None = None) -> np.ndarray:
    """(z - s)^Gamma = exp(Gamma log(z - s)) on the plane cut along the ray at cut_angle."""
    Gamma = np.atleast_2d(np.asarray(Gamma, dtype=complex))
    lg = log_branch(np.asarray(z, dtype=complex) - s, cut_angle)
    return expm(lg[..., None, None] * Gamma)


@dataclass(frozen=True)
class JumpFactor:
    s: complex
    jump: np.ndarray  # G(s+0)^-1 G(s-0)
    Gamma: np.ndarray
    A: np.ndarray
    B: np.ndarray
    plus_value: np.ndarray  # G(s+0)
    z0: complex

    def omega_plus(self, z) -> np.ndarray:
        """A G(s+0) (z - s)^Gamma, cut along the outward ray through s."""
        P = matrix_power(z, self.Gamma, self.s, cut_angle=float(np.angle(self.s)))
        return self.A @ self.plus_value @ P

    def omega_minus(self, z) -> np.ndarray:
        """B ((z - s) / (z - z0))^Gamma, cut along the segment from z0 to s."""
        z = np.asarray(z, dtype=complex)
        w = (z - self.s) / (z - self.z0)
        return self.B @ matrix_power(w, self.Gamma)


def _ordered_product(mats: Sequence[np.ndarray], n: int, shape=()) -> np.ndarray:
    out = np.broadcast_to(np.eye(n, dtype=complex), shape + (n, n)).copy()
    for m in mats:
        out = out @ m
    return out


def build_regularizers(data: PiecewiseLoop, z0: complex = 0.0) -> list[JumpFactor]:
    """Per-jump factors with A_j = [prod_{k<j} Omega_k+(s_j)]^-1 and likewise B_j."""
    if abs(z0) >= 1:
        raise ValidationError("z0 must lie inside the unit disk")
    n = data.n
    factors: list[JumpFactor] = []
    for j, s in enumerate(data.jumps):
        gp = data.plus_limit(j)
        jump = np.linalg.solve(gp, data.minus_limit(j))
        Gamma = normalized_log(jump)
        try:
            A = np.linalg.inv(_ordered_product([f.omega_plus(s) for f in factors], n))
            B = np.linalg.inv(_ordered_product([f.omega_minus(s) for f in factors], n))
        except OnBranchCutError as exc:
            raise ValidationError(f"jump {j} coincides with an earlier factor's branch point") from exc
        factors.append(JumpFactor(complex(s), jump, Gamma, A, B, gp, complex(z0)))
    return factors


@dataclass(frozen=True)
class RegularizedLoop:
    data: PiecewiseLoop
    factors: tuple
    z0: complex

    def evaluate(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=complex)
        n = self.data.n
        G = self.data.evaluate(t)
        if not self.factors:
            return G
        P = _ordered_product([f.omega_plus(t) for f in self.factors], n, t.shape)
        M = _ordered_product([f.omega_minus(t) for f in self.factors], n, t.shape)
        return np.linalg.solve(P, G @ M)

    __call__ = evaluate

    def samples(self, N: int) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and values of G1 on the N-grid with jump nodes removed."""
        t = UnitCircleGrid(N).nodes
        if self.data.m:
            keep = np.min(np.abs(t[:, None] - self.data.jumps[None, :]), axis=1) > 1e-12
            t = t[keep]
        return t, self.evaluate(t)

    def one_sided_limits(self, j: int, **kw) -> tuple[np.ndarray, np.ndarray]:
        f = self.factors[j]
        exps = limit_exponents(f.Gamma)
        logs = 2 * (self.data.n - 1) if _has_repeated(f.Gamma) else 0
        s = self.data.jumps[j]
        plus = one_sided_limit(self.evaluate, s, +1, exps, logs, **kw)
        minus = one_sided_limit(self.evaluate, s, -1, exps, logs, **kw)
        return plus, minus

    def jump_defects(self) -> list[float]:
        out = []
        for j in range(self.data.m):
            lp, lm = self.one_sided_limits(j)
            out.append(float(np.linalg.norm(lp - lm, 2) / max(1.0, np.linalg.norm(lp, 2))))
        return out


def _has_repeated(Gamma: np.ndarray) -> bool:
    mu = np.linalg.eigvals(Gamma)
    return any(abs(a - b) < 1e-6 for i, a in enumerate(mu) for b in mu[i + 1 :])


def limit_exponents(Gamma: np.ndarray, max_re: float = 3.2) -> list[complex]:
    """Powers eps^p that can appear near a jump: p = k + mu_b - mu_a with 0 < Re p < max_re."""
    mu = np.linalg.eigvals(Gamma)
    out: list[complex] = []
    for a in mu:
        for b in mu:
            for k in range(0, int(np.ceil(max_re)) + 2):
                p = k + b - a
                if 1e-9 < p.real < max_re and all(abs(p - q) > 1e-7 for q in out):
                    out.append(complex(p))
    return out


def one_sided_limit(
    f: Callable,
    s: complex,
    side: int,
    exponents: Sequence[complex] = (1, 2, 3),
    log_power: int = 0,
    offsets: np.ndarray | None = None,
) -> np.ndarray:
    """Limit of f(s e^(i side eps)) as eps -> 0+ by least-squares Richardson extrapolation.

    f is fitted on geometric offsets by L + sum_p sum_l c_pl eps^p log(eps)^l.
    """
    eps = np.geomspace(1e-6, 1e-3, 24) if offsets is None else np.asarray(offsets, dtype=float)
    t = s * np.exp(1j * side * eps)
    vals = np.asarray(f(t))
    shape = vals.shape[1:]
    Y = vals.reshape(eps.size, -1)
    le = np.log(eps)
    cols = [np.ones_like(eps, dtype=complex)]
    for p in exponents:
        for l in range(log_power + 1):
            c = eps**p * le**l
            cols.append(c / np.abs(c).max())
    X = np.stack(cols, axis=1)
    if X.shape[1] >= eps.size:
        raise ValidationError("too many extrapolation terms for the number of offsets")
    coef, *_ = np.linalg.lstsq(X, Y, rcond=None)
    return coef[0].reshape(shape)


def regularize_transmission(data: PiecewiseLoop, z0: complex = 0.0, tol: float = LIMIT_TOL) -> RegularizedLoop:
    """Continuous loop G1 = (prod Omega+)^-1 G (prod Omega-) with verified one-sided limits."""
    reg = RegularizedLoop(data, tuple(build_regularizers(data, z0)), complex(z0))
    defects = reg.jump_defects()
    for j, d in enumerate(defects):
        if d > tol:
            raise LimitMismatchError(f"one-sided limits at jump {j} differ by {d:.3e}")
    return reg
