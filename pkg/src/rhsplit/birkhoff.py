"""Birkhoff factorization G = f- d_K f+ and partial indices of matrix loops.

Partial indices are read off from kernel dimensions of finite Toeplitz
sections.  For the transposed symbol H = G^T, let

    D(m) = dim { Phi- polynomial in 1/t : t^(-m) H Phi- is analytic in the disk }.

Writing H = (f+)^T d_K (f-)^T shows D(m) = sum_i max(k_i - m + 1, 0), so
c(m) = D(m) - D(m + 1) counts the indices k_i >= m.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cauchy_kernel import AMBIGUITY_BAND, RANK_CUTOFF
from .errors import (
    FactorizationError,
    InconsistentProfileError,
    RankAmbiguityError,
    ValidationError,
)
from .loop_algebra import MatrixLoop, UnitCircleGrid, diagonal_monomial_loop, global_index

FACTOR_TOL = 1e-8


@dataclass(frozen=True)
class SplittingType:
    """Weakly decreasing integer multiindex K = (k_1, ..., k_n)."""

    K: tuple

    def __post_init__(self):
        K = tuple(int(k) for k in self.K)
        if not K:
            raise ValidationError("a splitting type needs at least one index")
        if any(a < b for a, b in zip(K, K[1:])):
            raise ValidationError(f"indices must be weakly decreasing, got {K}")
        object.__setattr__(self, "K", K)

    @classmethod
    def sorted(cls, ks: Sequence[int]) -> "SplittingType":
        return cls(tuple(sorted((int(k) for k in ks), reverse=True)))

    def __iter__(self):
        return iter(self.K)

    def __len__(self):
        return len(self.K)

    def __getitem__(self, i):
        return self.K[i]

    @property
    def n(self) -> int:
        return len(self.K)

    def as_list(self) -> list[int]:
        return list(self.K)


def _as_K(K) -> SplittingType:
    return K if isinstance(K, SplittingType) else SplittingType(tuple(K))


def _coeff_block(loop: MatrixLoop, lo: int, hi: int) -> np.ndarray:
    """Stack coefficients for degrees lo..hi, zero outside the support."""
    n = loop.n
    out = np.zeros((hi - lo + 1, n, n), dtype=complex)
    for j, a in loop.coeffs.items():
        if lo <= j <= hi:
            out[j - lo] = a
    return out


def _section_matrix(H: MatrixLoop, M: int, top: int) -> np.ndarray:
    """Rows: coefficients of H x at degrees lo-M..top; columns: x_j, j = -M..0."""
    n = H.n
    lo, hi = H.support
    qs = np.arange(lo - M, top + 1)
    A = np.zeros((qs.size * n, (M + 1) * n), dtype=complex)
    for r, q in enumerate(qs):
        for c, j in enumerate(range(-M, 1)):
            d = q - j
            if lo <= d <= hi and d in H.coeffs:
                A[r * n : (r + 1) * n, c * n : (c + 1) * n] = H.coeffs[d]
    return A


def _nullity(A: np.ndarray, cutoff: float, band) -> int:
    if A.shape[0] == 0:
        return A.shape[1]
    s = np.linalg.svd(A, compute_uv=False)
    rel = s / s[0]
    amb = (rel > band[0]) & (rel < band[1])
    if np.any(amb):
        raise RankAmbiguityError(
            f"singular value ratio {rel[amb][0]:.3e} is too close to the cutoff {cutoff:g}"
        )
    return A.shape[1] - int(np.sum(rel > cutoff))


def kernel_profile(H: MatrixLoop, ms: Sequence[int], M: int, cutoff=RANK_CUTOFF, band=AMBIGUITY_BAND) -> dict:
    """D(m) for each m: solutions Phi- (degrees -M..0) with t^-m H Phi- analytic inside."""
    top = max(ms) - 1
    A = _section_matrix(H, M, top)
    lo = H.support[0]
    n = H.n
    out = {}
    for m in ms:
        rows = (m - 1 - (lo - M) + 1) * n
        out[m] = _nullity(A[: max(rows, 0)], cutoff, band)
    return out


def _indices_from_profile(D: dict, lo: int, hi: int, n: int):
    c = {m: D[m] - D[m + 1] for m in range(lo, hi + 2)}
    ms = sorted(c)
    if any(c[a] < c[b] for a, b in zip(ms, ms[1:])):
        return None
    if c[lo] != n or D[hi + 1] != 0 or c[hi + 1] != 0:
        return None
    K = []
    for m in range(hi, lo - 1, -1):
        K += [m] * (c[m] - c.get(m + 1, 0))
    return K if len(K) == n else None


def partial_indices(G: MatrixLoop, truncation: int | None = None, cutoff: float = RANK_CUTOFF) -> SplittingType:
    """Partial indices K of G = f- d_K f+ (f- analytic outside with f-(inf) = I)."""
    G.check_invertible()
    H = G.transpose()
    lo, hi = H.support
    span = hi - lo
    M = truncation or 4 * span + 16
    kappa = global_index(G)
    for _ in range(3):
        D = kernel_profile(H, range(lo, hi + 3), M, cutoff)
        K = _indices_from_profile(D, lo, hi, G.n)
        if K is not None and sum(K) == kappa:
            return SplittingType(tuple(K))
        M *= 2
    raise InconsistentProfileError(
        f"kernel profile {D} does not match a splitting type with total index {kappa}"
    )


@dataclass(frozen=True)
class Factorization:
    minus: MatrixLoop
    K: SplittingType
    plus: MatrixLoop
    residual: float = 0.0

    @property
    def d(self) -> MatrixLoop:
        return diagonal_monomial_loop(self.K.K)

    def reassemble(self) -> MatrixLoop:
        return self.minus @ self.d @ self.plus


def _solve_rows(G: MatrixLoop, K: Sequence[int], M: int) -> list[dict]:
    """Rows r_i = e_i + sum_{j<0} r_ij t^j with (r_i G) vanishing below degree k_i."""
    n = G.n
    lo, hi = G.support
    rows = []
    for i, k in enumerate(K):
        qs = np.arange(lo - M, k)
        # (r G)_q = sum_j r_j G_{q-j}; unknown r_j for j = -M..-1 as row vectors
        A = np.zeros((qs.size * n, M * n), dtype=complex)
        b = np.zeros(qs.size * n, dtype=complex)
        for r, q in enumerate(qs):
            for c, j in enumerate(range(-M, 0)):
                blk = G.coeffs.get(q - j)
                if blk is not None:
                    # row vector times matrix -> transpose into column system
                    A[r * n : (r + 1) * n, c * n : (c + 1) * n] = blk.T
            blk0 = G.coeffs.get(q)
            if blk0 is not None:
                b[r * n : (r + 1) * n] = -blk0[i]
        if A.size:
            x, *_ = np.linalg.lstsq(A, b, rcond=None)
            res = np.linalg.norm(A @ x - b)
            if res > 1e-9 * max(1.0, np.linalg.norm(b)):
                raise FactorizationError(f"row {i} equations inconsistent (residual {res:.3e})")
        else:
            x = np.zeros(M * n, dtype=complex)
        r = {j: x[c * n : (c + 1) * n] for c, j in enumerate(range(-M, 0))}
        r[0] = np.eye(n)[i].astype(complex)
        rows.append(r)
    return rows


def factorize(G: MatrixLoop, N: int = 256, truncation: int | None = None) -> Factorization:
    """Birkhoff factorization G = f- d_K f+ with f-(inf) = I, checked on an N-point grid."""
    K = partial_indices(G, truncation)
    n = G.n
    lo, hi = G.support
    M = truncation or 4 * (hi - lo) + 16
    rows = _solve_rows(G, K.K, M)

    plus = np.zeros((hi + 1 - min(K.K) + 1, n, n), dtype=complex)
    pdeg = 0
    for i, (r, k) in enumerate(zip(rows, K.K)):
        prod: dict[int, np.ndarray] = {}
        for j, v in r.items():
            for d, blk in G.coeffs.items():
                prod[j + d] = prod.get(j + d, 0) + v @ blk
        for q, v in prod.items():
            if q >= k:
                e = q - k
                if e >= plus.shape[0]:
                    continue
                plus[e, i] = v
                if np.abs(v).max() > 1e-14:
                    pdeg = max(pdeg, e)
    fplus = MatrixLoop({e: plus[e] for e in range(pdeg + 1)})

    t = UnitCircleGrid(N).nodes
    Gs = G.samples(N)
    Ps = fplus.samples(N)
    dinv = np.array([np.diag(x ** (-np.array(K.K, dtype=float))) for x in t])
    ms = Gs @ np.linalg.inv(Ps) @ dinv
    c = np.fft.fft(ms, axis=0) / N
    exps = np.fft.fftfreq(N, 1.0 / N).astype(int)
    scale = max(1.0, float(np.abs(ms).max()))
    pos = np.abs(c[exps > 0]).max() if np.any(exps > 0) else 0.0
    if pos > FACTOR_TOL * scale:
        raise FactorizationError(f"minus factor has positive-degree content {pos:.3e}")
    keep = {int(e): c[i] for i, e in enumerate(exps) if e <= 0 and np.abs(c[i]).max() > 1e-15 * scale}
    fminus = MatrixLoop(keep or {0: np.eye(n)})
    if np.abs(fminus.coefficient(0) - np.eye(n)).max() > FACTOR_TOL * scale:
        raise FactorizationError("minus factor is not the identity at infinity")

    rec = fminus.samples(N) @ diagonal_monomial_loop(K.K).samples(N) @ Ps
    gnorm = float(np.max(np.linalg.norm(Gs, ord=2, axis=(1, 2))))
    res = float(np.max(np.linalg.norm(rec - Gs, ord=2, axis=(1, 2))))
    if res > FACTOR_TOL * gnorm:
        raise FactorizationError(f"reassembly residual {res:.3e} exceeds tolerance")
    for f in (fminus, fplus):
        if global_index(f, N) != 0:
            raise FactorizationError("factor has nonzero winding; not invertible on its side")
    return Factorization(fminus, K, fplus, res / gnorm)


def stratum_invariants(K) -> dict:
    """dim H_K and codimension of the stratum of symbols with multiindex K."""
    K = _as_K(K).K
    dim = sum(a - b + 1 for a in K for b in K if a >= b)
    codim = sum(a - b - 1 for a in K for b in K if a > b)
    return {"dim_HK": dim, "codim": codim}


def is_stable(K) -> bool:
    K = _as_K(K).K
    return K[0] - K[-1] <= 1


def random_triangular_factors(rng: np.random.Generator, n: int, degree: int = 3, scale: float = 0.5):
    """Random f+ = C U(t) and f- = V(1/t) with U, V unipotent triangular.

    f+ is a polynomial in t with constant-invertible determinant; f- is a
    polynomial in 1/t equal to the identity at infinity.  Both are invertible
    on their closed sides with polynomial inverses.
    """

    def cplx(*shape):
        return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))

    Q, _ = np.linalg.qr(cplx(n, n) / scale)
    C = Q @ np.diag(1 + 0.5 * rng.random(n))
    U = {d: np.zeros((n, n), dtype=complex) for d in range(degree + 1)}
    U[0] += np.eye(n)
    V = {-d: np.zeros((n, n), dtype=complex) for d in range(degree + 1)}
    V[0] += np.eye(n)
    for a in range(n):
        for b in range(a + 1, n):
            for d in range(degree + 1):
                U[d][a, b] = cplx()
            for d in range(1, degree + 1):
                V[-d][b, a] = cplx()
    perm = np.eye(n)[rng.permutation(n)]
    fplus = MatrixLoop({d: C @ perm @ u @ perm.T for d, u in U.items()})
    fminus = MatrixLoop(V)
    return fminus, fplus


def random_symbol(rng: np.random.Generator, K: Sequence[int], degree: int = 3) -> tuple:
    """(G, f-, f+) with G = f- d_K f+ built from random triangular factors."""
    fminus, fplus = random_triangular_factors(rng, len(K), degree)
    G = fminus @ diagonal_monomial_loop(K) @ fplus
    return G, fminus, fplus
