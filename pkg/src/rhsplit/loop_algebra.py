"""Matrix loops on the unit circle stored as finite Laurent series."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import DegenerateSymbolError, UnderResolvedError, ValidationError

DET_FLOOR = 1e-12
INDEX_TOL = 1e-6


def _next_pow2(x: int) -> int:
    return 1 << max(0, int(np.ceil(np.log2(max(x, 1)))))


def _is_pow2(x: int) -> bool:
    return x > 0 and (x & (x - 1)) == 0


@dataclass(frozen=True)
class UnitCircleGrid:
    """Nodes exp(2 pi i k / N) with uniform trapezoid weights in the angle."""

    size: int

    def __post_init__(self):
        if not _is_pow2(self.size):
            raise ValidationError(f"grid size must be a power of two, got {self.size}")

    @property
    def theta(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.size) / self.size

    @property
    def nodes(self) -> np.ndarray:
        return np.exp(1j * self.theta)

    @property
    def weights(self) -> np.ndarray:
        # d(theta) weights; they sum to 2 pi
        return np.full(self.size, 2 * np.pi / self.size)


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class MatrixLoop:
    """G(t) = sum_j coeffs[j] t**j, an n x n matrix Laurent polynomial."""

    coeffs: Mapping[int, np.ndarray]
    grid_size: int = 0

    def __post_init__(self):
        if not self.coeffs:
            raise ValidationError("a loop needs at least one coefficient")
        items = sorted((int(k), _freeze(v)) for k, v in self.coeffs.items())
        shapes = {v.shape for _, v in items}
        if len(shapes) != 1:
            raise ValidationError(f"coefficient shapes disagree: {shapes}")
        (shape,) = shapes
        if len(shape) != 2 or shape[0] != shape[1] or shape[0] < 1:
            raise ValidationError(f"coefficients must be square matrices, got {shape}")
        object.__setattr__(self, "coeffs", dict(items))
        if self.grid_size == 0:
            lo, hi = self.support
            object.__setattr__(self, "grid_size", _next_pow2(max(64, 8 * (hi - lo + 1))))
        elif not _is_pow2(self.grid_size):
            raise ValidationError("grid_size must be a power of two")

    @property
    def n(self) -> int:
        return next(iter(self.coeffs.values())).shape[0]

    @property
    def support(self) -> tuple[int, int]:
        keys = list(self.coeffs)
        return min(keys), max(keys)

    @property
    def degree_span(self) -> int:
        lo, hi = self.support
        return hi - lo

    @classmethod
    def constant(cls, c) -> "MatrixLoop":
        return cls({0: np.atleast_2d(c)})

    @classmethod
    def identity(cls, n: int) -> "MatrixLoop":
        return cls({0: np.eye(n)})

    @classmethod
    def scalar_monomial(cls, k: int, c: complex = 1.0) -> "MatrixLoop":
        return cls({k: np.array([[c]])})

    def evaluate(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        lo, _ = self.support
        if lo < 0 and np.any(z == 0):
            raise ValidationError("cannot evaluate at z = 0 with negative exponents present")
        out = np.zeros(z.shape + (self.n, self.n), dtype=complex)
        for j, a in self.coeffs.items():
            out += np.power(z, j)[..., None, None] * a
        return out

    __call__ = evaluate

    def samples(self, N: int | None = None) -> np.ndarray:
        grid = UnitCircleGrid(N or self.grid_size)
        return self.evaluate(grid.nodes)

    def coefficient(self, j: int) -> np.ndarray:
        return self.coeffs.get(j, np.zeros((self.n, self.n), dtype=complex))

    def __matmul__(self, other: "MatrixLoop") -> "MatrixLoop":
        out: dict[int, np.ndarray] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                out[i + j] = out.get(i + j, 0) + a @ b
        return MatrixLoop(out)

    def scaled(self, c: complex) -> "MatrixLoop":
        return MatrixLoop({j: c * a for j, a in self.coeffs.items()}, self.grid_size)

    def shifted(self, m: int) -> "MatrixLoop":
        """Multiply by t**m."""
        return MatrixLoop({j + m: a for j, a in self.coeffs.items()})

    def transpose(self) -> "MatrixLoop":
        return MatrixLoop({j: a.T for j, a in self.coeffs.items()}, self.grid_size)

    def left_mul(self, c: np.ndarray) -> "MatrixLoop":
        return MatrixLoop({j: c @ a for j, a in self.coeffs.items()}, self.grid_size)

    def right_mul(self, c: np.ndarray) -> "MatrixLoop":
        return MatrixLoop({j: a @ c for j, a in self.coeffs.items()}, self.grid_size)

    def sup_norm(self, N: int | None = None) -> float:
        s = self.samples(N)
        return float(np.max(np.linalg.norm(s, ord=2, axis=(-2, -1))))

    def check_invertible(self, N: int | None = None, det_floor: float = DET_FLOOR) -> None:
        dets = np.linalg.det(self.samples(N))
        bad = np.flatnonzero(np.abs(dets) < det_floor)
        if bad.size:
            raise DegenerateSymbolError(
                f"loop is singular at {bad.size} grid node(s); min |det| = {np.abs(dets).min():.3e}"
            )

    def is_invertible_on_grid(self, N: int | None = None, det_floor: float = DET_FLOOR) -> bool:
        try:
            self.check_invertible(N, det_floor)
        except DegenerateSymbolError:
            return False
        return True

    def allclose(self, other: "MatrixLoop", atol: float = 1e-12) -> bool:
        keys = set(self.coeffs) | set(other.coeffs)
        return all(np.allclose(self.coefficient(k), other.coefficient(k), atol=atol, rtol=0) for k in keys)


def diagonal_monomial_loop(K: Sequence[int]) -> MatrixLoop:
    """d_K(t) = diag(t**k_1, ..., t**k_n)."""
    n = len(K)
    out: dict[int, np.ndarray] = {}
    for i, k in enumerate(K):
        m = out.setdefault(int(k), np.zeros((n, n), dtype=complex))
        m[i, i] = 1.0
    return MatrixLoop(out)


def loop_from_samples(
    samples,
    tail_tolerance: float = 1e-12,
    det_floor: float = DET_FLOOR,
    check_invertible: bool = True,
) -> MatrixLoop:
    """Laurent coefficients of a loop from its values at the N-th roots of unity.

    Coefficients are dropped from both ends of the spectrum for as long as the
    total dropped norm stays within ``tail_tolerance * max_k |G(t_k)|``, which
    bounds the round-trip error at the nodes.
    """
    s = np.asarray(samples, dtype=complex)
    if s.ndim == 1:
        s = s[:, None, None]
    if s.ndim != 3 or s.shape[1] != s.shape[2]:
        raise ValidationError(f"expected samples of shape (N, n, n), got {s.shape}")
    N = s.shape[0]
    if not _is_pow2(N):
        raise ValidationError(f"sample count must be a power of two, got {N}")
    if check_invertible:
        dets = np.abs(np.linalg.det(s))
        if np.any(dets < det_floor):
            k = int(np.argmin(dets))
            raise DegenerateSymbolError(f"sample {k} is singular (|det| = {dets[k]:.3e})")

    scale = float(np.max(np.linalg.norm(s, ord=2, axis=(1, 2))))
    budget = tail_tolerance * scale
    c = np.fft.fft(s, axis=0) / N
    exps = np.concatenate([np.arange(0, N // 2), np.arange(-N // 2, 0)])
    order = np.argsort(exps)
    exps, c = exps[order], c[order]
    norms = np.linalg.norm(c, ord=2, axis=(1, 2))

    if N >= 4 and max(norms[0], norms[1], norms[-1]) > budget:
        raise UnderResolvedError(
            f"tail coefficient norm {max(norms[0], norms[1], norms[-1]):.3e} exceeds "
            f"{budget:.3e} at |degree| ~ N/2; increase N"
        )

    keep = norms > 1e-3 * budget / N
    spent = float(norms[~keep].sum())
    idx = np.flatnonzero(keep)
    if idx.size == 0:
        raise DegenerateSymbolError("all Laurent coefficients vanish")
    lo, hi = idx[0], idx[-1]
    while lo < hi:
        end = lo if norms[lo] <= norms[hi] else hi
        if spent + norms[end] > budget:
            break
        spent += norms[end]
        keep[end] = False
        rest = np.flatnonzero(keep[lo : hi + 1]) + lo
        lo, hi = rest[0], rest[-1]
    return MatrixLoop({int(exps[i]): c[i] for i in np.flatnonzero(keep)}, grid_size=N)


def loop_from_function(f: Callable, N: int, tail_tolerance: float = 1e-12, **kw) -> MatrixLoop:
    t = UnitCircleGrid(N).nodes
    return loop_from_samples(np.array([np.atleast_2d(f(x)) for x in t]), tail_tolerance, **kw)


def winding_number(values: np.ndarray, tol: float = INDEX_TOL) -> int:
    """Winding of a closed sampled curve around 0 from its argument increments."""
    v = np.asarray(values, dtype=complex)
    inc = np.angle(np.roll(v, -1) / v)
    if np.max(np.abs(inc)) > np.pi / 2:
        raise UnderResolvedError(
            f"argument increment {np.max(np.abs(inc)):.3f} rad between samples; refine the grid"
        )
    w = inc.sum() / (2 * np.pi)
    k = int(round(w))
    if abs(w - k) > tol:
        raise UnderResolvedError(f"accumulated argument {w:.9f} turns is not an integer")
    return k


def global_index(loop: MatrixLoop, N: int | None = None, det_floor: float = DET_FLOOR) -> int:
    """Winding number of det G(t) around 0 along the unit circle."""
    n = N or _next_pow2(max(loop.grid_size, 8 * loop.n * (loop.degree_span + 1)))
    for _ in range(6):
        dets = np.linalg.det(loop.samples(n))
        if np.any(np.abs(dets) < det_floor):
            raise DegenerateSymbolError("det G vanishes (below floor) on the grid")
        try:
            return winding_number(dets)
        except UnderResolvedError:
            if N is not None:
                raise
            n *= 2
    raise UnderResolvedError("global index did not resolve after grid refinement")


@dataclass(frozen=True)
class PiecewiseLoop:
    """Loop with jump points s_1..s_m; pieces[j] lives on the arc from s_j to s_{j+1}.

    The arc of the last piece wraps from s_m back to s_1.
    """

    jumps: np.ndarray
    pieces: tuple = field(default_factory=tuple)

    def __post_init__(self):
        s = np.atleast_1d(np.asarray(self.jumps, dtype=complex))
        if s.size and np.max(np.abs(np.abs(s) - 1)) > 1e-12:
            raise ValidationError("jump points must lie on the unit circle")
        args = np.mod(np.angle(s), 2 * np.pi)
        if np.any(np.diff(args) <= 0):
            raise ValidationError("jump points must have strictly increasing argument in [0, 2pi)")
        pieces = tuple(self.pieces)
        if s.size == 0 and len(pieces) != 1:
            raise ValidationError("a loop without jumps has exactly one piece")
        if s.size and len(pieces) != s.size:
            raise ValidationError("need one piece per arc")
        s.setflags(write=False)
        object.__setattr__(self, "jumps", s)
        object.__setattr__(self, "pieces", pieces)
        for j in range(s.size):
            for lim in (self.plus_limit(j), self.minus_limit(j)):
                if abs(np.linalg.det(lim)) < DET_FLOOR:
                    raise DegenerateSymbolError(f"one-sided limit at jump {j} is singular")

    @classmethod
    def piecewise_constant(cls, jumps, values) -> "PiecewiseLoop":
        return cls(np.asarray(jumps, dtype=complex), tuple(MatrixLoop.constant(v) for v in values))

    @property
    def n(self) -> int:
        return self.pieces[0].n

    @property
    def m(self) -> int:
        return self.jumps.size

    def arc_index(self, t) -> np.ndarray:
        a = np.mod(np.angle(np.asarray(t, dtype=complex)), 2 * np.pi)
        edges = np.mod(np.angle(self.jumps), 2 * np.pi)
        j = np.searchsorted(edges, a, side="right") - 1
        return np.where(j < 0, self.m - 1, j)

    def evaluate(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=complex)
        if self.m == 0:
            return self.pieces[0].evaluate(t)
        j = self.arc_index(t)
        out = np.empty(t.shape + (self.n, self.n), dtype=complex)
        for k, piece in enumerate(self.pieces):
            mask = j == k
            if np.any(mask):
                out[mask] = piece.evaluate(t[mask])
        return out

    __call__ = evaluate

    def plus_limit(self, j: int) -> np.ndarray:
        """G(s_j + 0), the limit from the arc following s_j counterclockwise."""
        return self.pieces[j].evaluate(self.jumps[j])

    def minus_limit(self, j: int) -> np.ndarray:
        return self.pieces[j - 1].evaluate(self.jumps[j])
