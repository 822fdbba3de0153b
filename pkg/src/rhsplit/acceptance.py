"""Acceptance checks run by the test suite, the CLI ``selftest`` and scripts/run_acceptance.py.

Each check returns a CheckResult; none of them raise on failure.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import bundle_calculus as bc
from .birkhoff import factorize, partial_indices, random_symbol, stratum_invariants
from .cauchy_kernel import solve_rhtp
from .fixtures import (
    unipotent_triple,
    commuting_nilpotent_system,
    diagonal_two_point_system,
    hypergeometric_system,
    piecewise_fixtures,
    regular_3x3_system,
    system_fixtures,
)
from .fuchsian.levelt import chern_canonical, fuchs_weight_beta, levelt_numeric, local_exponents
from .fuchsian.monodromy import monodromy
from .fuchsian.reduction import reduce_exponents, splitting_via_reduction
from .fuchsian.scalarize import count_wronskian_zeros, scalarize
from .fuchsian.systems import FuchsianSystem
from .loop_algebra import MatrixLoop, diagonal_monomial_loop, global_index
from .regularization import normalized_log, regularize_transmission


@dataclass(frozen=True)
class AcceptanceConfig:
    seed: int = 0
    n_diagonal: int = 50
    n_symbols: int = 100
    factor_grid: int = 256
    solve_grid: int = 128
    n_solve: int = 10
    tol: float = 1e-8


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    time_limit: float | None = None

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f} s)"


@dataclass
class _Shared:
    """Symbols generated by the loop checks, reused by the index-sum check."""

    symbols: list = field(default_factory=list)


def _timed(number: int, name: str, limit: float | None, fn: Callable[[], tuple[bool, str]]) -> CheckResult:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure with its message as detail
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t0
    if limit is not None and dt > limit:
        ok, detail = False, f"{detail}; runtime {dt:.1f} s over the {limit:g} s limit"
    return CheckResult(number, name, ok, detail, dt, limit)


def _random_K(rng: np.random.Generator, n: int, lo: int, hi: int) -> list[int]:
    return sorted((int(x) for x in rng.integers(lo, hi + 1, size=n)), reverse=True)


def check_scalar_calibration(shared: _Shared, cfg: AcceptanceConfig) -> tuple[bool, str]:
    bad = []
    for k in range(-5, 6):
        G = MatrixLoop.scalar_monomial(k)
        K = partial_indices(G).as_list()
        kappa = global_index(G)
        shared.symbols.append(G)
        if K != [k] or kappa != k:
            bad.append((k, K, kappa))
    return not bad, "11 monomials" if not bad else f"mismatches {bad}"


def check_diagonal_exactness(shared: _Shared, cfg: AcceptanceConfig) -> tuple[bool, str]:
    rng = np.random.default_rng(cfg.seed)
    bad = []
    for _ in range(cfg.n_diagonal):
        K = _random_K(rng, int(rng.integers(1, 5)), -5, 5)
        G = diagonal_monomial_loop(K)
        shared.symbols.append(G)
        got = partial_indices(G).as_list()
        if got != K:
            bad.append((K, got))
    return not bad, f"{cfg.n_diagonal} diagonal symbols" if not bad else f"mismatches {bad[:3]}"


def check_factorization(shared: _Shared, cfg: AcceptanceConfig) -> tuple[bool, str]:
    rng = np.random.default_rng(cfg.seed + 1)
    worst = 0.0
    bad = []
    for _ in range(cfg.n_symbols):
        K = _random_K(rng, int(rng.integers(1, 4)), -3, 3)
        G, _, _ = random_symbol(rng, K, degree=3)
        shared.symbols.append(G)
        fac = factorize(G, N=cfg.factor_grid)
        N = cfg.factor_grid
        res = float(np.abs(fac.reassemble().samples(N) - G.samples(N)).max())
        worst = max(worst, res)
        if fac.K.as_list() != K or res > cfg.tol:
            bad.append((K, fac.K.as_list(), res))
    detail = f"{cfg.n_symbols} symbols, worst residual {worst:.2e}"
    return not bad, detail if not bad else f"{detail}; failures {bad[:3]}"


def check_index_sum(shared: _Shared, cfg: AcceptanceConfig) -> tuple[bool, str]:
    if not shared.symbols:
        return False, "no symbols were generated by the earlier checks"
    bad = 0
    for G in shared.symbols:
        if global_index(G) != sum(partial_indices(G).K):
            bad += 1
    return bad == 0, f"{len(shared.symbols)} symbols, {bad} violations"


def _small_splittings(max_n: int = 3, lo: int = -3, hi: int = 3):
    for n in range(1, max_n + 1):
        for K in itertools.combinations_with_replacement(range(hi, lo - 1, -1), n):
            yield list(K)


def check_solution_count(shared: _Shared, cfg: AcceptanceConfig) -> tuple[bool, str]:
    Ks = list(_small_splittings())
    bad = [K for K in Ks if bc.solvability_count(K)["l"] != bc.brute_force_solution_count(K)]
    rng = np.random.default_rng(cfg.seed + 2)
    pick = rng.choice(len(Ks), size=cfg.n_solve, replace=False)
    bad_solve = []
    for i in pick:
        K = Ks[int(i)]
        d = len(solve_rhtp(diagonal_monomial_loop(K), 0, N=cfg.solve_grid))
        if d != bc.solvability_count(K)["l"]:
            bad_solve.append((K, d))
    ok = not bad and not bad_solve
    detail = f"{len(Ks)} splittings against brute force, {cfg.n_solve} against the solver"
    return ok, detail if ok else f"{detail}; formula {bad[:3]}, solver {bad_solve[:3]}"


def _round_trip_splittings():
    for n in (2, 3):
        for K in itertools.combinations_with_replacement(range(10, -11, -1), n):
            yield list(K)


def check_round_trips(shared: _Shared, cfg: AcceptanceConfig) -> tuple[bool, str]:
    bad = []
    count = 0
    for K in _round_trip_splittings():
        count += 1
        c1, tau, nu = bc.chern_number(K), bc.weight_tau(K), bc.reduced_dimension_nu(K)
        if len(K) == 2:
            back = bc.splitting_from_invariants_rank2(c1, nu)
        else:
            back = bc.splitting_from_invariants_rank3(c1, tau, nu)
        if back.as_list() != K:
            bad.append(K)
    return not bad, f"{count} splittings" if not bad else f"failures {bad[:3]}"


def check_cross_formulas(shared: _Shared, cfg: AcceptanceConfig) -> tuple[bool, str]:
    bad = []
    count = 0
    for K in _round_trip_splittings():
        count += 1
        st = stratum_invariants(K)
        if bc.endo_cohomology(K)["h0"] != st["dim_HK"]:
            bad.append(("h0", K))
        if bc.type_codimension([Fraction(k) for k in K], 0) != st["codim"]:
            bad.append(("codim", K))
    return not bad, f"{count} splittings" if not bad else f"failures {bad[:3]}"


def check_regularization(shared: _Shared, cfg: AcceptanceConfig) -> tuple[bool, str]:
    parts = []
    ok = True
    for name, data in piecewise_fixtures().items():
        defects = regularize_transmission(data, tol=np.inf).jump_defects()
        worst = max(defects)
        ok &= worst <= cfg.tol
        parts.append(f"{name} {worst:.1e}")
    return ok, ", ".join(parts)


def check_monodromy(shared: _Shared, cfg: AcceptanceConfig) -> tuple[bool, str]:
    from scipy.linalg import expm

    notes = []
    ok = True
    sys = commuting_nilpotent_system()
    rep = monodromy(sys)
    err_a = float(np.abs(rep.generator(1.0) - expm(2j * np.pi * sys.residues[0])).max())
    ok &= err_a <= cfg.tol
    notes.append(f"(a) {err_a:.1e}")

    gamma = 0.5
    rep = monodromy(hypergeometric_system(0.25, 0.25, gamma))
    ev = np.linalg.eigvals(rep.generator(0.0))
    target = np.array([1.0, np.exp(-2j * np.pi * gamma)])
    err_b = min(
        float(np.abs(ev - target).max()),
        float(np.abs(ev[::-1] - target).max()),
    )
    ok &= err_b <= cfg.tol
    notes.append(f"(b) {err_b:.1e}")

    worst = 0.0
    for s in system_fixtures().values():
        worst = max(worst, monodromy(s, tol=np.inf).relation_defect)
    ok &= worst <= cfg.tol
    notes.append(f"(c) {worst:.1e}")

    r3 = regular_3x3_system()
    rep = monodromy(r3, tol=np.inf)
    e1 = np.eye(3)[:, 0]
    fix = max(float(np.abs(G @ e1 - e1).max()) for G in rep.generators)
    order = r3.pole_order(0)
    ok &= fix <= cfg.tol and order == 2
    notes.append(f"(d) e1 defect {fix:.1e}, pole order {order}")
    return bool(ok), ", ".join(notes)


def _exponent_entries(sys):
    if isinstance(sys, FuchsianSystem):
        full = sys.with_infinity()
        entries = []
        for j, p in enumerate(full.points):
            try:
                entries.append(local_exponents(full, j))
            except Exception:
                entries.append(levelt_numeric(full, p))
        return entries
    return [levelt_numeric(sys, p) for p in sys.marked_points()]


def check_exponents(shared: _Shared, cfg: AcceptanceConfig) -> tuple[bool, str]:
    notes = []
    ok = True
    eig_err = 0.0
    for name, sys in system_fixtures().items():
        entries = _exponent_entries(sys)
        beta = fuchs_weight_beta(entries, cfg.tol)
        if isinstance(sys, FuchsianSystem):
            ok &= beta["fuchsian"]
        else:
            ok &= beta["integer"] and beta["beta"] < 0
        notes.append(f"{name} beta {beta['beta']}")
        rep = monodromy(sys, tol=np.inf)
        for e in entries:
            if e.method != "residue":
                continue
            # characteristic polynomials stay well conditioned on Jordan blocks
            pred = np.exp(2j * np.pi * np.array(e.beta))
            eig_err = max(eig_err, float(np.abs(np.poly(rep.generator(e.point)) - np.poly(pred)).max()))
    ok &= eig_err <= cfg.tol
    notes.append(f"charpoly error {eig_err:.1e}")
    return bool(ok), ", ".join(notes)


def check_chern(shared: _Shared, cfg: AcceptanceConfig) -> tuple[bool, str]:
    notes = []
    ok = True
    for name, sys in system_fixtures().items():
        gens = monodromy(sys, tol=np.inf).generators
        total = complex(sum(np.trace(normalized_log(G)) for G in gens))
        dev = abs(total - round(total.real))
        ok &= dev <= cfg.tol
        notes.append(f"{name} {round(total.real)}")
    c = chern_canonical(unipotent_triple())
    ok &= c == 0
    notes.append(f"unipotent triple {c}")
    return bool(ok), ", ".join(notes)


def _invariant_route(K) -> list[int]:
    c1, tau, nu = bc.chern_number(K), bc.weight_tau(K), bc.reduced_dimension_nu(K)
    if len(K) == 2:
        return bc.splitting_from_invariants_rank2(c1, nu).as_list()
    return bc.splitting_from_invariants_rank3(c1, tau, nu).as_list()


def check_reduction(shared: _Shared, cfg: AcceptanceConfig) -> tuple[bool, str]:
    notes = []
    ok = True
    for name, sys in (("diagonal_two_point", diagonal_two_point_system()), ("hypergeometric", hypergeometric_system())):
        red = reduce_exponents(sys)
        floors = []
        for j in range(sys.finite_points.size):
            e = local_exponents(red.system, j, allow_resonant=True)
            floors += [int(np.floor(b.real + 1e-8)) for b in e.beta]
        K = splitting_via_reduction(sys).as_list()
        ok &= all(f == 0 for f in floors) and _invariant_route(K) == K
        notes.append(f"{name} K={K}")
    return bool(ok), ", ".join(notes)


def check_apparent(shared: _Shared, cfg: AcceptanceConfig) -> tuple[bool, str]:
    count = count_wronskian_zeros(scalarize(hypergeometric_system(), 0), 5.0)
    bound = bc.apparent_singularity_bound(2, 0, 3)
    return count == bound == 0, f"zeros {count}, bound {bound}"


CHECKS = [
    (1, "scalar calibration", 1.0, check_scalar_calibration),
    (2, "diagonal exactness", None, check_diagonal_exactness),
    (3, "factorization residual", 60.0, check_factorization),
    (4, "index-sum identity", None, check_index_sum),
    (5, "solution-count oracle", None, check_solution_count),
    (6, "invariant round trips", None, check_round_trips),
    (7, "cross-formula consistency", None, check_cross_formulas),
    (8, "regularization limits", 10.0, check_regularization),
    (9, "monodromy engine", 30.0, check_monodromy),
    (10, "exponent calculus", None, check_exponents),
    (11, "Chern trace formula", None, check_chern),
    (12, "reduction pipeline", 30.0, check_reduction),
    (13, "apparent singularities", None, check_apparent),
]


def run_checks(cfg: AcceptanceConfig | None = None, only: list[int] | None = None) -> list[CheckResult]:
    """Run the checks in order; the index-sum check reuses symbols from checks 1-3."""
    cfg = cfg or AcceptanceConfig()
    shared = _Shared()
    out = []
    for number, name, limit, fn in CHECKS:
        if only is not None and number not in only and not (4 in only and number in (1, 2, 3)):
            continue
        out.append(_timed(number, name, limit, lambda fn=fn: fn(shared, cfg)))
    if only is not None:
        out = [r for r in out if r.number in only]
    return out
