"""Command-line front end: JSON in, JSON report out.

Exit codes: 0 success, 1 validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

import numpy as np

from . import bundle_calculus as bc
from .acceptance import AcceptanceConfig, run_checks
from .birkhoff import factorize, partial_indices
from .cauchy_kernel import solve_rhtp, transmission_residual
from .errors import NumericalError, ValidationError
from .fuchsian.levelt import fuchs_weight_beta, levelt_numeric, local_exponents
from .fuchsian.monodromy import monodromy
from .fuchsian.reduction import reduce_exponents, splitting_via_reduction
from .fuchsian.systems import INF, FuchsianSystem
from .jsonio import (
    SchemaError,
    decode_loop,
    decode_piecewise,
    decode_splitting,
    decode_system,
    dumps,
    encode_loop,
    encode_matrix,
)
from .loop_algebra import global_index
from .regularization import regularize_transmission


def load_fixture(name: str) -> dict:
    """Bundled fixture record {name, kind, payload, expected, provenance}."""
    path = resources.files("rhsplit") / "data" / f"{name}.json"
    if not path.is_file():
        raise ValidationError(f"unknown fixture {name!r}")
    return json.loads(path.read_text())


def fixture_names() -> list[str]:
    root = resources.files("rhsplit") / "data"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def _read_payload(args) -> dict:
    if args.fixture:
        return load_fixture(args.fixture)["payload"]
    if args.input is None:
        raise ValidationError("give an input path, '-' for stdin, or --fixture NAME")
    try:
        text = sys.stdin.read() if args.input == "-" else open(args.input).read()
    except OSError as exc:
        raise ValidationError(str(exc)) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"invalid JSON ({exc})") from exc


def _point(p):
    return INF if p == INF else complex(p)


def _trim_coeffs(c: np.ndarray, exps: np.ndarray, keep) -> list:
    scale = max(float(np.abs(c).max()), 1e-300)
    return [
        {"exp": int(e), "value": c[i]}
        for i, e in sorted(enumerate(exps), key=lambda x: x[1])
        if keep(e) and np.abs(c[i]).max() > 1e-12 * scale
    ]


def cmd_factor(args, data):
    G = decode_loop(data)
    fac = factorize(G, N=args.grid or 256)
    return {
        "K": fac.K.as_list(),
        "global_index": global_index(G),
        "residual": fac.residual,
        "minus": encode_loop(fac.minus),
        "plus": encode_loop(fac.plus),
    }


def cmd_indices(args, data):
    return {"K": partial_indices(decode_loop(data)).as_list()}


def cmd_solve(args, data):
    G = decode_loop(data)
    basis = solve_rhtp(G, args.pole_order, N=args.grid)
    out = []
    for sol in basis:
        plus, minus = sol.boundary()
        N = sol.density.N
        exps = np.fft.fftfreq(N, 1.0 / N).astype(int)
        cp = np.fft.fft(plus, axis=0) / N
        cm = np.fft.fft(minus, axis=0) / N
        out.append(
            {
                "trace_plus": plus,
                "trace_minus": minus,
                "plus_taylor": _trim_coeffs(cp, exps, lambda e: e >= 0),
                "minus_laurent": _trim_coeffs(cm, exps, lambda e: e <= args.pole_order),
                "gamma": sol.gamma,
                "residual": transmission_residual(G, sol),
            }
        )
    return {"dimension": len(basis), "grid": basis[0].density.N if basis else args.grid, "solutions": out}


def cmd_regularize(args, data):
    pl = decode_piecewise(data)
    reg = regularize_transmission(pl, tol=args.tol or 1e-8)
    defects = reg.jump_defects()
    t, vals = reg.samples(args.grid or 32)
    return {
        "jumps": [
            {"s": complex(f.s), "Gamma": encode_matrix(f.Gamma), "defect": d} for f, d in zip(reg.factors, defects)
        ],
        "max_defect": max(defects) if defects else 0.0,
        "samples": {"nodes": list(t), "values": [encode_matrix(v) for v in vals]},
    }


def cmd_monodromy(args, data):
    sysm = decode_system(data)
    rep = monodromy(sysm, tol=args.tol or 1e-8)
    return {
        "basepoint": rep.basepoint,
        "points": [_point(p) for p in rep.points],
        "order": list(rep.order),
        "generators": [encode_matrix(g) for g in rep.generators],
        "eigenvalues": [list(np.sort_complex(np.linalg.eigvals(g))) for g in rep.generators],
        "relation_defect": rep.relation_defect,
    }


def _entry_json(e):
    return {"point": _point(e.point), "phi": list(e.phi), "mu": list(e.mu), "beta": list(e.beta), "method": e.method}


def cmd_exponents(args, data):
    sysm = decode_system(data)
    entries = []
    if isinstance(sysm, FuchsianSystem):
        full = sysm.with_infinity()
        for j, p in enumerate(full.points):
            try:
                entries.append(local_exponents(full, j))
            except ValidationError:
                entries.append(levelt_numeric(full, p))
    else:
        entries = [levelt_numeric(sysm, p) for p in sysm.marked_points()]
    return {"points": [_entry_json(e) for e in entries], "beta": fuchs_weight_beta(entries, args.tol or 1e-8)}


def cmd_reduce(args, data):
    sysm = decode_system(data)
    if not isinstance(sysm, FuchsianSystem):
        raise ValidationError("reduce needs a Fuchsian system")
    red = reduce_exponents(sysm)
    after = [local_exponents(red.system, j, allow_resonant=True) for j in range(sysm.finite_points.size)]
    K = splitting_via_reduction(sysm, N=args.grid or 256)
    gauge = [
        {"const": encode_matrix(f[1])} if f[0] == "const" else {"shear": {"s": f[1], "d": list(f[2])}}
        for f in red.T.factors
    ]
    return {
        "K": K.as_list(),
        "steps": red.steps,
        "exponents_after": [_entry_json(e) for e in after],
        "gauge": gauge,
    }


def cmd_invariants(args, data):
    if "K" in data:
        K = decode_splitting(data)
    else:
        n = data.get("n", 3 if "tau" in data else 2)
        try:
            if n == 2:
                K = bc.splitting_from_invariants_rank2(int(data["c1"]), int(data["nu"])).as_list()
            elif n == 3:
                K = bc.splitting_from_invariants_rank3(int(data["c1"]), int(data["tau"]), int(data["nu"])).as_list()
            else:
                raise SchemaError("/n", "invariant triples are supported for rank 2 and 3")
        except KeyError as exc:
            raise SchemaError(f"/{exc.args[0]}", "missing field") from exc
    return bc.all_invariants(K)


def cmd_bounds(args, data):
    try:
        n, m = int(data["n"]), int(data["m"])
    except KeyError as exc:
        raise SchemaError(f"/{exc.args[0]}", "missing field") from exc
    g = int(data.get("g", 0))
    l = int(data.get("l", 0))
    out = {
        "apparent_bound": bc.apparent_singularity_bound(n, g, m),
        "apparent_bound_from_genus": bc.apparent_bound_from_genus(n, g),
        "moduli_dimension": bc.moduli_dimension(n, g),
    }
    if g == 0:
        out["partial_index_bound"] = bc.partial_index_bound(n, m, l)
    if "K" in data:
        K = decode_splitting(data)
        out["tau"] = bc.weight_tau(K)
        if g == 0:
            out["tau_within_bound"] = out["tau"] <= out["partial_index_bound"]
        if len(K) == 2:
            out["minimal_singularities"] = bc.minimal_singularities_rank2(K)
    return out


def cmd_selftest(args, data):
    results = run_checks(AcceptanceConfig(seed=args.seed))
    for r in results:
        print(r.line(), file=sys.stderr)
    report = {
        "passed": all(r.passed for r in results),
        "criteria": [
            {"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail} for r in results
        ],
    }
    if not report["passed"]:
        print(dumps(report))
        raise NumericalError("some acceptance criteria failed")
    return report


COMMANDS = {
    "factor": (cmd_factor, "Birkhoff factorization and partial indices of a loop"),
    "indices": (cmd_indices, "partial indices of a loop"),
    "solve": (cmd_solve, "basis of solutions of the transmission problem for a loop"),
    "regularize": (cmd_regularize, "continuous regularization of a piecewise loop with limit defects"),
    "monodromy": (cmd_monodromy, "monodromy generators of a system and the product-relation defect"),
    "exponents": (cmd_exponents, "Levelt exponents at every marked point and their sum"),
    "reduce": (cmd_reduce, "exponent reduction and splitting type of a Fuchsian system"),
    "invariants": (cmd_invariants, "bundle invariants of a splitting type or an invariant triple"),
    "bounds": (cmd_bounds, "apparent-singularity and partial-index bounds"),
    "selftest": (cmd_selftest, "run the acceptance checks"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rhsplit", description=__doc__)
    p.add_argument("--grid", type=int, default=None, help="grid size N (power of two)")
    p.add_argument("--tol", type=float, default=None, help="tolerance for defect checks")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    p.add_argument("--list-fixtures", action="store_true", help="print bundled fixture names and exit")
    sub = p.add_subparsers(dest="command")
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text)
        if name != "selftest":
            sp.add_argument("input", nargs="?", help="JSON file, or '-' for stdin")
            sp.add_argument("--fixture", help="use a bundled fixture payload")
        if name == "solve":
            sp.add_argument("--pole-order", type=int, default=0, help="allowed pole order at infinity")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.list_fixtures:
        print("\n".join(fixture_names()))
        return 0
    if args.command is None:
        parser.print_help(sys.stderr)
        return 1
    fn = COMMANDS[args.command][0]
    try:
        data = None if args.command == "selftest" else _read_payload(args)
        report = fn(args, data)
    except ValidationError as exc:
        print(json.dumps({"error": "validation", "message": str(exc)}), file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(json.dumps({"error": "numerical", "message": str(exc)}), file=sys.stderr)
        return 2
    print(dumps(report))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
