"""Write the bundled fixture corpus to src/rhsplit/data/*.json.

Every record has name, kind, payload, expected and provenance.  Expected
values are fixed by hand from closed forms; tests/test_fixtures_data.py
recomputes them with the library.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from rhsplit.fixtures import (
    commuting_nilpotent_system,
    diagonal_fixture,
    diagonal_two_point_system,
    hypergeometric_system,
    piecewise_fixtures,
    regular_3x3_system,
    twisted_loop,
)
from rhsplit.jsonio import clean, encode_loop, encode_matrix, encode_piecewise, encode_system
from rhsplit.loop_algebra import MatrixLoop

OUT = Path(__file__).resolve().parents[1] / "src" / "rhsplit" / "data"


def records() -> list[dict]:
    recs = [
        {
            "name": "diagonal_2_0_m1",
            "kind": "loop",
            "payload": encode_loop(diagonal_fixture()),
            "expected": {"K": [2, 0, -1]},
            "provenance": "diagonal monomial loop; the indices are its exponents",
        },
        {
            "name": "scalar_t3",
            "kind": "loop",
            "payload": encode_loop(MatrixLoop.scalar_monomial(3)),
            "expected": {"K": [3], "global_index": 3},
            "provenance": "scalar monomial t^3; winding number 3",
        },
        {
            "name": "twisted_loop",
            "kind": "loop",
            "payload": encode_loop(twisted_loop()),
            "expected": {"K": [0, 0]},
            "provenance": "explicit factorization [[1,0],[1/t,1]] [[t,1],[-1,0]] with constant-determinant plus factor",
        },
    ]
    notes = {
        "scalar_two_jump": "scalar jumps; limits of the regularized loop checked by extrapolation",
        "generic_two_jump": "2x2 jump with distinct non-real eigenvalues; limits checked by extrapolation",
        "unipotent_three_jump": "unipotent jumps G3, G1^-1, G2^-1 with G3 G2 G1 = I",
    }
    for name, pl in piecewise_fixtures().items():
        recs.append(
            {
                "name": name,
                "kind": "piecewise-loop",
                "payload": encode_piecewise(pl),
                "expected": {"max_defect_below": 1e-8},
                "provenance": notes[name],
            }
        )
    N = np.array([[0, 1], [0, 0]])
    recs += [
        {
            "name": "commuting_nilpotent",
            "kind": "fuchsian-system",
            "payload": encode_system(commuting_nilpotent_system()),
            "expected": {"generator_at_1": encode_matrix(np.eye(2) + 2j * np.pi * N), "beta": 0},
            "provenance": "closed-form solution exp(N log((z-1)/(z+1)))",
        },
        {
            "name": "hypergeometric",
            "kind": "fuchsian-system",
            "payload": encode_system(hypergeometric_system()),
            "expected": {"eigenvalues_at_0": [1.0, -1.0], "beta": 0, "K": [0, -1], "apparent_zeros": 0},
            "provenance": "companion system with alpha = beta = 1/4, gamma = 1/2; local eigenvalues exp(-2 pi i gamma), 1",
        },
        {
            "name": "diagonal_two_point",
            "kind": "fuchsian-system",
            "payload": encode_system(diagonal_two_point_system()),
            "expected": {"K": [1, 0], "beta": 0},
            "provenance": "transition function diag(1/z, 1) after one shear; diagonal monomial factorization",
        },
        {
            "name": "regular_3x3",
            "kind": "regular-system",
            "payload": encode_system(regular_3x3_system()),
            "expected": {"pole_order_at_0": 2, "beta": -1, "fixes_e1": True},
            "provenance": "first column of every coefficient vanishes, so e1 is a constant solution; exponents at 0 computed by hand",
        },
        {
            "name": "invariants_2_1_0",
            "kind": "invariant-triple",
            "payload": {"K": [2, 1, 0]},
            "expected": {"c1": 3, "tau": 3, "nu": 4, "h0": 10, "h1": 1, "stable": False, "l": 6},
            "provenance": "closed-form sums over the entries; l and h0 confirmed by brute-force enumeration",
        },
        {
            "name": "triple_rank3",
            "kind": "invariant-triple",
            "payload": {"n": 3, "c1": 3, "tau": 3, "nu": 4},
            "expected": {"K": [2, 1, 0]},
            "provenance": "inverse of the invariant map on splitting types of rank 3",
        },
    ]
    return recs


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for rec in records():
        path = OUT / f"{rec['name']}.json"
        path.write_text(json.dumps(clean(rec), indent=2, sort_keys=True) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
