"""JSON encoding of matrices, loops, piecewise loops and systems.

Decoding errors carry a JSON pointer to the offending field.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .errors import ValidationError
from .fuchsian.systems import INF, FuchsianSystem, RegularSystem
from .loop_algebra import MatrixLoop, PiecewiseLoop

SIG_DIGITS = 12


class SchemaError(ValidationError):
    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer


def _get(obj: dict, key: str, ptr: str):
    if not isinstance(obj, dict):
        raise SchemaError(ptr, "expected an object")
    if key not in obj:
        raise SchemaError(f"{ptr}/{key}", "missing field")
    return obj[key]


def round_sig(x: float) -> float:
    if not np.isfinite(x) or x == 0:
        return float(x)
    return float(f"{x:.{SIG_DIGITS}g}")


def clean(obj: Any) -> Any:
    """Convert numpy/complex values to JSON-ready Python objects with rounded floats."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return encode_matrix(obj) if obj.ndim == 2 else [clean(v) for v in obj]
        return clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return round_sig(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": round_sig(obj.real), "im": round_sig(obj.imag)}
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(clean(obj), sort_keys=True, indent=2)


def encode_matrix(a) -> dict:
    a = np.asarray(a, dtype=complex)
    return {
        "re": [[round_sig(x) for x in row] for row in a.real],
        "im": [[round_sig(x) for x in row] for row in a.imag],
    }


def decode_matrix(obj, ptr: str = "") -> np.ndarray:
    try:
        if isinstance(obj, dict):
            re = np.asarray(_get(obj, "re", ptr), dtype=float)
            im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
            if re.shape != im.shape:
                raise SchemaError(ptr, "re and im shapes differ")
            a = re + 1j * im
        else:
            a = np.asarray(obj, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise SchemaError(ptr, f"not a numeric matrix ({exc})") from exc
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise SchemaError(ptr, f"expected a square matrix, got shape {a.shape}")
    return a


def decode_complex(obj, ptr: str = "") -> complex:
    if isinstance(obj, dict):
        return complex(float(_get(obj, "re", ptr)), float(obj.get("im", 0.0)))
    if isinstance(obj, (int, float)):
        return complex(obj)
    raise SchemaError(ptr, "expected a number or {re, im}")


def encode_loop(loop: MatrixLoop) -> dict:
    return {
        "n": loop.n,
        "grid_size": loop.grid_size,
        "coeffs": [{"exp": j, **encode_matrix(a)} for j, a in loop.coeffs.items()],
    }


def decode_loop(obj, ptr: str = "") -> MatrixLoop:
    n = _get(obj, "n", ptr)
    coeffs = {}
    for i, c in enumerate(_get(obj, "coeffs", ptr)):
        p = f"{ptr}/coeffs/{i}"
        a = decode_matrix(c, p)
        if a.shape[0] != n:
            raise SchemaError(p, f"matrix size {a.shape[0]} does not match n = {n}")
        j = int(_get(c, "exp", p))
        coeffs[j] = coeffs.get(j, 0) + a
    if not coeffs:
        raise SchemaError(f"{ptr}/coeffs", "empty coefficient list")
    return MatrixLoop(coeffs, int(obj.get("grid_size", 0)))


def decode_piecewise(obj, ptr: str = "") -> PiecewiseLoop:
    jumps = _get(obj, "jumps", ptr)
    s, plus, minus = [], [], []
    for i, j in enumerate(jumps):
        p = f"{ptr}/jumps/{i}"
        s.append(complex(float(_get(j, "s_re", p)), float(_get(j, "s_im", p))))
        plus.append(decode_matrix(_get(j, "plus", p), f"{p}/plus"))
        minus.append(decode_matrix(_get(j, "minus", p), f"{p}/minus"))
    s = np.array(s)
    s = s / np.abs(s)
    if "pieces" in obj:
        pieces = tuple(decode_loop(x, f"{ptr}/pieces/{i}") for i, x in enumerate(obj["pieces"]))
        pl = PiecewiseLoop(s, pieces)
        for i in range(pl.m):
            if not np.allclose(pl.plus_limit(i), plus[i], atol=1e-9):
                raise SchemaError(f"{ptr}/jumps/{i}/plus", "does not match the piece value")
            if not np.allclose(pl.minus_limit(i), minus[i], atol=1e-9):
                raise SchemaError(f"{ptr}/jumps/{i}/minus", "does not match the piece value")
        return pl
    m = len(plus)
    for i in range(m):
        if not np.allclose(minus[(i + 1) % m], plus[i], atol=1e-12):
            raise SchemaError(f"{ptr}/jumps/{(i + 1) % m}/minus", "must equal the previous jump's plus value")
    return PiecewiseLoop.piecewise_constant(s, plus)


def encode_piecewise(pl: PiecewiseLoop) -> dict:
    return {
        "n": pl.n,
        "jumps": [
            {
                "s_re": round_sig(s.real),
                "s_im": round_sig(s.imag),
                "plus": encode_matrix(pl.plus_limit(i)),
                "minus": encode_matrix(pl.minus_limit(i)),
            }
            for i, s in enumerate(pl.jumps)
        ],
    }


def _encode_point(p):
    return INF if p == INF else {"re": round_sig(complex(p).real), "im": round_sig(complex(p).imag)}


def _decode_point(p, ptr):
    if isinstance(p, str):
        if p != INF:
            raise SchemaError(ptr, 'expected {re, im} or "inf"')
        return INF
    return decode_complex(p, ptr)


def encode_system(sys) -> dict:
    if isinstance(sys, FuchsianSystem):
        out = {
            "points": [_encode_point(p) for p in sys.points],
            "residues": [encode_matrix(a) for a in sys.residues],
        }
    else:
        out = {
            "kind": "regular",
            "points": [_encode_point(p) for p in sys.points],
            "principal_parts": [[encode_matrix(c) for c in pp] for pp in sys.principal_parts],
        }
        if sys.polynomial:
            out["polynomial"] = [encode_matrix(p) for p in sys.polynomial]
    if sys.basepoint is not None:
        out["basepoint"] = _encode_point(sys.basepoint)
    return out


def decode_system(obj, ptr: str = ""):
    pts = [_decode_point(p, f"{ptr}/points/{i}") for i, p in enumerate(_get(obj, "points", ptr))]
    base = obj.get("basepoint")
    base = None if base is None else decode_complex(base, f"{ptr}/basepoint")
    if obj.get("kind") == "regular":
        parts = [
            [decode_matrix(c, f"{ptr}/principal_parts/{i}/{k}") for k, c in enumerate(pp)]
            for i, pp in enumerate(_get(obj, "principal_parts", ptr))
        ]
        poly = [decode_matrix(c, f"{ptr}/polynomial/{i}") for i, c in enumerate(obj.get("polynomial", []))]
        return RegularSystem(tuple(pts), tuple(tuple(pp) for pp in parts), tuple(poly), base)
    res = [decode_matrix(a, f"{ptr}/residues/{i}") for i, a in enumerate(_get(obj, "residues", ptr))]
    if len(res) != len(pts):
        raise SchemaError(f"{ptr}/residues", "need one residue per point")
    return FuchsianSystem(tuple(pts), tuple(res), base)


def decode_splitting(obj, ptr: str = "") -> list[int]:
    K = _get(obj, "K", ptr)
    if not isinstance(K, list) or not all(isinstance(k, int) for k in K):
        raise SchemaError(f"{ptr}/K", "expected a list of integers")
    return K
