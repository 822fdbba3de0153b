import io
import json

import numpy as np
import pytest

from rhsplit import cli
from rhsplit.fixtures import hypergeometric_system, regular_3x3_system, scalar_two_jump
from rhsplit.jsonio import (
    SchemaError,
    decode_loop,
    decode_matrix,
    decode_piecewise,
    decode_system,
    dumps,
    encode_piecewise,
    encode_system,
    round_sig,
)


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(stdin)))
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() and code == 0 else None), err


def test_round_sig():
    assert round_sig(1.23456789012345) == 1.23456789012
    assert round_sig(0.0) == 0.0


def test_matrix_decoding_errors_carry_pointer():
    with pytest.raises(SchemaError) as exc:
        decode_loop({"n": 2, "coeffs": [{"exp": 0, "re": [[1, 0], [0, 1]]}, {"exp": 1, "re": [[1, 2]]}]})
    assert exc.value.pointer == "/coeffs/1"
    with pytest.raises(SchemaError) as exc:
        decode_loop({"coeffs": []})
    assert exc.value.pointer == "/n"
    assert np.allclose(decode_matrix([[1, 2], [3, 4]]), [[1, 2], [3, 4]])


def test_system_and_piecewise_round_trip():
    for sysm in (hypergeometric_system(), regular_3x3_system()):
        back = decode_system(json.loads(dumps(encode_system(sysm))))
        z = 0.3 + 0.4j
        assert np.allclose(back.coefficient(z), sysm.coefficient(z))
    pl = scalar_two_jump()
    back = decode_piecewise(json.loads(dumps(encode_piecewise(pl))))
    assert np.allclose(back.jumps, pl.jumps)
    assert np.allclose(back.evaluate(np.exp(1.0j)), pl.evaluate(np.exp(1.0j)))


def test_piecewise_requires_consistent_limits():
    data = encode_piecewise(scalar_two_jump())
    data["jumps"][0]["minus"] = {"re": [[5.0]], "im": [[0.0]]}
    with pytest.raises(SchemaError) as exc:
        decode_piecewise(data)
    assert exc.value.pointer == "/jumps/0/minus"


def test_indices_on_diagonal_fixture(capsys):
    code, out, _ = run(capsys, "indices", "--fixture", "diagonal_2_0_m1")
    assert code == 0
    assert out == {"K": [2, 0, -1]}


def test_invariants_of_2_1_0(capsys):
    code, out, _ = run(capsys, "invariants", "--fixture", "invariants_2_1_0")
    assert code == 0
    expected = {"c1": 3, "tau": 3, "nu": 4, "h0": 10, "h1": 1, "stable": False, "l": 6}
    assert {k: out[k] for k in expected} == expected


def test_monodromy_eigenvalues_at_zero(capsys):
    code, out, _ = run(capsys, "monodromy", "--fixture", "hypergeometric")
    assert code == 0
    i0 = out["points"].index({"re": 0.0, "im": 0.0})
    ev = sorted(round(e["re"], 8) for e in out["eigenvalues"][i0])
    assert ev == [-1.0, 1.0]
    assert out["relation_defect"] < 1e-8


def test_factor_reduce_exponents_regularize_bounds(capsys, monkeypatch):
    code, out, _ = run(capsys, "factor", "--fixture", "twisted_loop")
    assert code == 0 and out["K"] == [0, 0] and out["residual"] < 1e-10
    code, out, _ = run(capsys, "reduce", "--fixture", "hypergeometric")
    assert code == 0 and out["K"] == [0, -1]
    code, out, _ = run(capsys, "exponents", "--fixture", "regular_3x3")
    assert code == 0 and out["beta"]["beta"] == -1
    code, out, _ = run(capsys, "regularize", "--fixture", "generic_two_jump")
    assert code == 0 and out["max_defect"] < 1e-8
    code, out, _ = run(capsys, "bounds", "-", stdin={"n": 2, "m": 3, "K": [0, -1]}, monkeypatch=monkeypatch)
    assert code == 0 and out["apparent_bound"] == 0 and out["tau_within_bound"]


def test_solve_reports_dimension(capsys):
    code, out, _ = run(capsys, "--grid", "128", "solve", "--fixture", "scalar_t3")
    assert code == 0
    assert out["dimension"] == 4
    assert max(s["residual"] for s in out["solutions"]) < 1e-10


def test_exit_codes(capsys, monkeypatch, tmp_path):
    code, _, err = run(capsys, "indices", "-", stdin={"n": 2}, monkeypatch=monkeypatch)
    assert code == 1 and "/coeffs" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, _ = run(capsys, "indices", str(bad))
    assert code == 1
    code, _, _ = run(capsys, "indices", "--fixture", "no_such_fixture")
    assert code == 1
    # an impossible relation tolerance is a numerical failure
    code, _, err = run(capsys, "--tol", "1e-30", "monodromy", "--fixture", "hypergeometric")
    assert code == 2 and "defect" in err


def test_reports_are_deterministic_and_reparseable(capsys):
    outs = []
    for _ in range(2):
        cli.main(["exponents", "--fixture", "hypergeometric"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    json.loads(outs[0])


def test_every_fixture_has_provenance():
    for name in cli.fixture_names():
        rec = cli.load_fixture(name)
        assert rec["provenance"]
        assert rec["kind"] in {"loop", "piecewise-loop", "fuchsian-system", "regular-system", "invariant-triple"}
        assert rec["expected"]
