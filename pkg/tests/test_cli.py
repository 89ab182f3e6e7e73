import io
import json

import pytest

from spdcheck.cli import main

EVENS = {"kind": "union", "r": 1, "pieces": [{"shift": [0], "subgroup": {"r": 1, "basis": [[2]]}}]}
BOTH = {"kind": "union", "r": 1, "pieces": [{"shift": [0], "subgroup": {"r": 1, "basis": [[2]]}},
                                            {"shift": [1], "subgroup": {"r": 1, "basis": [[2]]}}]}


def call(capsys, tmp_path, command, payload=None, *flags):
    argv = [command, *flags]
    if payload is not None:
        f = tmp_path / "in.json"
        f.write_text(payload if isinstance(payload, str) else json.dumps(payload))
        argv += ["--input", str(f)]
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, tmp_path, command, payload=None, *flags):
    code, out = call(capsys, tmp_path, command, payload, *flags)
    return code, json.loads(out)


def test_decide_spd_examples(capsys, tmp_path):
    code, body = run_json(capsys, tmp_path, "decide-spd", BOTH)
    assert code == 0 and body["verdict"] == "spd"
    code, body = run_json(capsys, tmp_path, "decide-spd", EVENS)
    assert code == 1 and body["verdict"] == "not-spd"
    cert = body["certificate"]
    assert cert["coset"] == {"shift": [1], "subgroup": {"r": 1, "basis": [[2]]}}
    assert "polynomial" in cert
    code, check = run_json(capsys, tmp_path, "witness", body)
    assert code == 0 and check["verdict"] == "verified" and all(check["checks"].values())


def test_decide_ubiquity_words(capsys, tmp_path):
    code, body = run_json(capsys, tmp_path, "decide-ubiquity", BOTH)
    assert code == 0 and body["verdict"] == "ubiquitous"
    assert body["parameters"]["maxIndex"] == 12


@pytest.mark.parametrize("payload", [
    {"finiteDual": {"invariants": [2, 2]}, "K": [[0, 0], [1, 0], [0, 1]]},
    {"finiteDual": {"invariants": [2]}, "r": 1, "slices": [{"char": [0], "set": EVENS},
                                                          {"char": [1], "set": BOTH}]},
    {"kind": "complement", "r": 2, "pieces": [{"shift": [1, 0], "subgroup": {"r": 2, "basis": [[2, 0], [0, 1]]}}]},
])
def test_certificate_roundtrip(capsys, tmp_path, payload):
    code, body = run_json(capsys, tmp_path, "decide-spd", payload)
    assert code == 1
    code, check = run_json(capsys, tmp_path, "witness", body["certificate"])
    assert code == 0, check


def test_positive_certificate_roundtrip(capsys, tmp_path):
    payload = {"finiteDual": {"invariants": [3]}, "K": [[0], [1], [2]]}
    code, body = run_json(capsys, tmp_path, "decide-spd", payload)
    assert code == 0 and body["rank"] == 3
    code, check = run_json(capsys, tmp_path, "witness", body)
    assert code == 0


def test_tampered_certificate_rejected(capsys, tmp_path):
    _, body = run_json(capsys, tmp_path, "decide-spd", EVENS)
    cert = body["certificate"]
    cert["coset"] = {"shift": [0], "subgroup": {"r": 1, "basis": [[2]]}}
    code, check = run_json(capsys, tmp_path, "witness", cert)
    assert code == 1 and check["verdict"] == "rejected"
    false_claim = {"type": "torus", "claim": "ubiquitous", "set": EVENS}
    code, _ = run_json(capsys, tmp_path, "witness", false_claim)
    assert code == 1


def test_determinism(capsys, tmp_path):
    payload = {"finiteDual": {"invariants": [2]}, "r": 1, "slices": [{"char": [0], "set": EVENS}]}
    outs = [call(capsys, tmp_path, "decide-spd", payload, "--seed", "3")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    sv = {"r": 1, "support": [{"m": [0]}, {"m": [1]}], "weights": ["1", "1/2"], "n": 5}
    outs = [call(capsys, tmp_path, "synth-verify", sv, "--seed", "9")[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_scan_commands(capsys, tmp_path):
    code, body = run_json(capsys, tmp_path, "staircase", None, "--max-index", "6", "--radius", "100",
                          "--truncation", "3")
    assert code == 0 and body["K1Empty"] is True
    code, body = run_json(capsys, tmp_path, "scan", {"predicate": "staircase"}, "--max-index", "6",
                          "--radius", "100")
    assert code == 2 and body["bounds"] == {"maxIndex": 6, "radius": 100}
    code, body = run_json(capsys, tmp_path, "scan", EVENS, "--max-index", "4")
    assert code == 1 and body["certificate"]["coset"]["shift"] == [1]
    code, check = run_json(capsys, tmp_path, "witness", body["certificate"])
    assert code == 0


def test_zero_set_command(capsys, tmp_path):
    poly = {"r": 1, "terms": [{"phases": ["1/2"], "re": "1"}, {"phases": ["0"], "re": "1"}]}
    code, body = run_json(capsys, tmp_path, "zero-set", poly)
    assert code == 0
    assert body["zeroSet"]["pieces"] == [{"shift": [1], "subgroup": {"r": 1, "basis": [[2]]}}]
    assert body["period"] == 2


def test_synth_verify(capsys, tmp_path):
    sv = {"invariants": [3], "r": 1, "support": [{"finite": [1], "m": [2]}, {"finite": [0], "m": [-1]}],
          "weights": ["1", "3/4"], "n": 6}
    code, body = run_json(capsys, tmp_path, "synth-verify", sv)
    assert code == 0 and body["verdict"] == "verified"
    assert body["residual"] < 1e-9 and body["minEigenvalue"] >= -1e-9


@pytest.mark.parametrize("payload,path", [
    ({"kind": "union", "r": 1, "pieces": [{"shift": ["x"], "subgroup": {"r": 1, "basis": [[2]]}}]},
     "$.pieces[0].shift"),
    ({"kind": "union", "r": 1, "pieces": [{"shift": [0]}]}, "$.pieces[0]"),
    ({"finiteDual": {"invariants": [2]}, "K": [[5]]}, "$.K[0]"),
    ([1, 2], "$"),
])
def test_input_errors(capsys, tmp_path, payload, path):
    code, body = run_json(capsys, tmp_path, "decide-spd", payload)
    assert code == 64 and body["verdict"] == "input-error"
    assert body["error"]["path"].startswith(path)


def test_malformed_json_and_flags(capsys, tmp_path):
    code, body = run_json(capsys, tmp_path, "decide-spd", "{not json")
    assert code == 64
    code, body = run_json(capsys, tmp_path, "decide-spd")
    assert code == 64
    with pytest.raises(SystemExit) as exc:
        main(["decide-spd", "--max-index", "many"])
    assert exc.value.code == 64


def test_stdin_and_text_format(capsys, tmp_path, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(EVENS)))
    code = main(["decide-ubiquity", "--input", "-", "--format", "text"])
    out = capsys.readouterr().out
    assert code == 1
    assert out.splitlines()[0] == "verdict: not-ubiquitous"
    assert 'certificate.coset.shift: [1]' in out
