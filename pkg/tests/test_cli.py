from __future__ import annotations

import json

import pytest

from tycat.cli import main
from tycat.construct import from_json
from tycat.pentagon import mutate


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct_and_verify(tmp_path, capsys):
    f = tmp_path / "ising.json"
    code, _, _ = run(["construct", "--orders", "2", "--bichar", "1", "--sign", "+1", "--out", f], capsys)
    assert code == 0
    data = from_json(f.read_text())
    assert data.spec.orders == (2,)
    code, out, _ = run(["verify", f], capsys)
    assert code == 0 and json.loads(out)["pass"] is True


def test_construct_variants(tmp_path, capsys):
    f = tmp_path / "z3.json"
    assert run(["construct", "--orders", "3", "--bichar", "2", "--sign", "-1", "--out", f], capsys)[0] == 0
    assert f.exists()
    code, out, _ = run(["construct", "--orders", "2,4", "--bichar", "1,0;0,1"], capsys)
    assert code == 0 and json.loads(out)["orders"] == [2, 4]
    code, out, _ = run(["construct", "--orders", "2", "2", "--bichar", "[[0,1],[1,0]]"], capsys)
    assert code == 0
    code, out, _ = run(["construct", "--orders", "--sign", "-1"], capsys)
    assert code == 0 and json.loads(out)["gamma"] == [[-1.0, 0.0]]


def test_construct_degenerate(capsys):
    code, _, err = run(["construct", "--orders", "4", "--bichar", "2"], capsys)
    assert code == 2 and "degenerate" in err


def test_verify_mutated_and_malformed(tmp_path, capsys):
    f = tmp_path / "d.json"
    run(["construct", "--orders", "3", "--bichar", "1", "--out", f], capsys)
    m = tmp_path / "m.json"
    m.write_text(mutate(from_json(f.read_text()), 2, include_gamma=False).to_json())
    code, out, _ = run(["verify", m], capsys)
    assert code == 1 and json.loads(out)["pass"] is False
    g = tmp_path / "g.json"
    g.write_text(mutate(from_json(f.read_text()), 0, count=20).to_json())
    assert run(["verify", g], capsys)[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["verify", bad], capsys)[0] == 2
    assert run(["verify", tmp_path / "missing.json"], capsys)[0] == 2


def test_gauge_then_normalize(tmp_path, capsys):
    f = tmp_path / "d.json"
    run(["construct", "--orders", "5", "--bichar", "2", "--sign", "-1", "--out", f], capsys)
    gauged = tmp_path / "g.json"
    assert run(["gauge", f, "--seed", "3", "--out", gauged], capsys)[0] == 0
    assert from_json(gauged.read_text()) != from_json(f.read_text())
    code, plain, _ = run(["normalize", f], capsys)
    assert code == 0
    code, out, _ = run(["normalize", gauged], capsys)
    assert code == 0
    a, b = json.loads(plain), json.loads(out)
    assert (a["chi"], a["sign"], a["M"]) == (b["chi"], b["sign"], b["M"]) and b["sign"] == -1


def test_gauge_from_file(tmp_path, capsys):
    from tycat.groups import GroupSpec
    from tycat.normalize import random_gauge

    f = tmp_path / "d.json"
    run(["construct", "--orders", "2", "--out", f], capsys)
    gf = tmp_path / "gauge.json"
    gf.write_text(random_gauge(GroupSpec((2,)), 1).to_json())
    code, out, _ = run(["gauge", f, "--gauge", gf], capsys)
    assert code == 0 and from_json(out).spec.orders == (2,)
    assert run(["gauge", f], capsys)[0] == 2


def test_normalize_invalid_data(tmp_path, capsys):
    f = tmp_path / "d.json"
    run(["construct", "--orders", "3", "--bichar", "1", "--out", f], capsys)
    f.write_text(mutate(from_json(f.read_text()), 4, include_gamma=False).to_json())
    code, _, err = run(["normalize", f], capsys)
    assert code == 1 and "verification" in err


def test_classify(capsys):
    code, out, _ = run(["classify", "--orders", "3"], capsys)
    assert code == 0 and json.loads(out)["count"] == 4


def test_continuum(capsys):
    code, out, _ = run(["continuum", "--size", "64", "--param", "1", "--sign", "+1"], capsys)
    assert code == 0 and json.loads(out)["pass"] is True
    assert run(["continuum", "--size", "63", "--param", "1"], capsys)[0] == 2


def test_tolerance_flag_and_env(tmp_path, capsys, monkeypatch):
    f = tmp_path / "d.json"
    run(["construct", "--orders", "2", "--out", f], capsys)
    monkeypatch.setenv("TYCAT_TOLERANCE", "1e-3")
    code, out, _ = run(["verify", f], capsys)
    assert json.loads(out)["tolerance"] == 1e-3
    code, out, _ = run(["verify", f, "--tolerance", "1e-8"], capsys)
    assert json.loads(out)["tolerance"] == 1e-8
    monkeypatch.setenv("TYCAT_TOLERANCE", "abc")
    assert run(["verify", f], capsys)[0] == 2


def test_usage_errors(capsys):
    assert run(["construct", "--orders", "2", "--colour", "red"], capsys)[0] == 2
    assert run(["explode"], capsys)[0] == 2
    assert run(["construct", "--orders", "x"], capsys)[0] == 2
    assert run(["construct", "--orders", "2", "--sign", "3"], capsys)[0] == 2
    assert run([], capsys)[0] == 2


def test_output_is_deterministic(tmp_path, capsys):
    outs = []
    for _ in range(2):
        f = tmp_path / "d.json"
        run(["construct", "--orders", "2,2", "--bichar", "0,1;1,0", "--out", f], capsys)
        run(["gauge", f, "--seed", "8", "--out", tmp_path / "g.json"], capsys)
        outs.append(((tmp_path / "g.json").read_bytes(), run(["normalize", tmp_path / "g.json"], capsys)[1]))
    assert outs[0] == outs[1]


@pytest.mark.parametrize("argv", [["--help"], ["verify", "--help"]])
def test_help(argv, capsys):
    assert run(argv, capsys)[0] == 0
