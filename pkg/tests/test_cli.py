from __future__ import annotations

import json

from cycleframe import cli, serialize
from cycleframe.arcs import Params, build_arcs


def run(argv):
    return cli.main(argv)


def test_build_writes_verified_json(tmp_path, capsys):
    out = tmp_path / "out.json"
    code = run(["build", "--lambda", "2", "--k", "4", "--u", "5", "--g", "2",
                "-o", str(out)])
    assert code == 0
    obj = json.loads(out.read_text())
    assert obj["params"] == {"lambda": 2, "k": 4, "u": 5, "g": 2}
    assert len(obj["factors"]) == 5
    assert len(obj["provenance"]) == 5
    assert all(isinstance(f["hole"], int) for f in obj["factors"])


def test_build_exit_codes(tmp_path, capsys):
    assert run(["build", "--lambda", "1", "--k", "4", "--u", "5", "--g", "4",
                "-o", str(tmp_path / "x.json")]) == 2
    assert "even" in capsys.readouterr().err
    assert run(["build", "--lambda", "2", "--k", "4", "--u", "8", "--g", "4",
                "-o", str(tmp_path / "x.json")]) == 3
    assert "(2s,4t,8)" in capsys.readouterr().err
    assert run(["build", "--lambda", "2", "--k", "6", "--u", "4", "--g", "2",
                "-o", str(tmp_path / "x.json")]) == 4
    assert not (tmp_path / "x.json").exists()


def test_verify_roundtrip_and_corruption(tmp_path, capsys):
    out = tmp_path / "out.json"
    assert run(["build", "--lambda", "2", "--k", "4", "--u", "5", "--g", "2",
                "-o", str(out)]) == 0
    assert run(["verify", str(out)]) == 0
    obj = json.loads(out.read_text())
    obj["factors"][0]["hole"] = (obj["factors"][0]["hole"] + 1) % 5
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    assert run(["verify", str(bad)]) == 6
    assert "FAIL" in capsys.readouterr().err
    mangled = tmp_path / "mangled.json"
    mangled.write_text("{ not json")
    assert run(["verify", str(mangled)]) == 1


def test_json_roundtrip_identity(tmp_path):
    p = Params(2, 4, 5, 3)
    dec = build_arcs(p)
    obj = serialize.decomposition_to_obj(dec, p)
    params2, dec2 = serialize.decomposition_from_obj(
        json.loads(serialize.canonical_json_bytes(obj)))
    assert params2 == p
    assert dec2.factors == dec.factors
    assert dec2.provenance == dec.provenance


def test_check_output_format(capsys):
    assert run(["check", "--lambda", "1", "--k", "4", "--u", "5", "--g", "3"]) == 0
    assert capsys.readouterr().out.strip() == "Feasible (case a)"
    assert run(["check", "--lambda", "2", "--k", "6", "--u", "3", "--g", "6"]) == 0
    assert capsys.readouterr().out.strip() == "Feasible (case d)"
    assert run(["check", "--lambda", "2", "--k", "4", "--u", "8", "--g", "4"]) == 3
    assert capsys.readouterr().out.strip() == "OpenException ((2s,4t,8))"
    assert run(["check", "--lambda", "2", "--k", "4", "--u", "2", "--g", "4"]) == 2


def test_table_small_grid(tmp_path):
    out = tmp_path / "grid.csv"
    code = run(["table", "--lambdas", "1,2", "--ks", "4", "--max-u", "6",
                "--max-g", "4", "-o", str(out)])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "lambda,k,u,g,verdict,factors,millis"
    assert len(lines) == 1 + 2 * 1 * 4 * 3
    feasible = [ln for ln in lines[1:] if ",Feasible," in ln]
    assert feasible, "expected at least one feasible cell"
    for ln in feasible:
        assert ln.split(",")[5].isdigit()


def test_table_default_grid(tmp_path):
    out = tmp_path / "default.csv"
    assert run(["table", "-o", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 1 + 2 * 3 * 11 * 7
    assert any(",Feasible," in ln for ln in lines)
    assert not any("FAILED" in ln for ln in lines)


def test_table_empty_range(tmp_path, capsys):
    out = tmp_path / "empty.csv"
    assert run(["table", "--lambdas", "", "--ks", "4", "-o", str(out)]) == 0
    assert out.read_text().strip() == "lambda,k,u,g,verdict,factors,millis"


def test_bad_arguments_exit_one(tmp_path, capsys):
    assert run(["build", "--lambda", "1", "--k", "5", "--u", "5", "--g", "3",
                "-o", str(tmp_path / "x.json")]) == 1
    assert run(["check", "--lambda", "0", "--k", "4", "--u", "5", "--g", "3"]) == 1
    capsys.readouterr()


def test_build_no_verify_flag(tmp_path):
    out = tmp_path / "fast.json"
    assert run(["build", "--lambda", "2", "--k", "4", "--u", "5", "--g", "2",
                "--no-verify", "-o", str(out)]) == 0
    assert run(["verify", str(out)]) == 0


def test_construction_bug_surfaces(tmp_path, monkeypatch):
    from cycleframe.graphs import ConstructionBugError

    def sabotaged(p, verify=True):
        raise ConstructionBugError("injected fault", factor_index=0)

    monkeypatch.setattr(cli, "build_arcs", sabotaged)
    assert run(["build", "--lambda", "2", "--k", "4", "--u", "5", "--g", "2",
                "-o", str(tmp_path / "x.json")]) == 5

    out = tmp_path / "bad.csv"
    assert run(["table", "--lambdas", "2", "--ks", "4", "--max-u", "5",
                "--max-g", "2", "-o", str(out)]) == 5
    flagged = [ln for ln in out.read_text().splitlines() if "FAILED" in ln]
    assert flagged and flagged[0].startswith("2,4,5,2,Feasible")


def test_build_determinism_with_warm_cache(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["build", "--lambda", "2", "--k", "4", "--u", "9", "--g", "2",
                "-o", str(a)]) == 0
    assert run(["build", "--lambda", "2", "--k", "4", "--u", "9", "--g", "2",
                "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
