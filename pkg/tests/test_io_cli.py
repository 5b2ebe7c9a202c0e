import json
from fractions import Fraction

import pytest

from toric_ccc import fixtures as fx
from toric_ccc import io
from toric_ccc.cli import run
from toric_ccc.euler import CF, cf_equal, cf_evaluate, closed_polytope
from toric_ccc.geometry import GeometryError, refine
from toric_ccc.toric import morelli_eq1

from hypothesis import given

from strategies import functions


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc), encoding="utf-8")
    return str(p)


def ccc(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- parsing --------------------------------------------------------------------------


def test_parse_p1_fan(tmp_path):
    path = write(tmp_path, "p1.json", {"kind": "fan", "dim": 1, "rays": [[1], [-1]], "cones": [[0], [1]]})
    fan = io.parse_input(path)
    assert fan.dim == 1 and sorted(fan.rays) == [(-1,), (1,)]


@pytest.mark.parametrize("name", sorted(fx.bundle_fixtures()))
def test_klyachko_roundtrip(name):
    b = fx.bundle_fixtures()[name]
    doc = io.encode(b)
    assert io.encode(io.decode(json.loads(io.dumps(doc)))) == doc


def test_theta_roundtrip():
    F = fx.fixed_point_complex()
    G = io.decode(io.encode(F))
    assert io.encode(G) == io.encode(F)
    assert [g.degree for g in G.gens] == [g.degree for g in F.gens]


def test_cartier_roundtrip():
    L = fx.o_p1xp1(2, -1)
    assert io.encode(io.decode(io.encode(L))) == io.encode(L)


def test_rationals_are_strings():
    doc = io.encode(fx.tangent_p2())
    for steps in doc["filtrations"].values():
        for s in steps:
            assert all(isinstance(x, str) for v in s["basis"] for x in v)
    assert io.rat("3/6") == Fraction(1, 2) and io.fmt(Fraction(-4, 2)) == "-2"


def test_incompatible_cartier_names_face():
    doc = io.encode(fx.o_p2(1))
    doc["m"]["0"] = [5, 5]
    with pytest.raises(io.InvariantViolation) as err:
        io.decode(doc)
    assert err.value.pointer == "/m"
    assert "shared face [" in str(err.value)


def test_condition_c_names_cone():
    fan = {"dim": 3, "rays": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]],
           "cones": [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]}
    eye = [["1", "0"], ["0", "1"]]
    doc = {"kind": "klyachko", "fan": fan, "rank": 2, "filtrations": {
        "0": [{"jump": -1, "basis": [["1", "0"]]}, {"jump": 0, "basis": eye}],
        "1": [{"jump": -1, "basis": [["0", "1"]]}, {"jump": 0, "basis": eye}],
        "2": [{"jump": -1, "basis": [["1", "1"]]}, {"jump": 0, "basis": eye}],
        "3": [{"jump": 0, "basis": eye}]}}
    with pytest.raises(io.InvariantViolation) as err:
        io.decode(doc)
    assert "cone [0, 1, 2]" in str(err.value)
    assert not isinstance(err.value, io.SchemaViolation)


def test_schema_violation_pointer():
    with pytest.raises(io.SchemaViolation) as err:
        io.decode({"kind": "fan", "dim": 1, "rays": [[1], [-1]], "cones": [["a"], [1]]})
    assert err.value.pointer == "/cones/0/0"


def test_unknown_fields_rejected():
    with pytest.raises(io.SchemaViolation):
        io.decode({"kind": "fan", "dim": 1, "rays": [[1], [-1]], "cones": [[0], [1]], "colour": "red"})


def test_bad_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{", encoding="utf-8")
    with pytest.raises(io.SchemaViolation):
        io.parse_input(str(p))


# -- cell dumps ---------------------------------------------------------------------------


def _roundtrip_equal(f: CF) -> bool:
    g = io.decode(json.loads(io.dumps(io.dump_cells(f))))
    cells = refine(f.cells + g.cells).cells if (f.terms or g.terms) else []
    return all(cf_evaluate(f, c.sample_point()) == cf_evaluate(g, c.sample_point()) for c in cells)


@given(functions(2, homogeneous=False, max_terms=3))
def test_dump_roundtrip(f):
    assert _roundtrip_equal(f)


def test_dump_roundtrip_fixture(tmp_path):
    f = morelli_eq1(fx.tangent_p2())
    path = str(tmp_path / "cells.json")
    io.dump_cells(f, path)
    assert cf_equal(io.parse_input(path), f)


def test_dump_mo_o1_p2():
    doc = io.dump_cells(morelli_eq1(fx.line(fx.o_p2(1))))
    dims = [t["dimension"] for t in doc["terms"]]
    assert dims == [2]
    assert abs(doc["terms"][0]["weight"]) == 1
    assert len(doc["terms"][0]["gt"]) == 3


def test_dump_empty_function():
    assert io.dump_cells(CF.from_terms(2, []))["terms"] == []


def test_dump_rejects_dim_four():
    f = closed_polytope(4, [((1, 0, 0, 0), 0)])
    with pytest.raises(GeometryError):
        io.dump_cells(f)


def test_dump_labels():
    doc = io.dump_cells(closed_polytope(1, [((1,), 0), ((-1,), -1)]))
    assert {t["label"] for t in doc["terms"]} == {"positive"}
    assert sorted(t["dimension"] for t in doc["terms"]) == [0, 0, 1]


# -- command line -----------------------------------------------------------------------


@pytest.fixture
def docs(tmp_path):
    out = {}
    out["o11"] = write(tmp_path, "o11.json", io.encode(fx.o_p1xp1(1, 1)))
    out["om1"] = write(tmp_path, "om1.json", io.encode(fx.o_p2(-1)))
    out["o2"] = write(tmp_path, "o2.json", io.encode(fx.o_p1(2)))
    out["fp"] = write(tmp_path, "fp.json", io.encode(fx.fixed_point_complex()))
    out["p2"] = write(tmp_path, "p2.json", io.encode(fx.fan("P2")))
    out["seg"] = write(tmp_path, "seg.json", io.encode(closed_polytope(1, [((1,), 0), ((-1,), -1)])))
    return out


def test_cli_nef_true(capsys, docs):
    code, out, _ = ccc(capsys, "certify", "nef", docs["o11"])
    assert code == 0 and json.loads(out)["verdict"] is True


def test_cli_nef_false(capsys, docs):
    code, out, _ = ccc(capsys, "certify", "nef", docs["om1"])
    assert code == 1 and json.loads(out)["witnesses"]


def test_cli_bundle_false_with_witness(capsys, docs):
    code, out, _ = ccc(capsys, "certify", "bundle", docs["fp"])
    rep = json.loads(out)
    assert code == 1 and rep["status"] == "false"
    assert rep["witnesses"] and "replay" in rep["witnesses"][0]


def test_cli_replay(capsys, docs, tmp_path):
    _, out, _ = ccc(capsys, "certify", "bundle", docs["fp"])
    replay = write(tmp_path, "w.json", json.loads(out)["witnesses"][0]["replay"])
    code, out, _ = ccc(capsys, "--replay", replay)
    assert code == 1 and json.loads(out)["reproduced"] is True


def test_cli_theta_table(capsys, docs):
    code, out, _ = ccc(capsys, "theta", "table", docs["o2"])
    rows = json.loads(out)["table"]
    assert code == 0
    assert rows == [{"x": [x], "betti": {"0": 1, "1": 0}} for x in (0, 1, 2)]


def test_cli_fan_validate(capsys, docs):
    code, out, _ = ccc(capsys, "fan", "validate", docs["p2"])
    assert code == 0 and json.loads(out)["smooth"]


def test_cli_euler(capsys, docs):
    code, out, _ = ccc(capsys, "euler", "integrate", docs["seg"])
    assert code == 0 and json.loads(out)["integral"] == 1
    code, out, _ = ccc(capsys, "euler", "mu", docs["seg"], "--x", "0")
    assert code == 0 and json.loads(out)["function"]["kind"] == "function"


def test_cli_mo_conventions(capsys, docs):
    for conv in ("eq1", "costalk"):
        code, out, _ = ccc(capsys, "mo", docs["o11"], "--convention", conv)
        assert code == 0 and json.loads(out)["convention"] == conv


@pytest.mark.parametrize("argv", [
    ["certify", "nef", "missing.json"],
    ["certify", "frobnicate", "x.json"],
    ["theta", "morse"],
    [],
])
def test_cli_input_errors(capsys, argv):
    assert ccc(capsys, *argv)[0] == 2


def test_cli_error_is_structured(capsys, tmp_path):
    bad = write(tmp_path, "bad.json", {"kind": "fan", "dim": 1, "rays": [[1], [-1]], "cones": [["a"], [1]]})
    code, _, err = ccc(capsys, "fan", "validate", bad)
    assert code == 2 and json.loads(err)["pointer"] == "/cones/0/0"


def test_cli_wrong_input_kind(capsys, docs):
    code, _, err = ccc(capsys, "euler", "integrate", docs["o2"])
    assert code == 2 and json.loads(err)["error"]


def test_cli_threads_env(capsys, docs, monkeypatch):
    monkeypatch.setenv("CCC_THREADS", "many")
    code, _, err = ccc(capsys, "certify", "nef", docs["o11"])
    assert code == 2 and json.loads(err)["pointer"] == "/env/CCC_THREADS"
    monkeypatch.setenv("CCC_THREADS", "2")
    assert ccc(capsys, "certify", "nef", docs["o11"])[0] == 0


def test_cli_deterministic(capsys, docs, tmp_path):
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    for path in (a, b):
        assert run(["certify", "convex", docs["fp"], "--seed", "7", "-o", path]) == 1
    with open(a, "rb") as fa, open(b, "rb") as fb:
        assert fa.read() == fb.read()


def test_cli_random_fixture_deterministic(capsys):
    outs = [ccc(capsys, "fixture", "random:P2:2", "--seed", "3")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    assert outs[0] != ccc(capsys, "fixture", "random:P2:2", "--seed", "4")[1]
    io.decode(json.loads(outs[0]))
