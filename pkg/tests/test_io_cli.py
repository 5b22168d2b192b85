import json
import subprocess
import sys

import pytest

from ainfalg.ainf import AInfAlgebra
from ainfalg.cli import main, run
from ainfalg.dg import DgAlgebra
from ainfalg.errors import ParseError
from ainfalg.io import CORPUS, corpus_names, load, parse, serialize


def test_corpus_contents():
    names = set(corpus_names())
    assert {"kronecker", "cyclic", "four_vertex", "dual_numbers", "burniat"} <= names


@pytest.mark.parametrize("name", corpus_names())
def test_round_trip_is_byte_identical(name):
    text = (CORPUS / f"{name}.alg").read_text()
    f = parse(text)
    assert serialize(f.algebra, f.metadata or None) == text


def test_kinds():
    k = load("kronecker").algebra
    assert isinstance(k, DgAlgebra) and k.dim == 4
    fv = load("four_vertex").algebra
    assert isinstance(fv, AInfAlgebra)
    assert fv.m(3, [fv.element("a"), fv.element("b"), fv.element("c")]) == fv.element("e")


def test_burniat_shape():
    b = load("burniat").algebra
    g = b.algebra
    arrows = [i for i in range(g.dim) if g.degrees[i] == 2]
    assert len(arrows) == 18 and g.dim == 24
    counts = {}
    for i in arrows:
        counts[g.vertices[i]] = counts.get(g.vertices[i], 0) + 1
    assert counts[("1", "6")] == counts[("2", "6")] == 3
    assert counts[("3", "6")] == counts[("4", "6")] == counts[("5", "6")] == 2
    assert counts[("1", "3")] == counts[("2", "5")] == 1
    # radical square zero
    assert all(not g.mul({i: 1}, {j: 1}) for i in arrows for j in arrows)


def test_parse_errors():
    good = (CORPUS / "kronecker.alg").read_text()
    with pytest.raises(ParseError, match="'zz'"):
        parse(good.replace('[["b", "1"]]', '[["zz", "1"]]', 1))
    with pytest.raises(ParseError, match="line"):
        parse(good[:-5])
    with pytest.raises(ParseError, match="not a rational"):
        parse(good.replace('"1"]]', '"x"]]', 1))
    with pytest.raises(ParseError, match="unknown key"):
        parse('{"field": "QQ", "basis": [], "unit": [], "extra": 1}')


def test_axiom_violation_is_a_parse_error():
    text = (CORPUS / "cyclic.alg").read_text().replace('[["e3", "-1"]]', '[["e3", "1"]]')
    with pytest.raises(ParseError, match="Stasheff"):
        parse(text)


def test_trees_command():
    code, rep = run(["trees", "--n", "4", "--stats"])
    assert code == 0
    rows = rep["result"]["rows"]
    assert len(rows) == 11
    assert sorted((r["v"], r["abs_degree"]) for r in rows).count((3, 0)) == 5


def test_filtration_command_cyclic():
    code, rep = run(["filtration", "--max", "10", "cyclic"])
    assert code == 0
    res = rep["result"]
    assert res["verdict"] == "PersistsThrough(10)"
    assert res["radical_witness"] == "m_3(a,b,c) = e1 is not in J"
    assert any(g["vector"] in ("e1", "-1*e1") for g in res["generators"]["9"])


def test_hh_command():
    code, rep = run(["hh", "--lo", "-1", "--hi", "-1", "kronecker"])
    assert code == 0 and rep["result"]["dims"] == {"-1": 1}


def test_report_is_deterministic():
    _, r1 = run(["motive", "four_vertex"])
    _, r2 = run(["motive", "four_vertex"])
    r1.pop("timing"), r2.pop("timing")
    assert json.dumps(r1) == json.dumps(r2)
    assert list(r1) == ["command", "input", "input_digest", "result", "hypothesis_flags"]


def test_exit_codes(tmp_path, capsys):
    assert main(["k0", "kronecker"]) == 0
    assert main(["hh", "--lo", "0", "--hi", "0", "cyclic"]) == 1
    assert main(["k0", "no_such_algebra"]) == 2
    with pytest.raises(SystemExit) as e:
        main(["bogus"])
    assert e.value.code == 2
    bad = tmp_path / "bad.alg"
    bad.write_text('{"field": "QQ", "basis": [{"name": "x", "degree": 0}], "unit": ["y"]}')
    assert main(["validate", str(bad)]) == 1
    assert "'y'" in capsys.readouterr().err


def test_minimal_model_and_normalize_outputs(tmp_path):
    out = tmp_path / "m.alg"
    code, rep = run(["minimal-model", "massey", "--output", str(out)])
    assert code == 0 and rep["result"]["valid"]
    assert isinstance(load(str(out)).algebra, AInfAlgebra)
    code, rep = run(["normalize", "four_vertex_gauged"])
    assert code == 0 and rep["result"]["algebra"]["m"]["3"] == [{"args": ["a", "b", "c"], "value": [["e", "1"]]}]


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "ainfalg.cli", "k0", "four_vertex"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["result"]["rank"] == 4
