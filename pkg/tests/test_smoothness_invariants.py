import time

import pytest

from ainfalg.algebra import make_algebra, path_algebra
from ainfalg.dg import DgAlgebra
from ainfalg.errors import AlgebraError
from ainfalg.field import GF, QQ
from ainfalg.invariants import k0_quotient_compare, k0_rank, motive_report
from ainfalg.io import load, load_corpus
from ainfalg.linalg import Subspace
from ainfalg.smoothness import NotSmooth, Smooth, Unknown, replay, smoothness_probe


def test_dual_numbers_not_smooth():
    for F in (QQ, GF(2)):
        g = path_algebra(F, ["1"], [("x", "1", "1")], max_length=1)
        v = smoothness_probe(DgAlgebra(g, {}), max_steps=2)
        assert isinstance(v, NotSmooth)
        assert v.period == 1 and v.step <= 2
        assert replay(v)


def test_dual_numbers_dga_not_smooth():
    # H^0 = k[x]/x^2 and the cohomology is concentrated in degree 0
    v = smoothness_probe(load_corpus("dual_numbers"))
    assert isinstance(v, NotSmooth) and replay(v)


def test_path_algebras_smooth():
    for name, length in [("a2", 1), ("a4", 1), ("kronecker", 1)]:
        v = smoothness_probe(load_corpus(name))
        assert isinstance(v, Smooth) and v.length == length
        assert replay(v)


def test_global_dimension_two():
    g = path_algebra(QQ, ["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")], relations_zero_paths=[("a", "b")])
    v = smoothness_probe(DgAlgebra(g, {}))
    assert isinstance(v, Smooth) and v.length == 2 and replay(v)


def test_cyclic_quivers():
    # two-cycle with both compositions zero: infinite global dimension
    g = path_algebra(QQ, ["1", "2"], [("a", "1", "2"), ("b", "2", "1")], max_length=1)
    v = smoothness_probe(DgAlgebra(g, {}))
    assert isinstance(v, NotSmooth) and replay(v)
    # only ab = 0: global dimension 2
    g = path_algebra(QQ, ["1", "2"], [("a", "1", "2"), ("b", "2", "1")], relations_zero_paths=[("a", "b")])
    v = smoothness_probe(DgAlgebra(g, {}))
    assert isinstance(v, Smooth) and v.length == 2


def test_burniat_smooth():
    v = smoothness_probe(load_corpus("burniat"))
    assert isinstance(v, Smooth) and v.length == 2 and replay(v)


def test_tampered_not_smooth_certificate_fails_replay():
    g = path_algebra(QQ, ["1"], [("x", "1", "1")], max_length=1)
    v = smoothness_probe(DgAlgebra(g, {}))
    phi = v.certificate["map"]
    v.certificate["map"] = phi.scale(QQ(0))
    assert not replay(v)


def test_higher_products_unknown():
    v = smoothness_probe(load_corpus("four_vertex"))
    assert isinstance(v, Unknown)


def test_probe_is_fast():
    start = time.perf_counter()
    smoothness_probe(load_corpus("kx2"), max_steps=2)
    smoothness_probe(load_corpus("a4"))
    assert time.perf_counter() - start < 1.0


def test_k0_ranks():
    assert k0_rank(load_corpus("kronecker")).rank == 2
    assert k0_rank(load_corpus("four_vertex")).rank == 4
    assert k0_rank(load_corpus("burniat")).rank == 6
    assert k0_rank(load_corpus("jminus_strict")).rank == 1


def test_k0_of_matrix_algebra_is_one():
    basis = [(f"E{i}{j}", 0) for i in range(2) for j in range(2)]
    prods = {(f"E{i}{j}", f"E{j}{k}"): {f"E{i}{k}": 1} for i in range(2) for j in range(2) for k in range(2)}
    g = make_algebra(QQ, basis, prods, ["E00", "E11"])
    assert k0_rank(g).rank == 1
    rep = motive_report(DgAlgebra(g, {}))
    assert rep.split_rank == 1 and rep.block_sizes == [2]
    assert "M_2(k)" in rep.target


def test_motive_reports():
    r = motive_report(load_corpus("kronecker"))
    assert r.target.endswith("U(k)^2") and r.hypothesis_flags == []
    f = load("four_vertex")
    r = motive_report(f.algebra, claims=f.metadata)
    assert r.target.endswith("U(k)^4")
    assert any("asserted" in fl for fl in r.hypothesis_flags)
    r = motive_report(load_corpus("kx2"))
    assert any("fails" in fl for fl in r.hypothesis_flags)


def test_k0_quotient_compare():
    A = load_corpus("dual_numbers")
    I = Subspace(QQ, 4, [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    out = k0_quotient_compare(A, I)
    assert out["hypothesis_met"] and out["equal"] and out["rank_a"] == 1
    g = make_algebra(QQ, [("e1", 0), ("e2", 0)], {("e1", "e1"): {"e1": 1}, ("e2", "e2"): {"e2": 1}}, ["e1", "e2"])
    B = DgAlgebra(g, {})
    out = k0_quotient_compare(B, Subspace(QQ, 2, [[1, 0]]))
    assert not out["hypothesis_met"] and (out["rank_a"], out["rank_quotient"]) == (2, 1)
    with pytest.raises(AlgebraError):
        k0_quotient_compare(A, Subspace(QQ, 4, [[0, 0, 0, 1]]))
