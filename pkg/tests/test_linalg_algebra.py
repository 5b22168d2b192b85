import itertools
import random
from fractions import Fraction

import pytest

from ainfalg.algebra import make_algebra, path_algebra, verify_algebra
from ainfalg.errors import AlgebraError
from ainfalg.field import GF, QQ, FieldMismatch, field_from_name
from ainfalg.linalg import Matrix, Subspace, inverse, kernel_basis, rank, solve
from ainfalg.radical import basic_reduction, jacobson_radical, loewy_length, radical_data
from ainfalg.sparse import sparse_solve


def test_prime_field_arithmetic():
    F = GF(7)
    x = F(3)
    assert x * F(5) == F(1)
    assert x / F(3) == F.one
    assert F.parse("3/2") * F(2) == F(3)
    assert F.format(F(-1)) == "6"
    with pytest.raises(FieldMismatch):
        GF(5)(F(1))
    with pytest.raises(ValueError):
        GF(6)


def test_rationals_parse_format():
    assert QQ.parse("-3/6") == Fraction(-1, 2)
    assert QQ.format(Fraction(4, 2)) == "2"
    assert QQ.format(Fraction(-1, 3)) == "-1/3"
    assert field_from_name("GF(3)") == GF(3)
    with pytest.raises(ValueError):
        QQ.parse("1.5e")


def test_rank_kernel_inverse_random():
    rng = random.Random(1)
    for _ in range(30):
        n, m = rng.randint(1, 5), rng.randint(1, 5)
        rows = [[QQ(rng.randint(-3, 3)) for _ in range(m)] for _ in range(n)]
        M = Matrix.from_rows(QQ, rows, m)
        ker = kernel_basis(M)
        assert len(ker) + rank(M) == m
        for v in ker:
            assert all(sum(r[j] * v[j] for j in range(m)) == 0 for r in rows)
    A = Matrix.from_rows(QQ, [[QQ(2), QQ(1)], [QQ(1), QQ(1)]])
    Ai = inverse(A)
    assert Ai.tolist() == [[1, -1], [-1, 2]]
    assert solve(A, [QQ(3), QQ(2)]) == [1, 1]


def test_subspace_operations():
    U = Subspace(QQ, 3, [[1, 0, 0], [0, 1, 0]])
    V = Subspace(QQ, 3, [[0, 1, 0], [0, 0, 1]])
    W = U.intersect(V)
    assert W.dim == 1 and W.contains([0, 5, 0])
    assert U.extend(V.basis()).dim == 3
    assert not U.contains([1, 1, 1])
    assert len(U.complement_basis()) == 1


def test_sparse_solve():
    eqs = [({"x": QQ(1), "y": QQ(1)}, QQ(3)), ({"x": QQ(1), "y": QQ(-1)}, QQ(1))]
    sol = sparse_solve(eqs, QQ.zero, QQ.one)
    assert sol["x"] == 2 and sol["y"] == 1
    bad = [({"x": QQ(1)}, QQ(1)), ({"x": QQ(2)}, QQ(3))]
    assert sparse_solve(bad, QQ.zero, QQ.one) is None


def test_path_algebra_kronecker():
    g = path_algebra(QQ, ["1", "2"], [("a", "1", "2"), ("b", "1", "2")], degrees={"b": -2})
    assert g.dim == 4
    assert verify_algebra(g).valid
    assert g.mul(g.element("e1"), g.element("a")) == g.element("a")
    assert g.mul(g.element("a"), g.element("e1")) == {}


def test_verify_algebra_reports_nonassociativity():
    # x*x = y, but y*x != x*y
    g = make_algebra(QQ, [("1", 0), ("x", 0), ("y", 0)],
                     {("1", "1"): {"1": 1}, ("1", "x"): {"x": 1}, ("x", "1"): {"x": 1},
                      ("1", "y"): {"y": 1}, ("y", "1"): {"y": 1}, ("x", "x"): {"y": 1}, ("x", "y"): {"y": 1}},
                     ["1"])
    diag = verify_algebra(g)
    assert not diag.valid
    assert "associativ" in str(diag)


def test_unknown_name_in_make_algebra():
    with pytest.raises(AlgebraError, match="'z'"):
        make_algebra(QQ, [("1", 0)], {("1", "z"): {"1": 1}}, ["1"])


def _matrix_algebra(F, n):
    basis = [(f"E{i}{j}", 0) for i in range(n) for j in range(n)]
    prods = {}
    for i, j, k in itertools.product(range(n), repeat=3):
        prods[(f"E{i}{j}", f"E{j}{k}")] = {f"E{i}{k}": 1}
    return make_algebra(F, basis, prods, [f"E{i}{i}" for i in range(n)])


def _brute_radical(g):
    """J = {x : x y nilpotent for all y}, by enumerating a finite field algebra."""
    F = g.field
    elems = [list(v) for v in itertools.product(F.elements(), repeat=g.dim)]

    def nilpotent(x):
        p = x
        for _ in range(g.dim):
            p = g.mul_dense(p, x)
        return not any(p)

    J = [x for x in elems if all(nilpotent(g.mul_dense(x, y)) for y in elems)]
    return {tuple(x) for x in J}


def test_radical_matches_brute_force_over_fp():
    F = GF(3)
    cases = [
        path_algebra(F, ["1", "2"], [("a", "1", "2")]),
        path_algebra(F, ["1"], [("x", "1", "1")], max_length=2),
        _matrix_algebra(F, 2),
        path_algebra(F, ["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")], relations_zero_paths=[("a", "b")]),
    ]
    for g in cases:
        J = jacobson_radical(g)
        brute = _brute_radical(g)
        assert len(brute) == 3 ** J.dim
        assert all(J.contains(list(x)) for x in brute)


def test_basic_reduction_of_matrix_algebra():
    g = _matrix_algebra(QQ, 2)
    rd = radical_data(g)
    assert rd.J.dim == 0
    assert rd.class_count == 1
    basic, n = basic_reduction(g)
    assert n == 1 and basic.dim == 1


def test_loewy_length_of_a4():
    g = path_algebra(QQ, ["1", "2", "3", "4"], [("a", "1", "2"), ("b", "2", "3"), ("c", "3", "4")])
    assert loewy_length(g, jacobson_radical(g)) == 4
