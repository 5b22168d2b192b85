import itertools
import random

import pytest

from ainfalg.algebra import path_algebra
from ainfalg.dg import DgAlgebra
from ainfalg.errors import AlgebraError
from ainfalg.field import GF, QQ
from ainfalg.hochschild import ext_window, hochschild_window
from ainfalg.io import load_corpus
from ainfalg.linalg import Matrix, rank

from helpers import random_degree0_algebra


def center_dim(g):
    """dim Z(A): solve x b_j = b_j x for all basis elements b_j."""
    n = g.dim
    rows = []
    for j in range(n):
        for out in range(n):
            row = []
            for i in range(n):
                left = g.product.get((i, j), {}).get(out, 0)
                right = g.product.get((j, i), {}).get(out, 0)
                row.append(g.field(left) - g.field(right))
            rows.append(row)
    return n - rank(Matrix.from_rows(g.field, rows, n)) if rows else n


def outer_derivation_dim(g):
    """dim Der(A) - dim Inn(A), with Inn(A) = A / Z(A)."""
    n = g.dim
    F = g.field
    # unknowns D[k][i]: coefficient of b_k in D(b_i)
    var = {(k, i): v for v, (k, i) in enumerate(itertools.product(range(n), repeat=2))}
    rows = []
    for i, j in itertools.product(range(n), repeat=2):
        for out in range(n):
            row = [F.zero] * len(var)
            # D(b_i b_j)
            for k, c in g.product.get((i, j), {}).items():
                row[var[(out, k)]] += c
            # - D(b_i) b_j - b_i D(b_j)
            for k in range(n):
                c1 = g.product.get((k, j), {}).get(out)
                if c1:
                    row[var[(k, i)]] -= c1
                c2 = g.product.get((i, k), {}).get(out)
                if c2:
                    row[var[(k, j)]] -= c2
            rows.append(row)
    der = len(var) - rank(Matrix.from_rows(F, rows, len(var)))
    return der - (n - center_dim(g))


def test_kronecker_window():
    w = hochschild_window(load_corpus("kronecker"), -3, 2)
    assert w.dims == {-3: 0, -2: 0, -1: 1, 0: 1, 1: 1, 2: 0}
    assert w.d_squared_zero


def test_dual_numbers_window_both_fields():
    for F in (QQ, GF(3)):
        g = path_algebra(F, ["1"], [("x", "1", "1")], max_length=1)
        w = hochschild_window(DgAlgebra(g, {}), -1, 2)
        assert w.dims == {-1: 0, 0: 2, 1: 1, 2: 1}
    # in characteristic 2, x -> 1 is an extra derivation of k[x]/x^2
    g = path_algebra(GF(2), ["1"], [("x", "1", "1")], max_length=1)
    assert hochschild_window(DgAlgebra(g, {}), 1, 1).dims[1] == outer_derivation_dim(g) == 2


def test_path_algebras_are_rigid():
    for n in (2, 4):
        A = load_corpus(f"a{n}")
        w = hochschild_window(A, -2, 2)
        assert w.dims == {-2: 0, -1: 0, 0: 1, 1: 0, 2: 0}


def test_random_degree_zero_algebras():
    rng = random.Random(11)
    for _ in range(20):
        g = random_degree0_algebra(rng)
        w = hochschild_window(DgAlgebra(g, {}), -3, 1)
        assert w.d_squared_zero
        assert w.dims[-3] == w.dims[-2] == w.dims[-1] == 0
        assert w.dims[0] == center_dim(g)
        assert w.dims[1] == outer_derivation_dim(g)


def test_basis_change_invariance():
    g = path_algebra(QQ, ["1", "2", "3"], [("p", "1", "2"), ("q", "1", "2"), ("r", "2", "3")])
    n = g.dim
    ident = [[QQ(int(r == c)) for r in range(n)] for c in range(n)]
    new = [list(v) for v in ident]
    ip, iq = g.index("p"), g.index("q")
    new[ip] = [QQ(1) if r in (ip, iq) else QQ(0) for r in range(n)]  # p' = p + q
    new[iq] = [QQ(1) if r == ip else QQ(-1) if r == iq else QQ(0) for r in range(n)]  # q' = p - q
    h = g.change_basis(new)
    w1 = hochschild_window(DgAlgebra(g, {}), -1, 2)
    w2 = hochschild_window(DgAlgebra(h, {}), -1, 2)
    assert w1.dims == w2.dims


def test_window_requires_connective():
    with pytest.raises(AlgebraError, match="connective"):
        hochschild_window(load_corpus("burniat"), 0, 1)


def test_ext_windows():
    w = ext_window(load_corpus("a2"), 0, 2)
    assert w.dims == {0: 3, 1: 0, 2: 0}
    assert w.checks["H0_is_B"] and w.checks["H1_zero"]
    w = ext_window(load_corpus("kronecker"), 0, 3)
    assert w.dims == {0: 3, 1: 0, 2: 0, 3: 2}
    w = ext_window(load_corpus("dual_numbers"), 0, 1)
    assert w.checks["H0_is_B"] and w.checks["H1_zero"] and w.d_squared_zero
