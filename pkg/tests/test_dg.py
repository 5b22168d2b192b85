import random

from hypothesis import given, settings, strategies as st

from ainfalg.algebra import make_algebra
from ainfalg.dg import (UNDEFINED, DgAlgebra, dg_radical_ideals, is_dg_ideal, is_quasi_isomorphism,
                        jminus_power_filtration, predicates, truncate_connective, verify_dg)
from ainfalg.field import GF, QQ
from ainfalg.io import load_corpus
from ainfalg.linalg import Matrix, Subspace, rank

from helpers import random_connective_dga


def independent_cohomology_dims(A):
    """dim H^k = dim A^k - rank(d on A^k) - rank(d on A^(k-1)), ranks from dense matrices."""
    a = A.algebra

    def drank(k):
        idx = a.degree_indices(k)
        if not idx:
            return 0
        cols = [A.diff_dense(a.std(i)) for i in idx]
        return rank(Matrix.from_rows(A.field, [[c[r] for c in cols] for r in range(a.dim)], len(idx)))

    out = {}
    for k in sorted(set(a.degrees)):
        dim = len(a.degree_indices(k)) - drank(k) - drank(k - 1)
        if dim:
            out[k] = dim
    return out


def dual_dga(F=QQ):
    basis = [("1", 0), ("x", 0), ("x2", 0), ("y", -1)]
    prods = {("1", n): {n: 1} for n, _ in basis}
    prods.update({(n, "1"): {n: 1} for n, _ in basis})
    prods[("x", "x")] = {"x2": 1}
    g = make_algebra(F, basis, prods, ["1"])
    return DgAlgebra(g, {3: {2: F(1)}})


def test_dual_numbers_cohomology():
    A = dual_dga()
    assert verify_dg(A).valid
    H = A.cohomology()
    assert H.dim == 2
    assert H.names == ("[1]", "[x]")
    assert H.mul(H.element("[x]"), H.element("[x]")) == {}
    assert A.retraction.check().valid


def test_cohomology_dims_match_rank_formula_on_corpus():
    for name in ["kronecker", "dual_numbers", "massey", "jminus_strict", "burniat", "a4"]:
        A = load_corpus(name)
        assert {k: v for k, v in A.cohomology_dims().items() if v} == independent_cohomology_dims(A)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_retraction_identities_random(seed):
    A = random_connective_dga(random.Random(seed))
    assert verify_dg(A).valid
    assert A.retraction.check().valid
    assert {k: v for k, v in A.cohomology_dims().items() if v} == independent_cohomology_dims(A)


def test_massey_cohomology_product_zero_but_named_class():
    A = load_corpus("massey")
    H = A.cohomology()
    assert "[av+uc]" in H.names
    ab = H.mul(H.element("[a]"), H.element("[b]"))
    assert ab == {}


def test_verify_dg_catches_leibniz_failure():
    A = dual_dga()
    broken = DgAlgebra(A.algebra, {3: {2: QQ(1)}, 1: {2: QQ(1)}})  # d x = x^2 breaks degrees and d^2
    assert not verify_dg(broken).valid


def test_predicates():
    p = predicates(load_corpus("kronecker"))
    assert p.connective and p.amplitude == 2
    p = predicates(load_corpus("burniat"))
    assert not p.connective and p.amplitude == 2
    p = predicates(load_corpus("jminus_strict"))
    assert p.cohomology_dims == {0: 1} and p.amplitude == 0
    zero = DgAlgebra(make_algebra(QQ, [], {}, []), {})
    assert predicates(zero).amplitude == UNDEFINED


def test_truncation_of_coconnective_algebra():
    A = load_corpus("burniat")
    T = truncate_connective(A)
    assert T.dim == 6
    assert all(d == 0 for d in T.algebra.degrees)
    K = load_corpus("kronecker")
    assert truncate_connective(K).dim == 4


def test_radical_ideals_strict_example():
    A = load_corpus("jminus_strict")
    pair = dg_radical_ideals(A)
    assert pair.J_minus.dim == 0 and pair.J_plus.dim == 2
    assert all(pair.checks.values())
    chain = jminus_power_filtration(A)
    assert chain[-1].dim == 0


def test_radical_ideals_over_finite_field():
    A = dual_dga(GF(2))
    pair = dg_radical_ideals(A)
    assert pair.J_minus.dim == 3 and pair.checks["quotient_quasi_isomorphism"]


def test_quotient_by_acyclic_ideal_is_quasi_isomorphism():
    A = dual_dga()
    # I = span{x^2, y} is a DG ideal with zero cohomology
    I = Subspace(QQ, 4, [[0, 0, 1, 0], [0, 0, 0, 1]])
    assert is_dg_ideal(A, I)
    Q = A.quotient(I)
    assert Q.dim == 2

    def chain_map(v):
        r = I.reduce(v)
        return [r[0], r[1]]

    assert is_quasi_isomorphism(A, Q, chain_map)
    assert not is_dg_ideal(A, Subspace(QQ, 4, [[0, 0, 0, 1]]))
