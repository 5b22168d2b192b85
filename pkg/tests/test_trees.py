from collections import Counter
from math import comb

import pytest

from ainfalg.errors import AlgebraError
from ainfalg.trees import LEAF, Node, corolla, count_psi, enumerate_psi, iter_psi, psi_table, tree_stats


def little_schroeder(n_max):
    """s_1 = s_2 = 1, (n+1) s_{n+1} = 3(2n-1) s_n - (n-2) s_{n-1}  (indexing by leaves)."""
    s = {1: 1, 2: 1}
    for n in range(2, n_max):
        s[n + 1] = (3 * (2 * n - 1) * s[n] - (n - 2) * s[n - 1]) // (n + 1)
    return s


def catalan(k):
    return comb(2 * k, k) // (k + 1)


def test_small_counts():
    assert [count_psi(n) for n in range(1, 9)] == [1, 1, 3, 11, 45, 197, 903, 4279]


def test_counts_match_schroeder_recurrence():
    s = little_schroeder(14)
    for n in range(1, 15):
        assert count_psi(n) == s[n]
    for n in range(1, 8):
        assert len(enumerate_psi(n)) == s[n]


def test_binary_trees_are_catalan():
    for n in range(1, 10):
        assert count_psi(n, max_arity=2) == catalan(n - 1)
    for n in range(1, 8):
        assert len(enumerate_psi(n, max_arity=2)) == catalan(n - 1)


def test_max_arity_counts_agree_with_enumeration():
    for cap in (2, 3, 4):
        for n in range(1, 8):
            assert count_psi(n, cap) == len(enumerate_psi(n, cap))


def test_enumeration_is_duplicate_free():
    trees = enumerate_psi(7)
    assert len(set(trees)) == len(trees)


def test_psi4_table():
    rows = psi_table(4)
    assert len(rows) == 11
    assert Counter((v, d) for _, v, d in rows) == {(1, 2): 1, (2, 1): 5, (3, 0): 5}
    assert rows[-1][0] == "m_4(-,-,-,-)"


def test_degree_formula_through_eight():
    for n in range(1, 9):
        for t in iter_psi(n):
            s = tree_stats(t)
            assert n == s.v + s.abs_degree + 1


def test_render_and_order():
    assert corolla(3).render() == "m_3(-,-,-)"
    assert Node([corolla(2), LEAF]).render() == "m_2(m_2(-,-),-)"
    first = next(iter_psi(3))
    assert first.arity == 2


def test_bad_arguments():
    with pytest.raises(AlgebraError):
        count_psi(0)
    with pytest.raises(AlgebraError):
        enumerate_psi(3, max_arity=1)
    with pytest.raises(ValueError):
        Node([LEAF])
