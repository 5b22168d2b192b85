"""Planar rooted trees as compositions of higher multiplications.

A tree with n leaves is an n-ary operation built from the m_r (r >= 2);
the bare leaf is the identity. Enumeration order is fixed: root arity
ascending, then children lexicographically in that same order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Union

from .errors import AlgebraError


class Leaf:
    __slots__ = ()

    leaves = 1
    arity = 0

    def __repr__(self):
        return "Leaf()"

    def __eq__(self, other):
        return isinstance(other, Leaf)

    def __hash__(self):
        return hash("leaf")

    def render(self) -> str:
        return "-"


LEAF = Leaf()


class Node:
    __slots__ = ("children", "leaves", "_hash")

    def __init__(self, children):
        children = tuple(children)
        if len(children) < 2:
            raise ValueError("internal vertices need arity >= 2")
        self.children = children
        self.leaves = sum(c.leaves for c in children)
        self._hash = hash(children)

    @property
    def arity(self) -> int:
        return len(self.children)

    def __eq__(self, other):
        return isinstance(other, Node) and self.children == other.children

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Node({list(self.children)!r})"

    def render(self) -> str:
        return f"m_{self.arity}(" + ",".join(c.render() for c in self.children) + ")"


PlanarTree = Union[Leaf, Node]


def corolla(r: int) -> Node:
    return Node([LEAF] * r)


@dataclass(frozen=True)
class TreeStats:
    v: int
    abs_degree: int
    leaves: int


def tree_stats(t: PlanarTree) -> TreeStats:
    v, total = 0, 0  # total = sum over internal vertices of (2 - arity)
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Node):
            v += 1
            total += 2 - s.arity
            stack.extend(s.children)
    excess = -total  # sum of (arity - 2), never negative
    if abs(total) != excess:
        raise AssertionError("arity below 2 in a planar tree")
    if t.leaves != v + excess + 1:
        raise AssertionError(f"n = v + |psi| + 1 fails for {t.render()}")
    return TreeStats(v, abs(total), t.leaves)


def _compositions(n: int, r: int):
    """Ordered r-tuples of positive integers summing to n."""
    if r == 1:
        yield (n,)
        return
    for first in range(1, n - r + 2):
        for rest in _compositions(n - first, r - 1):
            yield (first,) + rest


def iter_psi(n: int, max_arity: int | None = None) -> Iterator[PlanarTree]:
    """Stream the trees with n leaves and internal arities in [2, max_arity]."""
    if n < 1:
        raise AlgebraError("n must be at least 1")
    if max_arity is None:
        max_arity = max(n, 2)
    if max_arity < 2:
        raise AlgebraError("max_arity must be at least 2")
    yield from _iter(n, max_arity)


def _iter(n, max_arity):
    if n == 1:
        yield LEAF
        return
    for r in range(2, min(n, max_arity) + 1):
        for comp in _compositions(n, r):
            yield from _product(comp, max_arity, ())


def _product(comp, max_arity, prefix):
    if not comp:
        yield Node(prefix)
        return
    for t in _iter(comp[0], max_arity):
        yield from _product(comp[1:], max_arity, prefix + (t,))


def enumerate_psi(n: int, max_arity: int | None = None) -> list[PlanarTree]:
    return list(iter_psi(n, max_arity))


@lru_cache(maxsize=None)
def count_psi(n: int, max_arity: int | None = None) -> int:
    """Number of trees, by the root decomposition (no enumeration)."""
    if n < 1:
        raise AlgebraError("n must be at least 1")
    if max_arity is None:
        max_arity = max(n, 2)
    return _count(n, max_arity)


@lru_cache(maxsize=None)
def _count(n, max_arity):
    if n == 1:
        return 1
    # prev[m]: ordered (r-1)-tuples of proper subtrees with m leaves in total
    total = 0
    prev = {0: 1}
    for r in range(1, min(n, max_arity) + 1):
        cur = {}
        for m, c in prev.items():
            for k in range(1, min(n - m, n - 1) + 1):
                cur[m + k] = cur.get(m + k, 0) + c * _count(k, max_arity)
        prev = cur
        if r >= 2:
            total += cur.get(n, 0)
    return total


def evaluate_tree(t: PlanarTree, alg, args: list) -> dict:
    """Evaluate ``t`` in an A-infinity algebra (anything with ``m(r, vectors)``
    and ``degree_of(vector)``) on sparse vectors."""
    return evaluate_with(t, alg.m, args, alg.degree_of)


def evaluate_with(t: PlanarTree, ops, args: list, degree_of) -> dict:
    """Evaluate the operation ``t`` on sparse vectors.

    ``ops(r, vectors)`` applies m_r; ``degree_of(vec)`` returns the degree of a
    homogeneous vector (None for zero). The sign when a subtree f_j of degree
    |f_j| = sum(2 - arity) is applied after inputs of total degree D is
    (-1)^(|f_j| * D), which matches the identities
    sum (-1)^(r + s t) m_{r+1+t}(1^r (x) m_s (x) 1^t) = 0.
    """
    if t.leaves != len(args):
        raise AlgebraError(f"tree has {t.leaves} leaves but {len(args)} arguments were given")
    value, _ = _eval(t, ops, list(args), degree_of)
    return value


def _tree_degree(t) -> int:
    if isinstance(t, Leaf):
        return 0
    return 2 - t.arity + sum(_tree_degree(c) for c in t.children)


def _eval(t, ops, args, degree_of):
    if isinstance(t, Leaf):
        return args[0], args[0:1]
    outs = []
    pos = 0
    sign = 1
    running = 0  # total degree of inputs to the left of the current block
    for c in t.children:
        k = c.leaves
        block = args[pos:pos + k]
        val, _ = _eval(c, ops, block, degree_of)
        if isinstance(c, Node) and (_tree_degree(c) * running) % 2:
            sign = -sign
        for x in block:
            d = degree_of(x)
            if d is None:
                return {}, block
            running += d
        outs.append(val)
        pos += k
        if not val:
            return {}, args
    out = ops(t.arity, outs)
    if sign < 0:
        out = {i: -c for i, c in out.items()}
    return out, args


def psi_table(n: int) -> list[tuple[str, int, int]]:
    """Rows (rendered operation, v, |psi|) in enumeration order."""
    rows = []
    for t in iter_psi(n):
        s = tree_stats(t)
        rows.append((t.render(), s.v, s.abs_degree))
    return rows
