"""The A-infinity radical filtration F^k = sum over n >= k of W_n.

W_n is the span of all tree-shaped operations with n leaves applied to
radical elements. It is computed by the root decomposition

    W_1 = J,   W_n = sum over r >= 2 and n_1 + ... + n_r = n of m_r(W_{n_1}, ..., W_{n_r}),

which never enumerates trees. Every basis vector of W_n is stored together
with a tree and radical basis arguments that produce it exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from .ainf import AInfAlgebra
from .algebra import format_vector
from .errors import AlgebraError
from .linalg import Subspace
from .radical import degree_zero_radical, jacobson_radical, loewy_length, radical_data
from .sparse import from_dense
from .trees import LEAF, Node, PlanarTree, evaluate_tree, iter_psi


@dataclass
class Generator:
    vector: list  # dense; equals evaluate_tree(tree, a, args) exactly
    tree: PlanarTree
    args: tuple  # indices into the radical basis


@dataclass
class RadicalFiltration:
    algebra: AInfAlgebra
    J: Subspace
    J_basis: list
    layers: list  # F^0 .. F^{k_max} as Subspaces
    exact: list  # per layer: True when proven equal to the defining sum
    word_spaces: dict  # n -> Subspace
    generators: dict  # n -> list[Generator]
    horizon: int  # largest n for which W_n was computed
    vanishing_proven: bool  # W_n = 0 for all n > horizon is certified
    bounds: dict | None = None

    @property
    def k_max(self) -> int:
        return len(self.layers) - 1

    def dims(self) -> list[int]:
        return [L.dim for L in self.layers]

    def level_of(self, v) -> int:
        """Largest k <= k_max with v in F^k."""
        lvl = 0
        for k, L in enumerate(self.layers):
            if L.contains(v):
                lvl = k
        return lvl


@dataclass
class Verdict:
    ok: bool
    witness: str | None = None
    detail: dict = dc_field(default_factory=dict)

    def __bool__(self):
        return self.ok


def radical_of(a: AInfAlgebra) -> Subspace:
    """J of (Lambda, m_2): rad(Lambda^0) + Lambda^{<0} when connective, else the ungraded radical."""
    u = a.underlying()
    if a.is_connective():
        return degree_zero_radical(u).extend([u.std(i) for i in range(u.dim) if u.degrees[i] < 0])
    return jacobson_radical(u)


def homogeneous_basis(a: AInfAlgebra, sp: Subspace) -> list[list]:
    """Basis of a graded subspace made of homogeneous vectors, preferring basis elements."""
    f = a.field
    comps = []
    for v in sp.basis():
        for g in sorted({a.degrees[i] for i, x in enumerate(v) if x}):
            comps.append([x if a.degrees[i] == g else f.zero for i, x in enumerate(v)])
    std = [[f.one if j == i else f.zero for j in range(a.dim)] for i in range(a.dim)]
    out, span = [], Subspace(f, a.dim)
    for v in [s for s in std if sp.contains(s)] + comps:
        if not sp.contains(v):
            raise AlgebraError("subspace is not graded")
        if not span.contains(v):
            out.append(v)
            span = span.extend([v])
    return out


def _max_arity(a: AInfAlgebra) -> int:
    return max([n for n, t in a.ops.items() if t and n >= 2] + [2])


def _tree_degree(t) -> int:
    if not isinstance(t, Node):
        return 0
    return 2 - t.arity + sum(_tree_degree(c) for c in t.children)


class _WordSpaces:
    """Incremental computation of W_1, W_2, ... with provenance."""

    def __init__(self, a: AInfAlgebra, J: Subspace):
        if not a.is_minimal:
            raise AlgebraError("the filtration is defined for minimal structures (m_1 = 0)")
        self.a = a
        self.J = J
        self.J_basis = homogeneous_basis(a, J)
        self.R = _max_arity(a)
        self.arities = sorted(n for n, t in a.ops.items() if t and n >= 2)
        self.spaces = {}
        self.gens = {}
        f = a.field
        one = f.one
        gens = [Generator(v, LEAF, (k,)) for k, v in enumerate(self.J_basis)]
        self.spaces[1] = Subspace(f, a.dim, self.J_basis)
        self.gens[1] = gens
        self.last_nonzero = 1 if self.J_basis else 0
        self.n = 1

    def _deg(self, vec):
        return self.a.degree_of(from_dense(vec))

    def step(self):
        a = self.a
        f = a.field
        n = self.n + 1
        space = Subspace(f, a.dim)
        gens = []
        for r in self.arities:
            if r > n:
                break
            for comp in _compositions(n, r):
                if any(not self.gens.get(k) for k in comp):
                    continue
                for choice in itertools.product(*(self.gens[k] for k in comp)):
                    val = a.m(r, [from_dense(g.vector) for g in choice])
                    if not val:
                        continue
                    # Koszul sign relating m_r(psi_1(..), ..., psi_r(..)) to the composite tree
                    sign, running = 1, 0
                    for g in choice:
                        if (_tree_degree(g.tree) * running) % 2:
                            sign = -sign
                        running += sum(self.a.degree_of(from_dense(self.J_basis[i])) for i in g.args)
                    vec = a.underlying().dense(val)
                    if sign < 0:
                        vec = [-x for x in vec]
                    if not space.contains(vec):
                        space = space.extend([vec])
                        tree = Node([g.tree for g in choice])
                        gens.append(Generator(vec, tree, sum((g.args for g in choice), ())))
        self.spaces[n] = space
        self.gens[n] = gens
        if gens:
            self.last_nonzero = n
        self.n = n

    def vanishing_proven(self) -> bool:
        """W_m = 0 for all m > K follows once W vanishes on (K, R*K]."""
        K = self.last_nonzero
        return self.n >= max(self.R * K, K + 1)

    def run_until(self, n: int):
        while self.n < n:
            self.step()


def _compositions(n, r):
    if r == 1:
        yield (n,)
        return
    for first in range(1, n - r + 2):
        for rest in _compositions(n - first, r - 1):
            yield (first,) + rest


def compute_filtration(a: AInfAlgebra, k_max: int, horizon: int | None = None) -> RadicalFiltration:
    """Layers F^0 .. F^{k_max}.

    W_n is computed for n up to ``horizon`` (default R * k_max, R the largest
    nonzero arity), stopping early once vanishing of every deeper W_n is
    certified. A layer is marked exact when that certificate exists or when its
    computed lower bound already equals the previous exact layer.
    """
    if k_max < 0:
        raise AlgebraError("k_max must be non-negative")
    J = radical_of(a)
    ws = _WordSpaces(a, J)
    if horizon is None:
        horizon = max(ws.R * max(k_max, 1), k_max + 1)
    while ws.n < horizon and not ws.vanishing_proven():
        ws.step()
    proven = ws.vanishing_proven()
    f = a.field
    full = Subspace.full(f, a.dim)
    layers, exact = [full], [True]
    for k in range(1, k_max + 1):
        sp = Subspace(f, a.dim)
        for n in range(k, ws.n + 1):
            sp = sp + ws.spaces[n]
        layers.append(sp)
        exact.append(proven or (exact[-1] and sp == layers[-2]))
    return RadicalFiltration(a, J, ws.J_basis, layers, exact, dict(ws.spaces), dict(ws.gens), ws.n, proven)


def brute_force_word_space(a: AInfAlgebra, n: int, J: Subspace | None = None) -> Subspace:
    """W_n straight from the definition: every tree, every radical basis tuple."""
    if J is None:
        J = radical_of(a)
    basis = [from_dense(v) for v in homogeneous_basis(a, J)]
    u = a.underlying()
    sp = Subspace(a.field, a.dim)
    trees = [t for t in iter_psi(n) if all(k in a.ops and a.ops[k] for k in _arities(t))]
    tags = _path_tags(a, basis)
    for args in _tuples(basis, n, tags):
        for t in trees:
            val = evaluate_tree(t, a, list(args))
            if val:
                sp = sp.extend([u.dense(val)])
    return sp


def _path_tags(a: AInfAlgebra, basis: list[dict]):
    """(source, target) per radical basis vector when every m_n respects the
    vertex tags of a quiver-style presentation; otherwise None."""
    if a.vertices is None:
        return None
    V = a.vertices
    for table in a.ops.values():
        for key, val in table.items():
            if not val:
                continue
            if any(V[x][1] != V[y][0] for x, y in zip(key, key[1:])):
                return None
            if any(V[z] != (V[key[0]][0], V[key[-1]][1]) for z in val):
                return None
    tags = []
    for v in basis:
        ts = {V[i] for i in v}
        if len(ts) != 1:
            return None
        tags.append(ts.pop())
    return tags


def _tuples(basis, n, tags):
    # with tags, a tuple with a non-composable neighbouring pair evaluates to zero under every tree
    if tags is None:
        yield from itertools.product(basis, repeat=n)
        return

    def grow(prefix, last):
        if len(prefix) == n:
            yield [basis[i] for i in prefix]
            return
        for i in range(len(basis)):
            if last is None or tags[last][1] == tags[i][0]:
                yield from grow(prefix + [i], i)

    yield from grow([], None)


def _arities(t):
    if not isinstance(t, Node):
        return set()
    out = {t.arity}
    for c in t.children:
        out |= _arities(c)
    return out


def check_radical_preserved(a: AInfAlgebra) -> Verdict:
    """Whether m_n(J, ..., J) lies in J for every stored n (exhaustive on a radical basis)."""
    J = radical_of(a)
    basis = homogeneous_basis(a, J)
    u = a.underlying()
    for n in sorted(k for k, t in a.ops.items() if t and k >= 2):
        for combo in itertools.product(range(len(basis)), repeat=n):
            val = a.m(n, [from_dense(basis[i]) for i in combo])
            if val and not J.contains(u.dense(val)):
                args = ",".join(format_vector(u, basis[i]) for i in combo)
                return Verdict(False, f"m_{n}({args}) = {format_vector(u, val)} is not in J",
                               {"arity": n, "args": [format_vector(u, basis[i]) for i in combo],
                                "value": format_vector(u, val)})
    return Verdict(True)


def check_f1_equals_j(f: RadicalFiltration) -> Verdict:
    if f.k_max < 1:
        raise AlgebraError("filtration must be computed with k_max >= 1")
    F1 = f.layers[1]
    ok = F1.contains_space(f.J) and f.J.contains_space(F1)
    return Verdict(ok, None if ok else f"dim F^1 = {F1.dim}, dim J = {f.J.dim}",
                   {"dim_F1": F1.dim, "dim_J": f.J.dim, "exact": f.exact[1]})


def vanishing_bound(a: AInfAlgebra) -> dict:
    """n_0, Loewy length l, n_1 (least integer > n_0(l-1) + (l-2)), n_2 = n_0 + 3
    and N = n_1 + n_1 (n_2 - 2) + 1; F^k = 0 for every k > N."""
    if not a.is_connective():
        raise AlgebraError("vanishing_bound needs connective input")
    n0 = a.n0
    J = radical_of(a)
    l = loewy_length(a.underlying(), J)
    n1 = max(n0 * (l - 1) + (l - 2) + 1, 0)
    n2 = n0 + 3
    N = n1 + n1 * (n2 - 2) + 1
    return {"n0": n0, "loewy": l, "n1": n1, "n2": n2, "N": N}


def is_normalized(a: AInfAlgebra, idempotents=None) -> tuple[bool, str | None]:
    """Whether every m_n (n > 2) vanishes when an argument is one of the primitive idempotents."""
    if idempotents is None:
        idempotents = radical_data(a.underlying()).idempotents
    for n, table in sorted(a.ops.items()):
        if n <= 2 or not table:
            continue
        for e in idempotents:
            ev = from_dense(e)
            for pos in range(n):
                acc = {}
                for key, val in table.items():
                    c = ev.get(key[pos])
                    if c:
                        rest = key[:pos] + key[pos + 1:]
                        d = acc.setdefault(rest, {})
                        for k, x in val.items():
                            d[k] = d.get(k, 0) + c * x
                for rest, d in acc.items():
                    if any(d.values()):
                        names = [a.names[i] for i in rest]
                        names.insert(pos, format_vector(a.underlying(), e))
                        return False, f"m_{n}({','.join(names)}) != 0"
    return True, None


def adapted_basis(f: RadicalFiltration) -> list[tuple[list, int]]:
    """Basis of Lambda with levels: vectors of level k span F^k modulo F^{k+1}."""
    a = f.algebra
    out = []
    span = Subspace(a.field, a.dim)
    for k in range(f.k_max, -1, -1):
        for v in f.layers[k].basis():
            if not span.contains(v):
                out.append((v, k))
                span = span.extend([v])
    return out


def check_compatibility(a: AInfAlgebra, f: RadicalFiltration, v_max: int) -> Verdict:
    """m_v(F^{i_1}, ..., F^{i_v}) inside F^{i_1 + ... + i_v} for v <= v_max and
    index sums <= k_max. By multilinearity it suffices to test tuples from a
    filtration-adapted basis against the layer of the (capped) level sum."""
    ok, why = is_normalized(a)
    if not ok:
        raise AlgebraError(f"input is not normalized ({why}); run normalize_unitality first")
    basis = adapted_basis(f)
    u = a.underlying()
    checked = 0
    for v in range(1, v_max + 1):
        table = a.table(v)
        if not table:
            continue
        for combo in itertools.product(range(len(basis)), repeat=v):
            target = min(sum(basis[i][1] for i in combo), f.k_max)
            val = a.m(v, [from_dense(basis[i][0]) for i in combo])
            checked += 1
            if val and not f.layers[target].contains(u.dense(val)):
                levels = [basis[i][1] for i in combo]
                args = ",".join(format_vector(u, basis[i][0]) for i in combo)
                return Verdict(False, f"m_{v}({args}) with levels {levels} = {format_vector(u, val)} "
                                      f"is not in F^{target}",
                               {"arity": v, "levels": levels, "value": format_vector(u, val), "target": target})
    return Verdict(True, None, {"tuples_checked": checked})


@dataclass
class Finite:
    k: int  # smallest k with F^k = 0

    def __str__(self):
        return f"Finite({self.k})"


@dataclass
class PersistsThrough:
    horizon: int
    n: int  # the witness lies in W_n with n >= horizon
    vector: list
    tree: PlanarTree
    args: tuple

    def __str__(self):
        return f"PersistsThrough({self.horizon})"


def detect_infinite(a: AInfAlgebra, horizon: int):
    """Finite(k) with a vanishing certificate, or a nonzero element of F^horizon with its tree."""
    if horizon < 1:
        raise AlgebraError("horizon must be at least 1")
    ws = _WordSpaces(a, radical_of(a))
    while True:
        if ws.n >= horizon and ws.gens.get(ws.n):
            g = ws.gens[ws.n][0]
            return PersistsThrough(horizon, ws.n, g.vector, g.tree, g.args)
        if ws.vanishing_proven():
            return Finite(ws.last_nonzero + 1)
        ws.step()
