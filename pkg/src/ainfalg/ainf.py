"""Finite-dimensional A-infinity algebras.

Sign convention, used everywhere in the package: the Stasheff identities read

    sum over r + s + t = n of (-1)^(r + s t) m_{r+1+t}(1^r (x) m_s (x) 1^t) = 0,

with the Koszul rule (f (x) g)(x (x) y) = (-1)^(|g||x|) f(x) (x) g(y). A DG
algebra is the A-infinity algebra with m_1 = d and m_2 = product.

Internally some constructions move to the bar picture, where b_n acts on the
shifted space (degree |x| - 1) and every identity carries only Koszul signs:

    b_n(sx_1, ..., sx_n) = (-1)^(sum_i (n - i)|x_i|) s m_n(x_1, ..., x_n).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from .algebra import Diagnostic, GradedAlgebra, _names_for
from .dg import DgAlgebra, Retraction
from .errors import AlgebraError
from .linalg import Matrix, inverse
from .sparse import add_into, apply_table, clean_table, from_dense, scale, sparse_solve
from .trees import LEAF, Node, enumerate_psi

MAX_ARITY_CHECK = 24


@dataclass(frozen=True, eq=False)
class AInfAlgebra:
    """Basis-presented A-infinity algebra.

    ``ops`` maps an arity n to a multilinear table (tuple of basis indices ->
    sparse vector); omitted arities are zero. ``splitting`` optionally records
    a semisimple subalgebra S as dense vectors (one primitive idempotent each).
    """

    field: object
    names: tuple
    degrees: tuple
    ops: dict
    unit: dict
    vertices: tuple | None = None
    arity_cap: int | None = None
    splitting: tuple | None = None

    def __post_init__(self):
        if self.arity_cap is None:
            nz = [n for n, t in self.ops.items() if t]
            object.__setattr__(self, "arity_cap", max(nz + [2]))

    @classmethod
    def from_graded(cls, a: GradedAlgebra, higher: dict | None = None, **kw) -> "AInfAlgebra":
        ops = {2: dict(a.product)}
        for n, t in (higher or {}).items():
            if n == 2:
                raise ValueError("m_2 comes from the graded algebra")
            ops[n] = dict(t)
        return cls(a.field, a.names, a.degrees, ops, dict(a.unit), a.vertices, **kw)

    @classmethod
    def from_dg(cls, A: DgAlgebra) -> "AInfAlgebra":
        a = A.algebra
        ops = {2: dict(a.product)}
        d = {(k,): v for k, v in A.d.items() if v}
        if d:
            ops[1] = d
        return cls(a.field, a.names, a.degrees, ops, dict(a.unit), a.vertices)

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise AlgebraError(f"unknown basis element {name!r}") from None

    def element(self, name: str) -> dict:
        return {self.index(name): self.field.one}

    def table(self, n: int) -> dict:
        return self.ops.get(n, {})

    def m(self, n: int, vecs: list) -> dict:
        if len(vecs) != n:
            raise AlgebraError(f"m_{n} takes {n} arguments")
        return apply_table(self.table(n), list(vecs))

    def degree_of(self, vec: dict):
        degs = {self.degrees[k] for k in vec}
        if not degs:
            return None
        if len(degs) > 1:
            raise AlgebraError("element is not homogeneous")
        return degs.pop()

    @property
    def is_minimal(self) -> bool:
        return not self.table(1)

    def is_connective(self) -> bool:
        return all(g <= 0 for g in self.degrees)

    @property
    def n0(self) -> int:
        """Connectivity bound: degrees lie in [-n0, 0]."""
        if not self.is_connective():
            raise AlgebraError("connective input required")
        return -min(self.degrees) if self.degrees else 0

    def underlying(self) -> GradedAlgebra:
        """The graded algebra (Lambda, m_2); associative when m_1 = 0."""
        return GradedAlgebra(self.field, self.names, self.degrees, dict(self.table(2)), dict(self.unit), self.vertices)

    def with_ops(self, ops: dict, **kw) -> "AInfAlgebra":
        args = dict(field=self.field, names=self.names, degrees=self.degrees, ops=ops, unit=self.unit,
                    vertices=self.vertices, splitting=self.splitting)
        args.update(kw)
        return AInfAlgebra(**args)


def evaluate(t, a: "AInfAlgebra", args: list) -> dict:
    """Value of the tree-shaped operation ``t`` on ``args`` (sparse vectors)."""
    from .trees import evaluate_tree

    return evaluate_tree(t, a, args)


# --- verification -------------------------------------------------------------------


def _by_output(table: dict) -> dict:
    idx = {}
    for key, val in table.items():
        for k, c in val.items():
            idx.setdefault(k, []).append((key, c))
    return idx


def stasheff_defect(a: AInfAlgebra, n: int) -> dict:
    """The left side of the arity-n identity as a table (zero means it holds)."""
    one = a.field.one
    deg = a.degrees
    acc: dict = {}
    for s in range(1, n + 1):
        inner = a.table(s)
        u = n - s + 1
        outer = a.table(u)
        if not inner or not outer:
            continue
        inv = _by_output(inner)
        for r in range(u):
            t = u - 1 - r
            base = (r + s * t) % 2
            for okey, oval in outer.items():
                hits = inv.get(okey[r])
                if not hits:
                    continue
                odd = (base + s * sum(deg[i] for i in okey[:r])) % 2
                pre, post = okey[:r], okey[r + 1:]
                for ikey, c in hits:
                    coeff = -c if odd else c
                    add_into(acc.setdefault(pre + ikey + post, {}), oval, coeff)
    return {k: v for k, v in acc.items() if v}


def verify_ainf(a: AInfAlgebra, arity_check: int | None = None, limit: int = 20) -> Diagnostic:
    """Check degrees of the m_n, strict unitality and the Stasheff identities
    of total arity <= ``arity_check`` (default: 2 * arity_cap - 1, beyond
    which every term vanishes)."""
    if arity_check is None:
        arity_check = max(2 * a.arity_cap - 1, 3)
    if arity_check < 1 or arity_check > MAX_ARITY_CHECK:
        raise AlgebraError(f"arity_check must lie in [1, {MAX_ARITY_CHECK}]")
    diag = Diagnostic()
    names, deg = a.names, a.degrees

    def show(key):
        return "(" + ",".join(names[i] for i in key) + ")"

    for n, table in sorted(a.ops.items()):
        for key, val in table.items():
            if len(key) != n:
                diag.failures.append(f"m_{n} table has a key of length {len(key)}")
                continue
            want = sum(deg[i] for i in key) + 2 - n
            bad = [k for k, c in val.items() if c and deg[k] != want]
            if bad:
                diag.failures.append(f"degree: m_{n}{show(key)} has a component on {names[bad[0]]} of degree "
                                     f"{deg[bad[0]]}, expected {want}")
    if diag.failures:
        return diag
    diag.failures.extend(_unitality_failures(a))
    for n in range(1, arity_check + 1):
        bad = stasheff_defect(a, n)
        for key in sorted(bad)[:limit]:
            diag.failures.append(f"Stasheff identity of arity {n} fails on {show(key)}")
        if len(diag.failures) >= limit:
            break
    return diag


def _unitality_failures(a: AInfAlgebra) -> list[str]:
    one = a.field.one
    out = []
    u = a.unit
    if not u:
        return ["no unit"]
    for i in range(a.dim):
        e = {i: one}
        if a.m(2, [u, e]) != e or a.m(2, [e, u]) != e:
            out.append(f"unit: m_2(1,{a.names[i]}) or m_2({a.names[i]},1) differs from {a.names[i]}")
    for n, table in sorted(a.ops.items()):
        if n == 2:
            continue
        for pos in range(n):
            acc: dict = {}
            for key, val in table.items():
                c = u.get(key[pos])
                if c:
                    add_into(acc.setdefault(key[:pos] + key[pos + 1:], {}), val, c)
            bad = [k for k, v in acc.items() if v]
            if bad:
                args = [a.names[i] for i in bad[0]]
                args.insert(pos, "1")
                out.append(f"unit: m_{n}({','.join(args)}) != 0")
    return out


def arity_vanishing_bound(a: AInfAlgebra) -> int:
    """n_2 = n_0 + 3, after checking that no stored m_n with n > n_2 is nonzero."""
    n2 = a.n0 + 3
    for n, t in a.ops.items():
        if n > n2 and t:
            raise AlgebraError(f"m_{n} is nonzero although n exceeds n_0 + 3 = {n2}")
    return n2


# --- bar picture --------------------------------------------------------------------


def _bar_sign(key, deg) -> int:
    n = len(key)
    return sum((n - 1 - i) * deg[k] for i, k in enumerate(key)) % 2


def to_bar(table: dict, deg) -> dict:
    return {key: (scale(val, -1) if _bar_sign(key, deg) else dict(val)) for key, val in table.items()}


from_bar = to_bar  # the conversion sign is an involution


def _insert(outer: dict, r: int, inner: dict, bdeg, odd_inner: bool, coeff=1) -> dict:
    """Table of outer(1^r (x) inner (x) 1^t) in the bar picture."""
    acc: dict = {}
    inv = _by_output(inner)
    for okey, oval in outer.items():
        hits = inv.get(okey[r])
        if not hits:
            continue
        sgn = coeff
        if odd_inner and sum(bdeg[i] for i in okey[:r]) % 2:
            sgn = -sgn
        pre, post = okey[:r], okey[r + 1:]
        for ikey, c in hits:
            add_into(acc.setdefault(pre + ikey + post, {}), oval, c * sgn)
    return {k: v for k, v in acc.items() if v}


def _add_tables(acc: dict, table: dict, coeff=1) -> dict:
    for k, v in table.items():
        add_into(acc.setdefault(k, {}), v, coeff)
    return acc


def _compositions(n, allowed):
    """Compositions of n whose parts are 1 or in ``allowed``."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        if first == 1 or first in allowed:
            for rest in _compositions(n - first, allowed):
                yield (first,) + rest


def gauge_arity(b: dict, f: dict, bnew: dict, n: int, bdeg) -> dict:
    """Arity-n component of the structure b' with f : (b') -> (b), f_1 = id.

    ``b`` and ``f`` are bar-picture tables keyed by arity; ``bnew`` must hold
    b'_s for s < n. Uses
        b'_n = sum b_k(f_{i1} (x) ... (x) f_{ik}) - sum_{s<n} f_{r+1+t}(1^r (x) b'_s (x) 1^t).
    """
    acc: dict = {}
    fa = {k for k, t in f.items() if t and k > 1}
    for comp in _compositions(n, fa):
        k = len(comp)
        cur = b.get(k)
        if not cur:
            continue
        # insert f_{i_j} from the rightmost slot so that earlier slot positions stay put
        for j in range(k - 1, -1, -1):
            if comp[j] > 1:
                cur = _insert(cur, j, f[comp[j]], bdeg, odd_inner=False)
                if not cur:
                    break
        _add_tables(acc, cur)
    for s in range(1, n):
        inner = bnew.get(s)
        outer = f.get(n - s + 1)
        if not inner or not outer:
            continue
        for r in range(n - s + 1):
            _add_tables(acc, _insert(outer, r, inner, bdeg, odd_inner=True), -1)
    return {k: v for k, v in acc.items() if v}


def gauge_transform(a: AInfAlgebra, f_bar: dict, arity_cap: int | None = None) -> AInfAlgebra:
    """The structure b' for which f (bar picture, f_1 = id) is an A-infinity
    isomorphism from b' to ``a``. Arities above ``arity_cap`` are dropped."""
    cap = arity_cap or max([a.arity_cap] + [k + 1 for k in f_bar])
    deg = a.degrees
    bdeg = tuple(g - 1 for g in deg)
    b = {n: to_bar(t, deg) for n, t in a.ops.items() if t}
    bnew: dict = {}
    for n in range(1, cap + 1):
        bnew[n] = gauge_arity(b, f_bar, bnew, n, bdeg)
    ops = {n: from_bar(t, deg) for n, t in bnew.items() if t}
    return a.with_ops(ops, arity_cap=max(cap, 2))


# --- unitality normalization --------------------------------------------------------


def _is_standard(v) -> int | None:
    nz = [i for i, x in enumerate(v) if x]
    if len(nz) == 1 and v[nz[0]] == 1:
        return nz[0]
    return None


def change_basis(a: AInfAlgebra, new_basis: list[list], names=None) -> AInfAlgebra:
    """Rewrite every m_n in a new homogeneous basis (rows of ``new_basis``)."""
    f = a.field
    n = a.dim
    if len(new_basis) != n:
        raise AlgebraError("need a full basis")
    m = Matrix(f, n, n, tuple(tuple(new_basis[j][i] for j in range(n)) for i in range(n)))
    inv = inverse(m)
    to_new = {}
    for i in range(n):
        col = inv.column(i)
        to_new[i] = from_dense(col)
    spread = {}  # old index -> [(new index, coefficient of old in new vector)]
    for j, v in enumerate(new_basis):
        for i, x in enumerate(v):
            if x:
                spread.setdefault(i, []).append((j, x))

    def convert(val):
        out = {}
        for i, c in val.items():
            add_into(out, to_new[i], c)
        return out

    ops = {}
    for k, table in a.ops.items():
        acc: dict = {}
        for key, val in table.items():
            if any(i not in spread for i in key):
                continue
            w = convert(val)
            for combo in itertools.product(*(spread[i] for i in key)):
                c = f.one
                for _, x in combo:
                    c = c * x
                add_into(acc.setdefault(tuple(j for j, _ in combo), {}), w, c)
        ops[k] = {key: val for key, val in acc.items() if val}
    if names is None:
        names, degrees, verts = _names_for(a.underlying(), new_basis)
    else:
        degrees = [next(a.degrees[i] for i, x in enumerate(v) if x) for v in new_basis]
        verts = None
    unit = convert(a.unit)
    return AInfAlgebra(f, tuple(names), tuple(degrees), ops, unit, verts, a.arity_cap)


def normalize_unitality(a: AInfAlgebra, s: list | None = None, arity_cap: int | None = None) -> AInfAlgebra:
    return normalize_unitality_with_gauge(a, s, arity_cap)[0]


def normalize_unitality_with_gauge(a: AInfAlgebra, s: list | None = None, arity_cap: int | None = None):
    """Gauge ``a`` so that every m_n (n > 2) vanishes when an argument lies in S.

    Returns (new algebra, f) with f the bar-picture components f_k (k >= 2) of
    an A-infinity isomorphism from the new structure to ``a``; f_1 = id, so
    m_2 is unchanged. The f_k are found arity by arity as the least solution
    (free variables zero) of a sparse linear system.
    """
    from .radical import radical_data

    if not a.is_minimal:
        raise AlgebraError("normalize_unitality needs a minimal structure (m_1 = 0)")
    f = a.field
    if s is None:
        rd = radical_data(a.underlying())
        if rd.S.dim != len(rd.idempotents) or rd.class_count != len(rd.idempotents):
            raise AlgebraError("normalize_unitality needs a basic algebra (all simple modules one-dimensional)")
        s = rd.idempotents
    else:
        rd = radical_data(a.underlying())
        if rd.S.dim != len(rd.idempotents):
            raise AlgebraError("normalize_unitality needs a basic algebra (all simple modules one-dimensional)")
    s = [list(v) for v in s]
    idx = [_is_standard(v) for v in s]
    if any(i is None for i in idx):
        raise AlgebraError("the splitting must consist of basis elements; change basis first")
    if arity_cap is None:
        arity_cap = a.n0 + 2 if a.is_connective() else a.arity_cap
    S_idx = set(idx)
    deg = a.degrees
    bdeg = tuple(g - 1 for g in deg)
    by_bdeg = {}
    for k, g in enumerate(bdeg):
        by_bdeg.setdefault(g, []).append(k)
    b = {n: to_bar(t, deg) for n, t in a.ops.items() if t}
    fs: dict = {}
    bnew: dict = {1: {}, 2: gauge_arity(b, fs, {1: {}}, 2, bdeg)}
    one = f.one
    b2 = bnew[2]
    for n in range(3, arity_cap + 1):
        base = gauge_arity(b, fs, bnew, n, bdeg)
        # columns: effect on b'_n of the unknown f_{n-1}(tau) = y_k
        equations: dict = {}  # (key, out) -> row dict
        for tau in itertools.product(range(a.dim), repeat=n - 1):
            for k in by_bdeg.get(sum(bdeg[i] for i in tau), []):
                var = (tau, k)
                unit_f = {tau: {k: one}}
                col = {}
                _add_tables(col, _insert(b2, 0, unit_f, bdeg, odd_inner=False))
                _add_tables(col, _insert(b2, 1, unit_f, bdeg, odd_inner=False))
                for r in range(n - 1):
                    _add_tables(col, _insert(unit_f, r, b2, bdeg, odd_inner=True), -1)
                for key, val in col.items():
                    if not S_idx.intersection(key):
                        continue
                    for out, c in val.items():
                        if c:
                            row = equations.setdefault((key, out), {})
                            row[var] = row.get(var, f.zero) + c
        targets = {}
        for key, val in base.items():
            if S_idx.intersection(key):
                for out, c in val.items():
                    targets[(key, out)] = -c
        eqs = [(equations.get(e, {}), targets.get(e, f.zero)) for e in sorted(set(equations) | set(targets))]
        sol = sparse_solve(eqs, f.zero, one)
        if sol is None:
            raise AlgebraError(f"no gauge of arity {n - 1} removes the S-components of m_{n}")
        fn = {}
        for (tau, k), c in sol.items():
            fn.setdefault(tau, {})[k] = c
        if fn:
            fs[n - 1] = fn
        bnew[n] = gauge_arity(b, fs, bnew, n, bdeg)
    ops = {n: from_bar(t, deg) for n, t in bnew.items() if t}
    out = a.with_ops(ops, arity_cap=max(arity_cap, 2), splitting=tuple(tuple(v) for v in s))
    return out, fs


# --- homotopy transfer --------------------------------------------------------------


def _check_retraction(A: DgAlgebra, r: Retraction):
    if r.dga is not A and (r.dga.algebra is not A.algebra or r.dga.d != A.d):
        raise AlgebraError("retraction belongs to a different DG algebra")
    diag = r.check()
    if not diag.valid:
        raise AlgebraError("invalid retraction: " + "; ".join(diag.failures))


def homotopy_transfer(A: DgAlgebra, r: Retraction | None = None, arity_cap: int | None = None) -> AInfAlgebra:
    """Minimal A-infinity structure on H^*(A) by the tree sum.

    In the bar picture all decorated maps (i on leaves, h on internal edges,
    p at the root, b_2 at vertices) have even total degree per subtree, so
    b'_n = sum over binary planar trees T of p b_2(T_left (x) T_right) with no
    extra signs; m'_n is then read off by the conversion rule.
    """
    if r is None:
        r = A.retraction
    _check_retraction(A, r)
    a = A.algebra
    H = r.cohomology
    if arity_cap is None:
        arity_cap = (-min(a.degrees, default=0)) + 3 if a.is_connective() else 4
    if arity_cap < 2:
        raise AlgebraError("arity_cap must be at least 2")
    b2 = to_bar(a.product, a.degrees)
    one = a.field.one
    incl = {k: r.incl({k: one}) for k in range(H.dim)}
    memo: dict = {}

    def inner(t, key):
        """Value of a non-root subtree: i on a leaf, h(b_2(left, right)) otherwise."""
        if isinstance(t, Node):
            mk = (t, key)
            if mk not in memo:
                memo[mk] = r.homotopy(_root(t, key))
            return memo[mk]
        return incl[key[0]]

    def _root(t, key):
        left, right = t.children
        lv = inner(left, key[:left.leaves])
        if not lv:
            return {}
        rv = inner(right, key[left.leaves:])
        if not rv:
            return {}
        return apply_table(b2, [lv, rv])

    ops: dict = {}
    for n in range(2, arity_cap + 1):
        trees = enumerate_psi(n, 2)
        table = {}
        for key in itertools.product(range(H.dim), repeat=n):
            acc: dict = {}
            for t in trees:
                add_into(acc, _root(t, key))
            pv = r.proj(acc) if acc else {}
            if pv:
                table[key] = pv
        if table:
            ops[n] = table
    m = {n: from_bar(t, H.degrees) for n, t in ops.items()}
    return AInfAlgebra(H.field, H.names, H.degrees, m, dict(H.unit), H.vertices, arity_cap=arity_cap)


def minimal_model(A: DgAlgebra, arity_cap: int | None = None) -> tuple[AInfAlgebra, Retraction]:
    """Transfer along the echelon retraction; returns the structure and the retraction used."""
    r = A.retraction
    return homotopy_transfer(A, r, arity_cap), r
