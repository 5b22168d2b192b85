"""Finite-dimensional DG-algebras: cohomology, truncation, predicates, J_- / J_+."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .algebra import Diagnostic, GradedAlgebra, _names_for, format_vector
from .errors import AlgebraError
from .linalg import Matrix, Subspace, inverse, kernel_from_rref, rank, rref_rows
from .radical import powers, radical_data
from .sparse import add_into, apply_table, from_dense, scale

UNDEFINED = "undefined"


@dataclass(frozen=True, eq=False)
class DgAlgebra:
    algebra: GradedAlgebra
    d: dict  # basis index -> sparse vector; missing means d = 0

    @property
    def field(self):
        return self.algebra.field

    @property
    def dim(self):
        return self.algebra.dim

    def diff(self, vec: dict) -> dict:
        return apply_table({(i,): v for i, v in self.d.items()}, [vec])

    def diff_dense(self, v: list) -> list:
        return self.algebra.dense(self.diff(from_dense(v)))

    def is_formal_presentation(self) -> bool:
        return not any(self.d.values())

    def degrees_range(self):
        a = self.algebra
        return (a.min_degree, a.max_degree) if a.dim else (0, 0)

    @cached_property
    def retraction(self) -> "Retraction":
        return _echelon_retraction(self)

    def cohomology(self) -> GradedAlgebra:
        return self.retraction.cohomology

    def cohomology_dims(self) -> dict:
        h = self.cohomology()
        out = {}
        for g in h.degrees:
            out[g] = out.get(g, 0) + 1
        return out

    def restrict(self, vectors: list[list], unit=None) -> "DgAlgebra":
        """Sub-DG-algebra on the span of ``vectors`` (closed under product and d)."""
        sub = self.algebra.restrict(vectors, unit=unit)
        sp = Subspace(self.field, self.dim, vectors)
        from .algebra import _coordinate_solver
        coords = _coordinate_solver(self.field, vectors, self.dim)
        d = {}
        for i, v in enumerate(vectors):
            w = self.diff_dense(v)
            if any(w):
                if not sp.contains(w):
                    raise AlgebraError("span is not closed under d")
                d[i] = from_dense(coords(w))
        return DgAlgebra(sub, d)

    def quotient(self, ideal: Subspace) -> "DgAlgebra":
        """A / I for a DG-ideal I, on the standard basis vectors complementing I."""
        a = self.algebra
        f = self.field
        cidx = [i for i in range(a.dim) if i not in set(ideal.pivots)]
        pos = {k: t for t, k in enumerate(cidx)}

        def proj(vec: dict) -> dict:
            r = ideal.reduce(a.dense(vec))
            return {pos[k]: r[k] for k in cidx if r[k]}

        product = {}
        for s, i in enumerate(cidx):
            for t, j in enumerate(cidx):
                w = a.product.get((i, j))
                if w:
                    pw = proj(w)
                    if pw:
                        product[(s, t)] = pw
        d = {}
        for s, i in enumerate(cidx):
            w = self.d.get(i)
            if w:
                pw = proj(w)
                if pw:
                    d[s] = pw
        verts = tuple(a.vertices[i] for i in cidx) if a.vertices else None
        q = GradedAlgebra(f, tuple(a.names[i] for i in cidx), tuple(a.degrees[i] for i in cidx), product,
                          proj(a.unit), verts)
        return DgAlgebra(q, d)


def verify_dg(A: DgAlgebra, limit: int = 20) -> Diagnostic:
    a = A.algebra
    diag = Diagnostic()
    one = A.field.one
    for i, v in A.d.items():
        for k in v:
            if a.degrees[k] != a.degrees[i] + 1:
                diag.failures.append(f"degree: d({a.names[i]}) has a component on {a.names[k]} "
                                     f"of degree {a.degrees[k]}, expected {a.degrees[i] + 1}")
                break
    for i in range(a.dim):
        dd = A.diff(A.diff({i: one}))
        if dd:
            diag.failures.append(f"d^2: d(d({a.names[i]})) != 0")
    if A.diff(a.unit):
        diag.failures.append("unit: d(1) != 0")
    for i in range(a.dim):
        x = {i: one}
        dx = A.diff(x)
        sign = one if a.degrees[i] % 2 == 0 else -one
        for j in range(a.dim):
            y = {j: one}
            lhs = A.diff(a.mul(x, y))
            rhs = add_into(a.mul(dx, y), a.mul(x, A.diff(y)), sign)
            if lhs != rhs:
                diag.failures.append(f"Leibniz: d({a.names[i]}*{a.names[j]}) != "
                                     f"d({a.names[i]})*{a.names[j]} + (-1)^{a.degrees[i]} {a.names[i]}*d({a.names[j]})")
                if len(diag.failures) >= limit:
                    return diag
    return diag


# --- retraction / cohomology -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Retraction:
    """Deformation retract data (p, i, h) between A and its cohomology H.

    Maps are sparse: ``i`` on H basis indices, ``p`` and ``h`` on A basis
    indices. The identities are i p - 1 = d h + h d, p i = 1, and the side
    conditions h i = 0, p h = 0, h h = 0.
    """

    dga: DgAlgebra
    cohomology: GradedAlgebra
    i: dict
    p: dict
    h: dict

    def incl(self, vec: dict) -> dict:
        return apply_table({(k,): v for k, v in self.i.items()}, [vec])

    def proj(self, vec: dict) -> dict:
        return apply_table({(k,): v for k, v in self.p.items()}, [vec])

    def homotopy(self, vec: dict) -> dict:
        return apply_table({(k,): v for k, v in self.h.items()}, [vec])

    def check(self) -> Diagnostic:
        A = self.dga
        a = A.algebra
        one = A.field.one
        diag = Diagnostic()
        for k in range(self.cohomology.dim):
            if self.proj(self.incl({k: one})) != {k: one}:
                diag.failures.append(f"p*i != 1 on H basis element {self.cohomology.names[k]}")
        for k in range(a.dim):
            x = {k: one}
            lhs = add_into(self.incl(self.proj(x)), x, -one)
            rhs = add_into(A.diff(self.homotopy(x)), self.homotopy(A.diff(x)))
            if lhs != rhs:
                diag.failures.append(f"i*p - 1 != d*h + h*d on {a.names[k]}")
            if self.proj(self.homotopy(x)):
                diag.failures.append(f"p*h != 0 on {a.names[k]}")
            if self.homotopy(self.homotopy(x)):
                diag.failures.append(f"h*h != 0 on {a.names[k]}")
        for k in range(self.cohomology.dim):
            if self.homotopy(self.incl({k: one})):
                diag.failures.append(f"h*i != 0 on {self.cohomology.names[k]}")
        return diag


def _echelon_retraction(A: DgAlgebra) -> Retraction:
    a = A.algebra
    f = A.field
    lo, hi = A.degrees_range()
    n = a.dim
    reps = []          # dense vectors in A
    rep_deg = []
    frames = {}        # degree -> (B basis, H reps, C basis)
    for k in range(lo, hi + 1):
        idx = a.degree_indices(k)
        if not idx:
            continue
        # cocycles in degree k
        cols = [A.diff_dense(a.std(i)) for i in idx]
        mat = [[cols[j][r] for j in range(len(idx))] for r in range(n)]
        rows, piv = rref_rows(mat, len(idx))
        kern = kernel_from_rref(rows, piv, len(idx), f)
        Z = Subspace(f, n, [_embed(a, idx, c) for c in kern])
        prev = a.degree_indices(k - 1)
        B = Subspace(f, n, [A.diff_dense(a.std(i)) for i in prev])
        span = B
        hreps = []
        # basis elements first (idempotents, for instance), then the unit, then the rest
        candidates = [a.std(i) for i in idx if Z.contains(a.std(i))]
        if k == 0 and Z.contains(a.unit_dense()):
            candidates.append(a.unit_dense())
        candidates += Z.basis()
        for v in candidates:
            if not span.contains(v):
                hreps.append(v)
                span = span.extend([v])
        cbasis = []
        span2 = Z
        for i in idx:
            v = a.std(i)
            if not span2.contains(v):
                cbasis.append(v)
                span2 = span2.extend([v])
        frames[k] = (B.basis(), hreps, cbasis)
        for v in hreps:
            reps.append(v)
            rep_deg.append(k)
    # p and h from the change of basis per degree
    p, h = {}, {}
    hoff = 0
    offsets = {}
    for k in sorted(frames):
        offsets[k] = hoff
        hoff += len(frames[k][1])
    for k in sorted(frames):
        Bb, Hb, Cb = frames[k]
        idx = a.degree_indices(k)
        full = Bb + Hb + Cb
        M = Matrix(f, len(idx), len(full), tuple(tuple(v[i] for v in full) for i in idx))
        Minv = inverse(M)
        # d restricted to C^{k-1} -> B^k, expressed on the B basis of degree k
        dinv = None
        if Bb:
            Cprev = frames[k - 1][2]
            Bsp = Subspace(f, n, Bb)
            dC = [A.diff_dense(c) for c in Cprev]
            # coordinates of d(c) on the B basis rows
            coordsB = []
            for w in dC:
                sol = _coords_in(f, Bb, w, n)
                coordsB.append(sol)
            D = Matrix(f, len(Bb), len(Cprev), tuple(tuple(coordsB[j][r] for j in range(len(Cprev))) for r in range(len(Bb))))
            dinv = inverse(D)
        for t, i in enumerate(idx):
            col = [Minv.entries[r][t] for r in range(len(full))]
            bco = col[:len(Bb)]
            hco = col[len(Bb):len(Bb) + len(Hb)]
            pv = {offsets[k] + s: c for s, c in enumerate(hco) if c}
            if pv:
                p[i] = pv
            if Bb and any(bco):
                cco = dinv @ bco
                hv = [f.zero] * n
                for c, vec in zip(cco, frames[k - 1][2]):
                    if c:
                        hv = [x - c * y for x, y in zip(hv, vec)]
                hv = from_dense(hv)
                if hv:
                    h[i] = hv
    inc = {s: from_dense(v) for s, v in enumerate(reps)}
    # cohomology algebra
    hn = len(reps)
    prod = {}
    table_p = {(k,): v for k, v in p.items()}
    for s in range(hn):
        for t in range(hn):
            w = a.mul(inc[s], inc[t])
            if w:
                pw = apply_table(table_p, [w])
                if pw:
                    prod[(s, t)] = pw
    unit = apply_table(table_p, [a.unit])
    names, _, verts = _names_for(a, reps)
    names = [f"[{_rep_name(a, v, nm)}]" for v, nm in zip(reps, names)]
    H = GradedAlgebra(f, tuple(names), tuple(rep_deg), prod, unit, verts)
    return Retraction(A, H, inc, p, h)


def _rep_name(a, v, fallback):
    nz = [i for i, x in enumerate(v) if x]
    if len(nz) == 1 and v[nz[0]] == 1:
        return fallback
    if v == a.unit_dense():
        return "1"
    return format_vector(a, v).replace(" ", "")


def _coords_in(f, basis, w, n):
    M = Matrix(f, n, len(basis), tuple(tuple(b[i] for b in basis) for i in range(n)))
    from .linalg import solve
    sol = solve(M, w)
    if sol is None:
        raise AlgebraError("vector outside span")
    return sol


def _embed(a, idx, coeffs):
    v = [a.field.zero] * a.dim
    for k, c in zip(idx, coeffs):
        v[k] = c
    return v


def cohomology_algebra(A: DgAlgebra) -> GradedAlgebra:
    return A.cohomology()


def truncate_connective(A: DgAlgebra) -> DgAlgebra:
    """Good truncation: degrees < 0 unchanged, ker d in degree 0, nothing above."""
    a = A.algebra
    f = A.field
    if a.is_connective() and all(a.degrees[k] <= 0 for v in A.d.values() for k in v):
        return A
    vecs = [a.std(i) for i in range(a.dim) if a.degrees[i] < 0]
    idx0 = a.degree_indices(0)
    cols = [A.diff_dense(a.std(i)) for i in idx0]
    mat = [[cols[j][r] for j in range(len(idx0))] for r in range(a.dim)]
    rows, piv = rref_rows(mat, len(idx0))
    Z = Subspace(f, a.dim, [_embed(a, idx0, c) for c in kernel_from_rref(rows, piv, len(idx0), f)])
    std = [a.std(i) for i in idx0 if Z.contains(a.std(i))]
    zb = std if len(std) == Z.dim else Z.basis()
    return A.restrict(vecs + zb)


@dataclass
class Predicates:
    proper: bool
    connective: bool
    amplitude: object  # int or UNDEFINED
    cohomology_dims: dict


def predicates(A: DgAlgebra) -> Predicates:
    dims = {k: v for k, v in A.cohomology_dims().items() if v}
    conn = all(k <= 0 for k in dims)
    amp = (max(dims) - min(dims)) if dims else UNDEFINED
    return Predicates(True, conn, amp, dims)


# --- radical ideals J_-, J_+ -------------------------------------------------------------------

@dataclass
class DgIdealPair:
    J: Subspace
    J_minus: Subspace
    J_plus: Subspace
    nilpotency: int
    checks: dict
    connective_formula: bool

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def is_dg_ideal(A: DgAlgebra, I: Subspace) -> bool:
    a = A.algebra
    basis = I.basis()
    for v in basis:
        if not I.contains(A.diff_dense(v)):
            return False
        for k in range(a.dim):
            if not I.contains(a.mul_dense(v, a.std(k))) or not I.contains(a.mul_dense(a.std(k), v)):
                return False
    return True


def induced_cohomology_map(A1: DgAlgebra, A2: DgAlgebra, chain_map) -> dict:
    """Matrix (per degree) of H(A1) -> H(A2) for ``chain_map``: dense A1 -> dense A2."""
    r1, r2 = A1.retraction, A2.retraction
    H1, H2 = r1.cohomology, r2.cohomology
    out = {}
    degs = sorted(set(H1.degrees) | set(H2.degrees))
    for g in degs:
        src = [s for s in range(H1.dim) if H1.degrees[s] == g]
        tgt = [t for t in range(H2.dim) if H2.degrees[t] == g]
        cols = []
        for s in src:
            img = chain_map(A1.algebra.dense(r1.incl({s: A1.field.one})))
            pv = r2.proj(from_dense(img))
            cols.append([pv.get(t, A1.field.zero) for t in tgt])
        out[g] = (len(src), len(tgt), rank([[c[r] for c in cols] for r in range(len(tgt))]) if src and tgt else 0)
    return out


def is_quasi_isomorphism(A1, A2, chain_map) -> bool:
    return all(s == t == r for s, t, r in induced_cohomology_map(A1, A2, chain_map).values())


def dg_radical_ideals(A: DgAlgebra) -> DgIdealPair:
    a = A.algebra
    f = A.field
    rd = radical_data(a)
    J = rd.J
    jb = J.basis()
    # J_- = {x in J : d x in J}: kernel of J -> A/J, x -> d x mod J
    images = [J.reduce(A.diff_dense(v)) for v in jb]
    mat = [[images[j][r] for j in range(len(jb))] for r in range(a.dim)]
    rows, piv = rref_rows(mat, len(jb))
    ker = kernel_from_rref(rows, piv, len(jb), f)
    jm = []
    for c in ker:
        v = [f.zero] * a.dim
        for coef, b in zip(c, jb):
            if coef:
                v = [x + coef * y for x, y in zip(v, b)]
        jm.append(v)
    Jm = Subspace(f, a.dim, jm)
    Jp = J.extend([A.diff_dense(v) for v in jb])
    pw = powers(a, Jm)
    nil = len(pw) if not pw[-1].dim else -1
    Q1, Q2 = A.quotient(Jm), A.quotient(Jp)
    c1 = [i for i in range(a.dim) if i not in set(Jm.pivots)]
    c2 = [i for i in range(a.dim) if i not in set(Jp.pivots)]

    def q(v):
        lifted = [f.zero] * a.dim
        for k, x in zip(c1, v):
            lifted[k] = x
        r = Jp.reduce(lifted)
        return [r[k] for k in c2]

    checks = {
        "J_minus_dg_ideal": is_dg_ideal(A, Jm),
        "J_plus_dg_ideal": is_dg_ideal(A, Jp),
        "J_minus_nilpotent": nil >= 0,
        "J_minus_contained_in_J_plus": Jp.contains_space(Jm),
        "quotient_quasi_isomorphism": is_quasi_isomorphism(Q1, Q2, q),
    }
    return DgIdealPair(J, Jm, Jp, nil if nil >= 0 else 0, checks, rd.connective_formula)


def jminus_power_filtration(A: DgAlgebra) -> list[Subspace]:
    """[A, J_-, J_-^2, ..., 0]; the last entry is always zero."""
    pair = dg_radical_ideals(A)
    chain = [Subspace.full(A.field, A.dim)] + powers(A.algebra, pair.J_minus)
    for layer in chain:
        for v in layer.basis():
            if not layer.contains(A.diff_dense(v)):
                raise AlgebraError("J_- power is not closed under d")
    if chain[-1].dim:
        raise AlgebraError("J_- is not nilpotent")
    return chain
