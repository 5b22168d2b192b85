"""Windows of Hochschild cohomology and of the Ext-algebra of H^0.

Both are computed from S-relative normalized bar complexes, where S is a split
separable subalgebra spanned by orthogonal idempotents e_u summing to 1. The
algebra is first rewritten in a Peirce basis (each basis element lies in some
e_u A e_v, the idempotents themselves are basis elements), so that a cochain
is a family of values on composable tuples of non-idempotent basis elements.

Signs: cochains live in the bar picture (shifted degrees |sx| = |x| - 1) with
b_1(sx) = s dx and b_2(sx, sy) = (-1)^|x| s(xy). The Hochschild differential is
[b, f] = b o f - (-1)^|f| f o b with Koszul signs, and HH degree = |f| + 1.

Finiteness. For connective input every shifted non-idempotent element has
degree <= -1 while values have shifted degree >= -n0 - 1, so a cochain with n
inputs has HH degree >= n - n0. Hence HH^i only involves n <= i + n0 and each
window degree is a finite computation. For Ext^i(B, B) with B = H^0 (degree 0)
the same count gives n <= i.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .algebra import GradedAlgebra, format_vector
from .dg import DgAlgebra
from .errors import AlgebraError
from .linalg import Matrix, Subspace, kernel_basis, rank
from .radical import radical_data
from .sparse import add_into, from_dense


@dataclass
class CohomologyWindow:
    lo: int
    hi: int
    dims: dict  # degree -> dimension
    representatives: dict  # degree -> list of cocycles, each a list of (inputs, output, coeff) strings
    cochain_dims: dict  # degree -> dimension of the cochain space
    d_squared_zero: bool
    checks: dict = dc_field(default_factory=dict)


# --- Peirce basis --------------------------------------------------------------------


@dataclass
class PeirceData:
    algebra: GradedAlgebra
    d: dict
    tags: list  # (u, v) per basis index
    s_index: list  # basis index of e_u, per u
    nonS: list  # indices of the remaining basis elements


def check_separable(a: GradedAlgebra, s: list) -> None:
    """``s`` must be orthogonal idempotents of degree 0 summing to the unit."""
    f = a.field
    if not s:
        raise AlgebraError("separable subalgebra needs at least one idempotent")
    total = [f.zero] * a.dim
    for i, e in enumerate(s):
        if any(x and a.degrees[k] != 0 for k, x in enumerate(e)):
            raise AlgebraError("idempotents must have degree 0")
        for j, e2 in enumerate(s):
            prod = a.mul_dense(e, e2)
            want = e if i == j else [f.zero] * a.dim
            if prod != list(want):
                raise AlgebraError("S must be spanned by orthogonal idempotents (split separable)")
        total = [x + y for x, y in zip(total, e)]
    if total != a.unit_dense():
        raise AlgebraError("the idempotents of S must sum to the unit")


def peirce_basis(A: DgAlgebra, s: list) -> PeirceData:
    a = A.algebra
    f = a.field
    check_separable(a, s)
    for e in s:
        if any(A.diff_dense(e)):
            raise AlgebraError("S must consist of cocycles")
    vecs, tags = [], []
    span = Subspace(f, a.dim)
    s_index = []
    for u, e in enumerate(s):
        vecs.append(list(e))
        tags.append((u, u))
        span = span.extend([e])
        s_index.append(len(vecs) - 1)
    lo, hi = (a.min_degree, a.max_degree) if a.dim else (0, 0)
    for k in range(lo, hi + 1):
        idx = a.degree_indices(k)
        for u, eu in enumerate(s):
            for v, ev in enumerate(s):
                piece = Subspace(f, a.dim, [a.mul_dense(a.mul_dense(eu, a.std(i)), ev) for i in idx])
                std = [a.std(i) for i in idx if piece.contains(a.std(i))]
                for w in std + piece.basis():
                    if not span.contains(w) and piece.contains(w):
                        vecs.append(w)
                        tags.append((u, v))
                        span = span.extend([w])
    if len(vecs) != a.dim:
        raise AlgebraError("Peirce decomposition failed to span the algebra")
    B = A.restrict(vecs, unit=a.unit_dense())
    nonS = [i for i in range(a.dim) if i not in set(s_index)]
    return PeirceData(B.algebra, B.d, tags, s_index, nonS)


def _default_s(A: DgAlgebra) -> list:
    rd = radical_data(A.algebra)
    if rd.S.dim != len(rd.idempotents):
        raise AlgebraError("no split separable subalgebra of orthogonal idempotents: reduce to the basic algebra first")
    return rd.idempotents


# --- generic assembly ----------------------------------------------------------------


def _composable(P: PeirceData, n: int, start=None):
    """Composable n-tuples of non-idempotent basis indices (tags chain t(x_i) = s(x_{i+1}))."""
    if n == 0:
        yield ()
        return
    first = [i for i in P.nonS if start is None or P.tags[i][0] == start]
    for i in first:
        for rest in _composable(P, n - 1, P.tags[i][1]):
            yield (i,) + rest


class _Complex:
    """Cochain spaces by degree with a differential given on basis cochains."""

    def __init__(self, field, basis_of, delta):
        self.field = field
        self.basis_of = basis_of
        self.delta = delta
        self._cache = {}

    def basis(self, j):
        if j not in self._cache:
            b = list(self.basis_of(j))
            self._cache[j] = (b, {c: k for k, c in enumerate(b)})
        return self._cache[j]

    def matrix(self, j) -> Matrix:
        src, _ = self.basis(j)
        tgt, pos = self.basis(j + 1)
        f = self.field
        cols = []
        for c in src:
            col = [f.zero] * len(tgt)
            for key, val in self.delta(c).items():
                if key not in pos:
                    raise AlgebraError(f"differential leaves the cochain space at {key}")
                col[pos[key]] = col[pos[key]] + val
            cols.append(col)
        return Matrix(f, len(tgt), len(src), tuple(tuple(cols[k][r] for k in range(len(src))) for r in range(len(tgt))))


def _window(cx: _Complex, lo: int, hi: int, show) -> CohomologyWindow:
    f = cx.field
    dims, reps, cdims = {}, {}, {}
    sq_ok = True
    for j in range(lo, hi + 1):
        src, _ = cx.basis(j)
        dj = cx.matrix(j)
        dprev = cx.matrix(j - 1)
        if dj.cols and dprev.cols and dj.rows:
            if not (dj @ dprev).is_zero():
                sq_ok = False
        cdims[j] = len(src)
        if not src:
            dims[j], reps[j] = 0, []
            continue
        ker = kernel_basis(dj) if dj.rows else [[f.one if r == c else f.zero for r in range(len(src))]
                                                for c in range(len(src))]
        img = Subspace(f, len(src), [dprev.column(c) for c in range(dprev.cols)]) if dprev.cols else Subspace(f, len(src))
        span = img
        chosen = []
        for v in ker:
            if not span.contains(v):
                chosen.append(v)
                span = span.extend([v])
        dims[j] = len(chosen)
        reps[j] = [[show(src[k], c) for k, c in enumerate(v) if c] for v in chosen]
    return CohomologyWindow(lo, hi, dims, reps, cdims, sq_ok)


# --- Hochschild ----------------------------------------------------------------------


def _sgn(k):
    return -1 if k % 2 else 1


def hochschild_window(A: DgAlgebra, lo: int, hi: int, s: list | None = None) -> CohomologyWindow:
    """HH^i(A) for lo <= i <= hi, relative to the split separable subalgebra S."""
    a0 = A.algebra
    if not a0.is_connective():
        raise AlgebraError("window finiteness not guaranteed: connective input required")
    if lo > hi:
        raise AlgebraError("empty window")
    P = peirce_basis(A, s if s is not None else _default_s(A))
    a = P.algebra
    f = a.field
    deg = a.degrees
    n0 = -min(deg) if deg else 0
    nonS = set(P.nonS)
    S_set = set(P.s_index)
    one = f.one

    def dvec(i):
        return P.d.get(i, {})

    def prod(i, j):
        return a.product.get((i, j), {})

    # reverse maps for the f o b terms (components on non-idempotent elements only)
    d_rev = {}
    for x in P.nonS:
        for k, c in dvec(x).items():
            if k in nonS:
                d_rev.setdefault(k, []).append((x, c))
    p_rev = {}
    for p in P.nonS:
        for q in P.nonS:
            for k, c in prod(p, q).items():
                if k in nonS:
                    p_rev.setdefault(k, []).append((p, q, c))

    def fdeg(tau, y):
        return (deg[y] - 1) - sum(deg[x] - 1 for x in tau)

    def basis_of(j):
        for n in range(0, max(j + n0 + 1, -1) + 1):
            for tau in _composable(P, n):
                su = P.tags[tau[0]][0] if tau else None
                tv = P.tags[tau[-1]][1] if tau else None
                for y in range(a.dim):
                    uy, vy = P.tags[y]
                    if tau and (uy != su or vy != tv):
                        continue
                    if not tau and uy != vy:
                        continue
                    if fdeg(tau, y) + 1 == j:
                        yield (tau, y)

    def delta(c):
        tau, y = c
        F = fdeg(tau, y)
        out = {}

        def put(key, val):
            if val:
                out[key] = out.get(key, f.zero) + val
                if not out[key]:
                    del out[key]

        for yy, v in dvec(y).items():
            put((tau, yy), v)
        right_end = P.tags[tau[-1]][1] if tau else P.tags[y][1]
        left_end = P.tags[tau[0]][0] if tau else P.tags[y][0]
        for x in P.nonS:
            if P.tags[x][0] == right_end:
                for yy, v in prod(y, x).items():
                    put((tau + (x,), yy), v * _sgn(deg[y]))
            if P.tags[x][1] == left_end:
                sg = _sgn(F * (deg[x] - 1) + deg[x])
                for yy, v in prod(x, y).items():
                    put(((x,) + tau, yy), v * sg)
        outer = -_sgn(F)
        pre = 0
        for r, xr in enumerate(tau):
            for x2, cc in d_rev.get(xr, []):
                put((tau[:r] + (x2,) + tau[r + 1:], y), outer * _sgn(pre) * cc)
            for p, q, cc in p_rev.get(xr, []):
                put((tau[:r] + (p, q) + tau[r + 1:], y), outer * _sgn(pre + deg[p]) * cc)
            pre += deg[xr] - 1
        return out

    def show(c, coeff):
        tau, y = c
        args = ",".join(a.names[x] for x in tau)
        return f"{f.format(coeff)} * ({args}) -> {a.names[y]}"

    cx = _Complex(f, basis_of, delta)
    return _window(cx, lo, hi, show)


# --- Ext of H^0 ----------------------------------------------------------------------


def _h0_module(A: DgAlgebra, P: PeirceData):
    """B = H^0(A) as a right module: basis vectors (in Peirce coordinates) with tags
    and the action of each basis element of A."""
    a = P.algebra
    f = a.field
    deg = a.degrees
    idx0 = [i for i in range(a.dim) if deg[i] == 0]
    boundaries = Subspace(f, a.dim, [a.dense(P.d.get(i, {})) for i in range(a.dim) if deg[i] == -1 and P.d.get(i)])
    # basis of B: Peirce pieces e_u A^0 e_v modulo boundaries, preferring basis elements
    basis, tags = [], []
    span = boundaries
    for u in range(len(P.s_index)):
        for v in range(len(P.s_index)):
            for i in idx0:
                if P.tags[i] == (u, v):
                    w = a.std(i)
                    if not span.contains(w):
                        basis.append(w)
                        tags.append((u, v))
                        span = span.extend([w])
    def coords(w):
        """Coordinates of a degree-0 vector modulo boundaries."""
        return _solve_mod(f, basis, boundaries, w, a.dim)

    return basis, tags, coords


def _solve_mod(f, basis, boundaries: Subspace, w, n):
    from .linalg import solve

    vecs = basis + boundaries.basis()
    M = Matrix(f, n, len(vecs), tuple(tuple(v[i] for v in vecs) for i in range(n)))
    sol = solve(M, list(w))
    if sol is None:
        raise AlgebraError("vector outside A^0")
    return sol[:len(basis)]


def ext_window(A: DgAlgebra, lo: int, hi: int, s: list | None = None) -> CohomologyWindow:
    """H^i(RHom_A(B, B)) for B = H^0(A) viewed as a right A-module."""
    a0 = A.algebra
    if not a0.is_connective():
        raise AlgebraError("window finiteness not guaranteed: connective input required")
    if lo > hi:
        raise AlgebraError("empty window")
    P = peirce_basis(A, s if s is not None else _default_s(A))
    a = P.algebra
    f = a.field
    deg = a.degrees
    nonS = set(P.nonS)
    basis, btags, coords = _h0_module(A, P)
    nb = len(basis)

    act = {}  # (m, x) -> sparse vector in B coordinates, m a B index, x an A index
    for m in range(nb):
        for x in range(a.dim):
            if deg[x] != 0:
                continue
            w = a.mul_dense(basis[m], a.std(x))
            if any(w):
                v = from_dense(coords(w))
                if v:
                    act[(m, x)] = v
    act_rev = {}
    for (m, x), v in act.items():
        if x in nonS:
            for k, c in v.items():
                act_rev.setdefault(k, []).append((m, x, c))
    d_rev = {}
    for x in P.nonS:
        for k, c in P.d.get(x, {}).items():
            if k in nonS:
                d_rev.setdefault(k, []).append((x, c))
    p_rev = {}
    for p in P.nonS:
        for q in P.nonS:
            for k, c in a.product.get((p, q), {}).items():
                if k in nonS:
                    p_rev.setdefault(k, []).append((p, q, c))

    def phideg(tau):
        # B sits in degree 0: |phi| = -(sum of shifted input degrees of the a's)
        return -sum(deg[x] - 1 for x in tau)

    def basis_of(j):
        for n in range(0, max(j, -1) + 1):
            for m in range(nb):
                for tau in _composable(P, n, btags[m][1]):
                    tv = P.tags[tau[-1]][1] if tau else btags[m][1]
                    if phideg(tau) != j:
                        continue
                    for y in range(nb):
                        if btags[y][1] == tv:
                            yield (m, tau, y)

    def delta(c):
        m0, tau, y = c
        F = phideg(tau)
        out = {}

        def put(key, val):
            if val:
                out[key] = out.get(key, f.zero) + val
                if not out[key]:
                    del out[key]

        right_end = P.tags[tau[-1]][1] if tau else btags[m0][1]
        # rho(phi(...), x): B sits in degree 0, so the sign (-1)^|y| is +1
        for x in P.nonS:
            if P.tags[x][0] == right_end:
                for yy, v in act.get((y, x), {}).items():
                    put((m0, tau + (x,), yy), v)
        outer = -_sgn(F)
        # rho(sm, sx_1) feeding phi: (m, x, tau) with m.x having a component on m0
        for m, x, cc in act_rev.get(m0, []):
            if not tau or P.tags[x][1] == P.tags[tau[0]][0]:
                put((m, (x,) + tau, y), outer * cc)
        pre = -1  # shifted degree of sm
        for r, xr in enumerate(tau):
            for x2, cc in d_rev.get(xr, []):
                put((m0, tau[:r] + (x2,) + tau[r + 1:], y), outer * _sgn(pre) * cc)
            for p, q, cc in p_rev.get(xr, []):
                put((m0, tau[:r] + (p, q) + tau[r + 1:], y), outer * _sgn(pre + deg[p]) * cc)
            pre += deg[xr] - 1
        return out

    def show(c, coeff):
        m, tau, y = c
        args = ",".join([format_vector(a, basis[m])] + [a.names[x] for x in tau])
        return f"{f.format(coeff)} * ({args}) -> {format_vector(a, basis[y])}"

    cx = _Complex(f, basis_of, delta)
    win = _window(cx, lo, hi, show)
    checks = {}
    if lo <= 0 <= hi:
        # H^0 = right A-linear endomorphisms of B; compare with left multiplications
        h0 = win.dims[0]
        src, pos = cx.basis(0)
        d0 = cx.matrix(0)
        left_ok = True
        for b in range(nb):
            vec = [f.zero] * len(src)
            for m in range(nb):
                w = a.mul_dense(basis[b], basis[m])
                for y, cc in from_dense(coords(w)).items():
                    key = (m, (), y)
                    if key in pos:
                        vec[pos[key]] = cc
                    else:
                        left_ok = False
            if d0.rows and any(d0 @ vec):
                left_ok = False
        checks["H0_dim"] = h0
        checks["B_dim"] = nb
        checks["H0_is_B"] = bool(left_ok and h0 == nb)
    if lo <= 1 <= hi:
        checks["H1_zero"] = win.dims[1] == 0
    win.checks = checks
    return win
