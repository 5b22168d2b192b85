"""Jacobson radical, Loewy length, idempotent lifting and basic reduction."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from math import isqrt

import sympy

from .algebra import GradedAlgebra
from .errors import AlgebraError, NonSplitError
from .field import Fp
from .linalg import Subspace, kernel_from_rref, rref_rows
from .sparse import from_dense


# --- radical -------------------------------------------------------------------------

def _trace(m) -> object:
    s = m.field.zero
    for i in range(m.rows):
        s = s + m.entries[i][i]
    return s


def _radical_of_span(a: GradedAlgebra, idx: list[int]) -> Subspace:
    """Jacobson radical of the subalgebra spanned by basis elements ``idx``.

    Characteristic 0 (or p > dimension): kernel of the trace form
    (x, y) -> Tr(L_{xy}). Small characteristic: the iterated integer-lift
    trace functionals, which cut the trace-form kernel down to the radical.
    """
    f = a.field
    n = len(idx)
    if n == 0:
        return Subspace(f, a.dim)
    pos = {k: t for t, k in enumerate(idx)}

    def sub_left(vec):
        # left multiplication restricted to the subalgebra, in its own basis
        sv = from_dense(vec)
        cols = []
        for k in idx:
            w = a.mul(sv, {k: f.one})
            col = [f.zero] * n
            for q, c in w.items():
                if q not in pos:
                    raise AlgebraError("span is not a subalgebra")
                col[pos[q]] = c
            cols.append(col)
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    basis = [a.std(k) for k in idx]
    p = f.characteristic
    if p == 0 or p > n:
        gram = []
        for x in basis:
            sx = from_dense(x)
            row = []
            for y in basis:
                m = sub_left(a.dense(a.mul(sx, from_dense(y))))
                row.append(sum((m[i][i] for i in range(n)), f.zero))
            gram.append(row)
        rows, piv = rref_rows(gram, n)
        ker = kernel_from_rref(rows, piv, n, f)
        vecs = [_embed(a, idx, c) for c in ker]
        return Subspace(f, a.dim, vecs)

    # small characteristic
    current = basis
    i = 0
    while p ** i <= n:
        e = p ** i
        cols = []
        for x in current:
            sx = from_dense(x)
            col = []
            for y in basis:
                m = sub_left(a.dense(a.mul(sx, from_dense(y))))
                lift = [[int(c.value) for c in r] for r in m]
                pw = _int_mat_pow(lift, e)
                tr = sum(pw[t][t] for t in range(n))
                assert tr % e == 0
                col.append(Fp(tr // e, p))
            cols.append(col)
        mat = [[cols[j][r] for j in range(len(current))] for r in range(len(basis))]
        rows, piv = rref_rows(mat, len(current))
        ker = kernel_from_rref(rows, piv, len(current), f)
        new = []
        for c in ker:
            v = [f.zero] * a.dim
            for coef, x in zip(c, current):
                if coef:
                    v = [s + coef * t for s, t in zip(v, x)]
            new.append(v)
        current = new
        i += 1
        if not current:
            break
    return Subspace(f, a.dim, current)


def _embed(a, idx, coeffs):
    v = [a.field.zero] * a.dim
    for k, c in zip(idx, coeffs):
        v[k] = c
    return v


def _int_mat_pow(m, e):
    n = len(m)
    result = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    base = m
    while e:
        if e & 1:
            result = _int_mat_mul(result, base)
        e >>= 1
        if e:
            base = _int_mat_mul(base, base)
    return result


def _int_mat_mul(x, y):
    n = len(x)
    yt = list(zip(*y))
    return [[sum(a * b for a, b in zip(r, c)) for c in yt] for r in x]


def jacobson_radical(a: GradedAlgebra) -> Subspace:
    """Radical of the underlying ungraded algebra."""
    return _radical_of_span(a, list(range(a.dim)))


def degree_zero_radical(a: GradedAlgebra) -> Subspace:
    return _radical_of_span(a, a.degree_indices(0))


def powers(a: GradedAlgebra, ideal: Subspace, limit: int = 10_000) -> list[Subspace]:
    """[I, I^2, ..., I^k] stopping at the first zero power (included) or when stable."""
    out = [ideal]
    cur = ideal
    gens = ideal.basis()
    while cur.dim and len(out) < limit:
        nxt = a.span_products(cur.basis(), gens)
        out.append(nxt)
        if nxt == cur:
            break
        cur = nxt
    return out


def loewy_length(a: GradedAlgebra, J: Subspace) -> int:
    """Smallest l with J^l = 0."""
    ps = powers(a, J)
    if ps[-1].dim:
        raise AlgebraError("ideal is not nilpotent")
    return len(ps) if J.dim else 1


# --- semisimple quotient ---------------------------------------------------------------

class _Quotient:
    """A / J with a coordinate system on a complement of J."""

    def __init__(self, a: GradedAlgebra, J: Subspace):
        self.a = a
        self.J = J
        self.cidx = [i for i in range(a.dim) if i not in set(J.pivots)]
        self.n = len(self.cidx)
        self.f = a.field

    def lift(self, q: list) -> list:
        v = [self.f.zero] * self.a.dim
        for k, c in zip(self.cidx, q):
            v[k] = c
        return v

    def project(self, v: list) -> list:
        r = self.J.reduce(v)
        return [r[k] for k in self.cidx]

    def mul(self, x: list, y: list) -> list:
        return self.project(self.a.mul_dense(self.lift(x), self.lift(y)))

    def one(self) -> list:
        return self.project(self.a.unit_dense())

    def std(self, i):
        v = [self.f.zero] * self.n
        v[i] = self.f.one
        return v

    def span(self, vecs) -> Subspace:
        return Subspace(self.f, self.n, vecs)


def _poly_of(Q, z: list, unit: list) -> list:
    """Minimal polynomial of z in the algebra with unit ``unit`` (coefficients low -> high)."""
    f = Q.f
    pw = [unit]
    while True:
        nxt = Q.mul(pw[-1], z)
        # solve nxt = sum c_i pw[i]
        k = len(pw)
        cols = pw
        aug = [[cols[j][i] for j in range(k)] + [nxt[i]] for i in range(Q.n)]
        rows, piv = rref_rows(aug, k + 1)
        if not piv or piv[-1] != k:
            coeffs = [f.zero] * k
            for r, pc in zip(rows, piv):
                coeffs[pc] = r[k]
            return [-c for c in coeffs] + [f.one]
        pw.append(nxt)
        if len(pw) > Q.n + 1:
            raise AlgebraError("minimal polynomial search did not terminate")


def _roots(poly: list, field) -> tuple[list, bool, bool]:
    """(roots in the field, splits into linear factors, squarefree)."""
    x = sympy.Symbol("x")
    if field.characteristic == 0:
        coeffs = [sympy.Rational(c.numerator, c.denominator) for c in reversed(poly)]
        P = sympy.Poly(coeffs, x, domain=sympy.QQ)
    else:
        coeffs = [int(c.value) for c in reversed(poly)]
        P = sympy.Poly(coeffs, x, modulus=field.characteristic)
    _, facs = P.factor_list()
    roots, splits, sqfree = [], True, True
    for g, mult in facs:
        if mult > 1:
            sqfree = False
        if g.degree() == 1:
            a1, a0 = g.all_coeffs()
            if field.characteristic == 0:
                r = -sympy.Rational(a0) / sympy.Rational(a1)
                roots.append(field(f"{r.p}/{r.q}"))
            else:
                roots.append(field(-int(a0)) / field(int(a1)))
        else:
            splits = False
    return roots, splits, sqfree


def _poly_eval(Q, poly_roots_except, z, unit, lam):
    """prod_{mu != lam} (z - mu)/(lam - mu) evaluated in Q."""
    acc = unit
    for mu in poly_roots_except:
        t = [zi - mu * ui for zi, ui in zip(z, unit)]
        acc = Q.mul(acc, t)
        inv = 1 / (lam - mu)
        acc = [c * inv for c in acc]
    return acc


def _corner_basis(Q, e) -> list[list]:
    vecs = [Q.mul(Q.mul(e, Q.std(i)), e) for i in range(Q.n)]
    return Q.span(vecs).basis()


def _central_idempotents(Q) -> list[list]:
    f = Q.f
    # center: x with x b - b x = 0 for all basis b
    eqs = []
    for b in range(Q.n):
        eb = Q.std(b)
        cols = []
        for i in range(Q.n):
            ei = Q.std(i)
            xb = Q.mul(ei, eb)
            bx = Q.mul(eb, ei)
            cols.append([p - q for p, q in zip(xb, bx)])
        for r in range(Q.n):
            eqs.append([cols[i][r] for i in range(Q.n)])
    rows, piv = rref_rows(eqs, Q.n)
    center = kernel_from_rref(rows, piv, Q.n, f)
    pieces = [Q.one()]
    done = []
    while pieces:
        e = pieces.pop()
        zb = Q.span([Q.mul(e, z) for z in center]).basis()
        if len(zb) <= 1:
            done.append(e)
            continue
        split = None
        for z in zb:
            poly = _poly_of(Q, z, e)
            if len(poly) <= 2:
                continue
            roots, splits, sqfree = _roots(poly, f)
            if not sqfree:
                raise AlgebraError("quotient by the radical is not semisimple")
            if not splits:
                raise NonSplitError("non-split semisimple quotient")
            split = [_poly_eval(Q, [m for m in roots if m != lam], z, e, lam) for lam in roots]
            break
        if split is None:
            raise NonSplitError("non-split semisimple quotient")
        pieces.extend(split)
    return done


def _primitive_in_block(Q, c, rng) -> list[list]:
    """Orthogonal primitive idempotents summing to the central idempotent c."""
    d = len(_corner_basis(Q, c))
    n = isqrt(d)
    if n * n != d:
        raise NonSplitError("non-split semisimple quotient")
    if n == 1:
        return [c]
    out = []
    todo = [c]
    while todo:
        e = todo.pop()
        cb = _corner_basis(Q, e)
        r = isqrt(len(cb))
        if r * r != len(cb):
            raise NonSplitError("non-split semisimple quotient")
        if r == 1:
            out.append(e)
            continue
        found = None
        for z in _candidates(cb, Q.f, rng):
            poly = _poly_of(Q, z, e)
            if len(poly) <= 2:
                continue
            roots, _, sqfree = _roots(poly, Q.f)
            if not sqfree:
                raise AlgebraError("quotient by the radical is not semisimple")
            if not roots:
                continue
            lam = roots[0]
            # idempotent for the factor (x - lam): g(z)/g(lam) with g = poly/(x - lam)
            g = _divide_linear(poly, lam)
            gz = _eval_poly(Q, g, z, e)
            glam = sum((c * lam ** k for k, c in enumerate(g)), Q.f.zero)
            eps = [x / glam for x in gz]
            found = [eps, [p - q for p, q in zip(e, eps)]]
            break
        if found is None:
            raise NonSplitError("non-split semisimple quotient (no splitting element found)")
        todo.extend(found)
    return out


def _candidates(cb, f, rng):
    yield from cb
    for i in range(len(cb)):
        for j in range(i + 1, len(cb)):
            yield [x + y for x, y in zip(cb[i], cb[j])]
    for _ in range(200):
        coeffs = [f(rng.randint(-3, 3)) for _ in cb]
        v = [f.zero] * len(cb[0])
        for c, b in zip(coeffs, cb):
            if c:
                v = [x + c * y for x, y in zip(v, b)]
        yield v


def _divide_linear(poly, lam):
    # synthetic division of poly (low->high) by (x - lam)
    n = len(poly) - 1
    out = [None] * n
    carry = poly[n]
    for k in range(n - 1, -1, -1):
        out[k] = carry
        carry = poly[k] + carry * lam
    return out


def _eval_poly(Q, poly, z, unit):
    acc = [c * 0 for c in unit]
    pw = unit
    for k, c in enumerate(poly):
        if k:
            pw = Q.mul(pw, z)
        if c:
            acc = [x + c * y for x, y in zip(acc, pw)]
    return acc


# --- lifting ---------------------------------------------------------------------------------

def lift_idempotent(a: GradedAlgebra, x: list, max_iter: int = 64) -> list:
    """Newton iteration x <- 3x^2 - 2x^3 until x is idempotent."""
    for _ in range(max_iter):
        x2 = a.mul_dense(x, x)
        if x2 == x:
            return x
        x3 = a.mul_dense(x2, x)
        x = [3 * p - 2 * q for p, q in zip(x2, x3)]
    raise AlgebraError("idempotent lifting did not converge (element not idempotent modulo a nilpotent ideal)")


@dataclass
class RadicalData:
    J: Subspace
    loewy_length: int
    S: Subspace
    idempotents: list  # lifted primitive orthogonal idempotents (dense)
    classes: list  # class label (block index) per idempotent
    matrix_units: dict = dc_field(default_factory=dict)
    connective_formula: bool = True

    @property
    def class_count(self) -> int:
        return len(set(self.classes))


def _semisimple_structure(a: GradedAlgebra, J: Subspace, seed: int = 0):
    Q = _Quotient(a, J)
    rng = random.Random(seed)
    blocks = _central_idempotents(Q)
    blocks.sort(key=lambda v: [(-1 if x else 0) for x in v])
    q_idem, labels = [], []
    for bi, c in enumerate(blocks):
        for e in _primitive_in_block(Q, c, rng):
            q_idem.append(e)
            labels.append(bi)
    # lift sequentially inside the complement of the already lifted ones
    f = a.field
    one = a.unit_dense()
    lifted = []
    rest = one
    for k, q in enumerate(q_idem):
        if k == len(q_idem) - 1:
            E = rest
        else:
            x = Q.lift(q)
            x = a.mul_dense(a.mul_dense(rest, x), rest)
            E = lift_idempotent(a, x)
        lifted.append(E)
        rest = [p - r for p, r in zip(rest, E)]
    return Q, lifted, labels


def _matrix_units(a: GradedAlgebra, J: Subspace, idem: list, labels: list) -> dict:
    """Matrix units E[(i, j)] for idempotents in the same block (i, j index ``idem``)."""
    units = {}
    f = a.field
    by_block = {}
    for i, b in enumerate(labels):
        by_block.setdefault(b, []).append(i)
    for b, members in by_block.items():
        first = members[0]
        E1 = idem[first]
        units[(first, first)] = E1
        for j in members[1:]:
            Ej = idem[j]
            left = a.span_products([a.mul_dense(E1, a.std(k)) for k in range(a.dim)], [Ej]).basis()
            right = a.span_products([a.mul_dense(Ej, a.std(k)) for k in range(a.dim)], [E1]).basis()
            pair = None
            for u in left:
                for v in right:
                    w = a.mul_dense(u, v)
                    if not J.contains(w):
                        pair = (u, v, w)
                        break
                if pair:
                    break
            if pair is None:
                raise AlgebraError("idempotents in one block are not isomorphic")
            u, v, w = pair
            # w = c*E1 mod J; normalise then invert E1 + n inside E1 A E1
            r = J.reduce(w)
            r1 = J.reduce(E1)
            k0 = next(i for i, x in enumerate(r1) if x)
            c = r[k0] / r1[k0]
            u = [x / c for x in u]
            w = a.mul_dense(u, v)
            nil = [p - q for p, q in zip(w, E1)]
            inv = list(E1)
            term = list(E1)
            for _ in range(a.dim + 1):
                term = a.mul_dense(term, [-x for x in nil])
                if not any(term):
                    break
                inv = [p + q for p, q in zip(inv, term)]
            v = a.mul_dense(v, inv)
            units[(first, j)] = u
            units[(j, first)] = v
        for i in members[1:]:
            for j in members[1:]:
                units[(i, j)] = a.mul_dense(units[(i, first)], units[(first, j)])
    return units


def radical_data(a: GradedAlgebra) -> RadicalData:
    """Radical, Loewy length and a semisimple complement for any graded algebra.

    Connective inputs use rad(A^0) + A^{<0}; otherwise the radical of the
    underlying ungraded algebra (a graded ideal) is used and the result is
    flagged with ``connective_formula=False``.
    """
    f = a.field
    if a.is_connective():
        J = degree_zero_radical(a).extend([a.std(i) for i in range(a.dim) if a.degrees[i] < 0])
        conn = True
    else:
        J = jacobson_radical(a)
        conn = False
    l = loewy_length(a, J)
    _, idem, labels = _semisimple_structure(a, J)
    units = _matrix_units(a, J, idem, labels)
    S = Subspace(f, a.dim, list(units.values()))
    return RadicalData(J, l, S, idem, labels, units, conn)


def graded_radical(a: GradedAlgebra) -> RadicalData:
    if not a.is_connective():
        raise AlgebraError("connective input required")
    return radical_data(a)


def block_count(a: GradedAlgebra, J: Subspace | None = None) -> int:
    """Number of simple blocks of A/J (= classes of primitive idempotents when split)."""
    if J is None:
        J = radical_data(a).J
    Q = _Quotient(a, J)
    blocks = _central_idempotents(Q)
    for c in blocks:
        d = len(_corner_basis(Q, c))
        if isqrt(d) ** 2 != d:
            raise NonSplitError("non-split semisimple quotient")
    return len(blocks)


def basic_reduction(a: GradedAlgebra) -> tuple[GradedAlgebra, int]:
    """Return (e A e, n) with e a sum of one primitive idempotent per class."""
    rd = radical_data(a)
    f = a.field
    chosen = {}
    for E, lab in zip(rd.idempotents, rd.classes):
        chosen.setdefault(lab, E)
    e = [f.zero] * a.dim
    for E in chosen.values():
        e = [x + y for x, y in zip(e, E)]
    vecs = []
    lo, hi = (a.min_degree, a.max_degree) if a.dim else (0, 0)
    for d in range(lo, hi + 1):
        idx = a.degree_indices(d)
        sp = Subspace(f, a.dim, [a.mul_dense(a.mul_dense(e, a.std(k)), e) for k in idx])
        vecs.extend(_prefer_standard(a, sp))
    return a.restrict(vecs, unit=e), len(chosen)


def _prefer_standard(a, sp: Subspace) -> list[list]:
    """Echelon basis, replaced by standard basis vectors when the span is coordinate."""
    std = [a.std(i) for i in range(a.dim) if sp.contains(a.std(i))]
    if len(std) == sp.dim:
        return std
    return sp.basis()
