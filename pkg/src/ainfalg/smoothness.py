"""Smoothness probe: minimal graded projective resolutions of the simple modules.

Works with a graded algebra with zero differential (a DG algebra with d = 0,
the H^0 of a DG algebra with cohomology in degree 0, or a formal minimal
model). Right modules throughout; P_u = e_u A. A resolution that stops gives
Smooth; a syzygy isomorphic (up to a degree shift) to an earlier one gives
NotSmooth, certified by an explicit invertible module map.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .algebra import GradedAlgebra
from .dg import DgAlgebra, predicates
from .errors import AlgebraError
from .hochschild import peirce_basis
from .linalg import Matrix, Subspace, kernel_basis, rank
from .radical import basic_reduction, radical_data


@dataclass
class Smooth:
    length: int  # maximal projective dimension of a simple
    certificate: dict = dc_field(default_factory=dict)

    def __str__(self):
        return f"Smooth({self.length})"


@dataclass
class NotSmooth:
    simple: str
    step: int
    period: int
    shift: int
    certificate: dict = dc_field(default_factory=dict)

    def __str__(self):
        return f"NotSmooth(simple {self.simple}: syzygy {self.step} repeats syzygy {self.step - self.period})"


@dataclass
class Unknown:
    reason: str

    def __str__(self):
        return f"Unknown({self.reason})"


# --- modules over a Peirce-adapted basic algebra --------------------------------------


class _Ring:
    def __init__(self, a: GradedAlgebra):
        from .dg import DgAlgebra as _D

        rd = radical_data(a)
        if rd.S.dim != len(rd.idempotents):
            raise AlgebraError("semisimple quotient is not split basic")
        P = peirce_basis(_D(a, {}), rd.idempotents)
        self.P = P
        self.a = P.algebra
        self.f = self.a.field
        self.nv = len(P.s_index)
        self.rows = {v: [y for y in range(self.a.dim) if P.tags[y][0] == v] for v in range(self.nv)}
        rdp = radical_data(self.a)
        self.J = rdp.J.basis()
        self.gens = list(range(self.a.dim))

    def summand_basis(self, v):
        return self.rows[v]


class _Free:
    """P = direct sum of e_{v_i} A [shift_i]; coordinates are concatenated."""

    def __init__(self, ring: _Ring, summands: list):
        self.ring = ring
        self.summands = list(summands)  # (v, shift)
        self.offsets = []
        self.coords = []  # (summand index, algebra basis index)
        for i, (v, _) in enumerate(self.summands):
            self.offsets.append(len(self.coords))
            for y in ring.summand_basis(v):
                self.coords.append((i, y))
        self.pos = {c: k for k, c in enumerate(self.coords)}

    @property
    def dim(self):
        return len(self.coords)

    def degree(self, k):
        i, y = self.coords[k]
        return self.summands[i][1] + self.ring.a.degrees[y]

    def act(self, vec, x_dense):
        """Right action of an algebra element (dense) on a coordinate vector."""
        a = self.ring.a
        f = self.ring.f
        out = [f.zero] * self.dim
        xs = {j: c for j, c in enumerate(x_dense) if c}
        for k, c in enumerate(vec):
            if not c:
                continue
            i, y = self.coords[k]
            for j, cx in xs.items():
                for z, cz in a.product.get((y, j), {}).items():
                    out[self.pos[(i, z)]] += c * cx * cz
        return out


def _homogeneous_parts(F: _Free, vec):
    parts = {}
    f = F.ring.f
    for k, c in enumerate(vec):
        if c:
            g = F.degree(k)
            parts.setdefault(g, [f.zero] * F.dim)[k] = c
    return parts


def _adapted_basis(F: _Free, K: Subspace) -> list:
    """Basis of K whose vectors are homogeneous and lie in K e_v for a single v."""
    ring = F.ring
    out, span = [], Subspace(ring.f, F.dim)
    for v in range(ring.nv):
        ev = ring.a.std(ring.P.s_index[v])
        for k in K.basis():
            for g, w in sorted(_homogeneous_parts(F, F.act(k, ev)).items()):
                if not span.contains(w):
                    out.append(w)
                    span = span.extend([w])
    if span.dim != K.dim:
        raise AlgebraError("submodule is not graded")
    return out


def _top_generators(F: _Free, K: Subspace):
    """Minimal homogeneous generators of K, each in K e_v: a basis of K / K J."""
    ring = F.ring
    kb = K.basis()
    KJ = Subspace(ring.f, F.dim, [F.act(k, j) for k in kb for j in ring.J])
    span = KJ
    gens = []
    for v in range(ring.nv):
        ev = ring.a.std(ring.P.s_index[v])
        for k in kb:
            for g, w in sorted(_homogeneous_parts(F, F.act(k, ev)).items()):
                if not span.contains(w):
                    gens.append((v, g, w))
                    span = span.extend([w])
    if span.dim != K.dim:
        raise AlgebraError("generator search did not span the submodule")
    return gens


def _cover(F: _Free, gens) -> tuple[_Free, Matrix]:
    ring = F.ring
    F2 = _Free(ring, [(v, g) for v, g, _ in gens])
    cols = []
    for k, (i, y) in enumerate(F2.coords):
        cols.append(F.act(gens[i][2], ring.a.std(y)))
    M = Matrix(ring.f, F.dim, F2.dim, tuple(tuple(cols[c][r] for c in range(F2.dim)) for r in range(F.dim)))
    return F2, M


@dataclass
class _Module:
    degrees: list
    tags: list
    action: dict  # algebra basis index -> Matrix (column convention)


def _module_of(F: _Free, K: Subspace) -> _Module:
    ring = F.ring
    basis = _adapted_basis(F, K)
    n = len(basis)
    f = ring.f
    B = Matrix(f, F.dim, n, tuple(tuple(b[r] for b in basis) for r in range(F.dim)))
    from .linalg import solve

    action = {}
    for x in ring.gens:
        cols = []
        for b in basis:
            w = F.act(b, ring.a.std(x))
            c = solve(B, w)
            if c is None:
                raise AlgebraError("submodule is not closed under the action")
            cols.append(c)
        action[x] = Matrix(f, n, n, tuple(tuple(cols[c][r] for c in range(n)) for r in range(n)))
    degrees = [next(F.degree(k) for k, c in enumerate(b) if c) for b in basis]
    tags = []
    for b in basis:
        t = None
        for v in range(ring.nv):
            ev = ring.a.std(ring.P.s_index[v])
            if F.act(b, ev) == b:
                t = v
        tags.append(t)
    return _Module(degrees, tags, action)


def _simple_module(ring: _Ring, u: int) -> _Module:
    f = ring.f
    action = {}
    for x in ring.gens:
        c = f.one if x == ring.P.s_index[u] else f.zero
        action[x] = Matrix(f, 1, 1, ((c,),))
    return _Module([0], [u], action)


def _signature(M: _Module, shift=0):
    return sorted(((d + shift), t) for d, t in zip(M.degrees, M.tags))


def find_isomorphism(ring: _Ring, M1: _Module, M2: _Module, seed: int = 0):
    """(shift, phi) with phi M1[shift] -> M2 an invertible module map, or None."""
    f = ring.f
    n = len(M1.degrees)
    if n != len(M2.degrees):
        return None
    shifts = sorted({d2 - d1 for d1 in M1.degrees for d2 in M2.degrees}) if n else [0]
    for s in shifts:
        if _signature(M1, s) != _signature(M2):
            continue
        # unknowns phi[i][j] (row i of M2, column j of M1) allowed when degrees and tags match
        var = [(i, j) for i in range(n) for j in range(n)
               if M2.degrees[i] == M1.degrees[j] + s and M2.tags[i] == M1.tags[j]]
        vpos = {v: k for k, v in enumerate(var)}
        rows = []
        for x in ring.gens:
            R1, R2 = M1.action[x], M2.action[x]
            # (phi R1 - R2 phi)[i][j] = 0
            for i in range(n):
                for j in range(n):
                    row = [f.zero] * len(var)
                    for k in range(n):
                        if (i, k) in vpos and R1.entries[k][j]:
                            row[vpos[(i, k)]] += R1.entries[k][j]
                        if (k, j) in vpos and R2.entries[i][k]:
                            row[vpos[(k, j)]] -= R2.entries[i][k]
                    if any(row):
                        rows.append(row)
        if rows:
            sols = kernel_basis(Matrix(f, len(rows), len(var), tuple(tuple(r) for r in rows)))
        else:
            sols = [[f.one if a == b else f.zero for a in range(len(var))] for b in range(len(var))]
        if not sols:
            continue
        rng = random.Random(seed)
        candidates = list(sols)
        if len(sols) > 1:
            candidates.append([sum((c for c in col), f.zero) for col in zip(*sols)])
            for _ in range(24):
                coeffs = [f(rng.randint(-5, 5)) for _ in sols]
                candidates.append([sum((c * v[k] for c, v in zip(coeffs, sols)), f.zero) for k in range(len(var))])
        for cand in candidates:
            phi = [[f.zero] * n for _ in range(n)]
            for (i, j), k in vpos.items():
                phi[i][j] = cand[k]
            Phi = Matrix(f, n, n, tuple(tuple(r) for r in phi))
            if rank(Phi) == n:
                return s, Phi
    return None


def check_isomorphism(M1: _Module, M2: _Module, phi: Matrix) -> bool:
    if rank(phi) != len(M1.degrees):
        return False
    return all((phi @ M1.action[x]) == (M2.action[x] @ phi) for x in M1.action)


# --- the probe ------------------------------------------------------------------------


def _graded_model(A):
    """A graded algebra with zero differential equivalent to A, or a reason string."""
    from .ainf import AInfAlgebra, minimal_model

    if isinstance(A, GradedAlgebra):
        return A
    if isinstance(A, AInfAlgebra):
        if A.table(1) or any(t for n, t in A.ops.items() if n >= 3):
            return "A-infinity input with nonzero higher products: no graded model to resolve over"
        return A.underlying()
    if A.is_formal_presentation():
        return A.algebra
    if not A.algebra.is_connective():
        return "connective input required"
    pr = predicates(A)
    if pr.amplitude == 0:
        H = A.cohomology()
        return H
    M, _ = minimal_model(A)
    if any(t for n, t in M.ops.items() if n >= 3):
        return "cohomology carries nonzero higher products; the DG resolution is not implemented"
    return M.underlying()


def _semisimple_in_degree_zero(g: GradedAlgebra) -> bool:
    # every homogeneous element of nonzero degree must be radical; automatic when connective
    if g.is_connective():
        return True
    J = radical_data(g).J
    return all(J.contains(g.std(i)) for i in range(g.dim) if g.degrees[i] != 0)


def smoothness_probe(A, max_steps: int = 8):
    g = _graded_model(A)
    if isinstance(g, str):
        return Unknown(g)
    if not _semisimple_in_degree_zero(g):
        return Unknown("semisimple quotient is not concentrated in degree 0")
    basic, _ = basic_reduction(g)
    ring = _Ring(basic)
    names = [ring.a.names[ring.P.s_index[u]] for u in range(ring.nv)]
    cert = {"simples": {}}
    longest = 0
    for u in range(ring.nv):
        F = _Free(ring, [(u, 0)])
        # K_1 = e_u J inside P_0 = e_u A
        K = Subspace(ring.f, F.dim, [F.act(_unit_vec(F), j) for j in ring.J])
        syz = [(_simple_module(ring, u), None)]
        steps = []
        done = False
        for step in range(1, max_steps + 1):
            if K.dim == 0:
                longest = max(longest, step - 1)
                cert["simples"][names[u]] = {"projective_dimension": step - 1, "steps": steps}
                done = True
                break
            M = _module_of(F, K)
            for m, (prev, _) in enumerate(syz):
                iso = find_isomorphism(ring, prev, M)
                if iso is not None:
                    shift, phi = iso
                    return NotSmooth(names[u], step, step - m, shift, {
                        "simple": names[u], "steps": steps, "repeats": m,
                        "phi": [[ring.f.format(x) for x in row] for row in phi.tolist()],
                        "modules": (prev, M), "map": phi,
                    })
            syz.append((M, K))
            gens = _top_generators(F, K)
            F2, pi = _cover(F, gens)
            steps.append({"summands": F2.summands, "map": pi})
            ker = kernel_basis(pi)
            F, K = F2, Subspace(ring.f, F2.dim, ker)
        if not done:
            if K.dim == 0:
                longest = max(longest, max_steps)
                cert["simples"][names[u]] = {"projective_dimension": max_steps, "steps": steps}
                continue
            return Unknown(f"resolution of {names[u]} did not terminate or repeat within {max_steps} steps")
    cert["ring"] = ring
    return Smooth(longest, cert)


def _unit_vec(F: _Free):
    f = F.ring.f
    v = [f.zero] * F.dim
    u, _ = F.summands[0]
    v[F.pos[(0, F.ring.P.s_index[u])]] = f.one
    return v


def replay(verdict) -> bool:
    """Re-verify a certificate: exactness for Smooth, the module isomorphism for NotSmooth."""
    if isinstance(verdict, NotSmooth):
        M1, M2 = verdict.certificate["modules"]
        phi = verdict.certificate["map"]
        shifted = _Module([d + verdict.shift for d in M1.degrees], M1.tags, M1.action)
        return check_isomorphism(M1, M2, phi) and _signature(shifted) == _signature(M2)
    if isinstance(verdict, Smooth):
        ring = verdict.certificate["ring"]
        for name, data in verdict.certificate["simples"].items():
            steps = data["steps"]
            u = [ring.a.names[ring.P.s_index[v]] for v in range(ring.nv)].index(name)
            P0 = _Free(ring, [(u, 0)])
            prev_rank_target = P0.dim - 1  # image of the first map is e_u J
            prev = None
            for k, st in enumerate(steps):
                pi = st["map"]
                if prev is not None and not (prev @ pi).is_zero():
                    return False
                if rank(pi) != prev_rank_target:
                    return False
                prev_rank_target = pi.cols - rank(pi)
                prev = pi
            if prev_rank_target != 0:
                return False
        return True
    return False
