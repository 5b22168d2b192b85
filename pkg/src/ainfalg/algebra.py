"""Finite-dimensional graded associative algebras given by structure constants."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

from .errors import AlgebraError
from .field import Field
from .linalg import Matrix, Subspace, inverse
from .sparse import add_into, apply_table, clean_table, from_dense, to_dense


@dataclass
class Diagnostic:
    """Outcome of an axiom check: ``valid`` plus human-readable failure witnesses."""

    failures: list[str] = dc_field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.valid

    def __str__(self):
        return "valid" if self.valid else "; ".join(self.failures)


@dataclass(frozen=True, eq=False)
class GradedAlgebra:
    """Basis-presented graded algebra (cohomological degrees).

    ``product`` maps basis index pairs to sparse vectors. ``vertices`` holds an
    optional (source, target) tag per basis element, as read from quiver-style
    presentations; it is metadata and never used to define the product.
    """

    field: Field
    names: tuple
    degrees: tuple
    product: dict
    unit: dict
    vertices: tuple | None = None

    def __post_init__(self):
        if len(self.names) != len(self.degrees):
            raise ValueError("names and degrees differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate basis names")

    @property
    def dim(self) -> int:
        return len(self.names)

    @cached_property
    def _index(self) -> dict:
        return {n: i for i, n in enumerate(self.names)}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise AlgebraError(f"unknown basis element {name!r}") from None

    def element(self, name: str) -> dict:
        return {self.index(name): self.field.one}

    def dense(self, vec: dict) -> list:
        return to_dense(vec, self.dim, self.field)

    def mul(self, u: dict, v: dict) -> dict:
        return apply_table(self.product, [u, v])

    def mul_dense(self, u: list, v: list) -> list:
        return self.dense(self.mul(from_dense(u), from_dense(v)))

    def unit_dense(self) -> list:
        return self.dense(self.unit)

    def degree_indices(self, d: int) -> list[int]:
        return [i for i, g in enumerate(self.degrees) if g == d]

    @property
    def min_degree(self) -> int:
        return min(self.degrees) if self.degrees else 0

    @property
    def max_degree(self) -> int:
        return max(self.degrees) if self.degrees else 0

    def is_connective(self) -> bool:
        return all(g <= 0 for g in self.degrees)

    def left_matrix(self, u: list) -> Matrix:
        """Matrix of x -> u*x in the basis."""
        f = self.field
        su = from_dense(u)
        cols = [self.dense(self.mul(su, {j: f.one})) for j in range(self.dim)]
        return Matrix(f, self.dim, self.dim, tuple(tuple(cols[j][i] for j in range(self.dim)) for i in range(self.dim)))

    def span_products(self, left: list[list], right: list[list]) -> Subspace:
        vecs = []
        for u in left:
            su = from_dense(u)
            for v in right:
                w = self.mul(su, from_dense(v))
                if w:
                    vecs.append(self.dense(w))
        return Subspace(self.field, self.dim, vecs)

    def std(self, i: int) -> list:
        v = [self.field.zero] * self.dim
        v[i] = self.field.one
        return v

    # --- structural transformations -------------------------------------------------

    def restrict(self, vectors: list[list], names=None, degrees=None, unit=None) -> "GradedAlgebra":
        """Algebra on the span of ``vectors`` (linearly independent, closed under
        the product). ``unit`` defaults to the ambient unit; pass an idempotent
        for corner algebras eAe."""
        sub = Subspace(self.field, self.dim, vectors)
        if sub.dim != len(vectors):
            raise ValueError("restrict() needs linearly independent vectors")
        basis = [list(v) for v in vectors]
        coords = _coordinate_solver(self.field, basis, self.dim)
        product = {}
        for i, u in enumerate(basis):
            su = from_dense(u)
            for j, v in enumerate(basis):
                w = self.mul(su, from_dense(v))
                if w:
                    c = coords(self.dense(w))
                    if c is None:
                        raise AlgebraError("span is not closed under the product")
                    c = from_dense(c)
                    if c:
                        product[(i, j)] = c
        unit = coords(self.unit_dense() if unit is None else list(unit))
        if unit is None:
            raise AlgebraError("span does not contain the unit")
        if names is None or degrees is None:
            names, degrees, verts = _names_for(self, basis)
        else:
            verts = None
        return GradedAlgebra(self.field, tuple(names), tuple(degrees), product, from_dense(unit), verts)

    def change_basis(self, new_basis: list[list], names=None) -> "GradedAlgebra":
        """Same algebra written in a new (homogeneous) basis; rows are the new basis vectors."""
        if len(new_basis) != self.dim:
            raise ValueError("need a full basis")
        return self.restrict(new_basis, names=names, degrees=[_homogeneous_degree(self, v) for v in new_basis]) \
            if names is not None else self.restrict(new_basis)


def _coordinate_solver(field, basis, n):
    m = Matrix(field, n, len(basis), tuple(tuple(b[i] for b in basis) for i in range(n))) if basis else None
    if basis and len(basis) == n:
        inv = inverse(m)
        return lambda v: inv @ list(v)
    from .linalg import solve

    def coords(v):
        if not basis:
            return [] if not any(v) else None
        return solve(m, list(v))

    return coords


def _homogeneous_degree(a, v) -> int:
    degs = {a.degrees[i] for i, x in enumerate(v) if x}
    if len(degs) > 1:
        raise AlgebraError("basis vector is not homogeneous")
    return degs.pop() if degs else 0


def _names_for(a: GradedAlgebra, basis):
    names, degrees, verts = [], [], []
    used = set()
    for k, v in enumerate(basis):
        nz = [i for i, x in enumerate(v) if x]
        deg = _homogeneous_degree(a, v)
        if len(nz) == 1 and v[nz[0]] == 1:
            nm = a.names[nz[0]]
            verts.append(a.vertices[nz[0]] if a.vertices else (None, None))
        else:
            nm = f"v{k}"
            verts.append((None, None))
        while nm in used:
            nm = nm + "'"
        used.add(nm)
        names.append(nm)
        degrees.append(deg)
    has_verts = a.vertices is not None and all(t != (None, None) for t in verts)
    return names, degrees, tuple(verts) if has_verts else None


def make_algebra(field: Field, basis: list[tuple], products: dict, unit: list[str]) -> GradedAlgebra:
    """Build an algebra from names.

    ``basis`` is a list of (name, degree) or (name, degree, source, target);
    ``products`` maps (name, name) to {name: coefficient}; ``unit`` lists the
    basis elements summing to 1.
    """
    names = tuple(b[0] for b in basis)
    degrees = tuple(int(b[1]) for b in basis)
    verts = tuple((b[2], b[3]) for b in basis) if basis and all(len(b) >= 4 for b in basis) else None
    idx = {n: i for i, n in enumerate(names)}

    def lookup(n):
        if n not in idx:
            raise AlgebraError(f"unknown basis element {n!r}")
        return idx[n]

    table = {}
    for (x, y), val in products.items():
        vec = {lookup(k): field(c) for k, c in val.items()}
        table[(lookup(x), lookup(y))] = vec
    u = {}
    for n in unit:
        add_into(u, {lookup(n): field.one})
    return GradedAlgebra(field, names, degrees, clean_table(table), u, verts)


def path_algebra(field: Field, vertices: list[str], arrows: list[tuple], relations_zero_paths=None,
                 degrees: dict | None = None, max_length: int | None = None) -> GradedAlgebra:
    """Path algebra of an acyclic quiver (or a truncation of any quiver).

    Arrows are (name, source, target); paths compose left to right, so ``ab``
    is defined when a ends where b starts. Paths whose arrow-word contains one
    of ``relations_zero_paths`` (tuples of arrow names) are zero; paths longer
    than ``max_length`` are zero.
    """
    degrees = degrees or {}
    zero_words = [tuple(w) for w in (relations_zero_paths or [])]
    paths = [((v,), v, v, 0) for v in vertices]  # (word, source, target, degree); idempotent words are 1-tuples of vertex
    arrow_paths = []
    frontier = [((a,), s, t, degrees.get(a, 0)) for a, s, t in arrows]

    def killed(word):
        for z in zero_words:
            L = len(z)
            for i in range(len(word) - L + 1):
                if word[i:i + L] == z:
                    return True
        return False

    length = 1
    while frontier:
        if max_length is not None and length > max_length:
            break
        frontier = [p for p in frontier if not killed(p[0])]
        arrow_paths.extend(frontier)
        nxt = []
        for w, s, t, d in frontier:
            for a, s2, t2 in arrows:
                if s2 == t:
                    nxt.append((w + (a,), s, t2, d + degrees.get(a, 0)))
        frontier = nxt
        length += 1
        if length > 64:
            raise AlgebraError("quiver has oriented cycles; give relations or max_length")
    basis = []
    for (w, s, t, d) in paths:
        basis.append((f"e{w[0]}", 0, s, t))
    for (w, s, t, d) in arrow_paths:
        basis.append(("".join(w), d, s, t))
    names = [b[0] for b in basis]
    key = {}
    for (w, s, t, d) in paths:
        key[("v", w[0])] = f"e{w[0]}"
    for (w, s, t, d) in arrow_paths:
        key[w] = "".join(w)
    info = {f"e{w[0]}": ("v", w[0], s, t) for (w, s, t, d) in paths}
    info.update({"".join(w): (w, None, s, t) for (w, s, t, d) in arrow_paths})
    products = {}
    for x in names:
        kx = info[x]
        for y in names:
            ky = info[y]
            if kx[3] != ky[2]:
                continue
            if kx[0] == "v":
                products[(x, y)] = {y: 1}
            elif ky[0] == "v":
                products[(x, y)] = {x: 1}
            else:
                w = kx[0] + ky[0]
                if w in key:
                    products[(x, y)] = {key[w]: 1}
    if len(set(names)) != len(names):
        raise AlgebraError("arrow names collide; use distinct single-token names")
    return make_algebra(field, basis, products, [f"e{v}" for v in vertices])


def verify_algebra(a: GradedAlgebra) -> Diagnostic:
    """Check grading, two-sided unit and associativity on all basis triples."""
    diag = Diagnostic()
    n = a.dim
    one = a.field.one
    for (i, j), val in a.product.items():
        for k in val:
            if a.degrees[k] != a.degrees[i] + a.degrees[j]:
                diag.failures.append(
                    f"grading: {a.names[i]}*{a.names[j]} has a component on {a.names[k]} of degree "
                    f"{a.degrees[k]} != {a.degrees[i] + a.degrees[j]}")
                break
    for i in range(n):
        e = {i: one}
        if a.mul(a.unit, e) != e or a.mul(e, a.unit) != e:
            diag.failures.append(f"unit: 1*{a.names[i]} or {a.names[i]}*1 differs from {a.names[i]}")
    # associativity; products of basis pairs are sparse so precompute
    for i in range(n):
        for j in range(n):
            ij = a.product.get((i, j), {})
            for k in range(n):
                left = a.mul(ij, {k: one}) if ij else {}
                jk = a.product.get((j, k), {})
                right = a.mul({i: one}, jk) if jk else {}
                if left != right:
                    diag.failures.append(
                        f"associativity: ({a.names[i]}*{a.names[j]})*{a.names[k]} != "
                        f"{a.names[i]}*({a.names[j]}*{a.names[k]})")
                    if len(diag.failures) > 20:
                        return diag
    return diag


def format_vector(a, vec) -> str:
    """Render a sparse or dense vector as ``c*name + ...``."""
    if isinstance(vec, list):
        vec = from_dense(vec)
    if not vec:
        return "0"
    parts = []
    for k in sorted(vec):
        c = vec[k]
        s = a.field.format(c)
        parts.append(a.names[k] if s == "1" else f"{s}*{a.names[k]}")
    return " + ".join(parts)
