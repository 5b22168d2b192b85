"""Dense exact linear algebra over a :class:`~ainfalg.field.Field`.

Vectors are plain lists of scalars; a :class:`Matrix` is an immutable grid
tagged with its field. Every routine reduces to :func:`rref`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import Field, FieldMismatch


@dataclass(frozen=True)
class Matrix:
    field: Field
    rows: int
    cols: int
    entries: tuple

    @classmethod
    def from_rows(cls, field: Field, rows, cols: int | None = None) -> "Matrix":
        rows = [tuple(field(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix rows")
        return cls(field, len(rows), cols, tuple(rows))

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list]:
        return [list(r) for r in self.entries]

    def column(self, j: int) -> list:
        return [r[j] for r in self.entries]

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows,
                      tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)))

    def _check(self, other: "Matrix"):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            self._check(other)
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
            ot = other.transpose().entries
            z = self.field.zero
            out = []
            for r in self.entries:
                out.append(tuple(_dot(r, c, z) for c in ot))
            return Matrix(self.field, self.rows, other.cols, tuple(out))
        return mat_vec(self, other)

    def __add__(self, other: "Matrix"):
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return Matrix(self.field, self.rows, self.cols,
                      tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix"):
        return self + other.scale(self.field(-1))

    def scale(self, c) -> "Matrix":
        return Matrix(self.field, self.rows, self.cols, tuple(tuple(c * a for a in r) for r in self.entries))

    def is_zero(self) -> bool:
        return all(not a for r in self.entries for a in r)


def _dot(r, c, z):
    s = z
    for a, b in zip(r, c):
        if a and b:
            s = s + a * b
    return s


def mat_vec(m: Matrix, v) -> list:
    if len(v) != m.cols:
        raise ValueError(f"shape mismatch: {m.rows}x{m.cols} matrix, vector of length {len(v)}")
    z = m.field.zero
    return [_dot(r, v, z) for r in m.entries]


def _as_rows(m) -> tuple[list[list], int, Field | None]:
    if isinstance(m, Matrix):
        return [list(r) for r in m.entries], m.cols, m.field
    rows = [list(r) for r in m]
    return rows, (len(rows[0]) if rows else 0), None


def rref_rows(rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """In-place-free reduced row echelon form of a list of rows.

    Returns the nonzero echelon rows and the pivot columns.
    """
    a = [list(r) for r in rows]
    pivots = []
    r = 0
    nrows = len(a)
    for c in range(ncols):
        if r >= nrows:
            break
        p = None
        for i in range(r, nrows):
            if a[i][c]:
                p = i
                break
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        if piv != 1:
            inv = 1 / piv
            a[r] = [x * inv for x in a[r]]
        row = a[r]
        nz = [j for j in range(c, ncols) if row[j]]
        for i in range(nrows):
            if i != r:
                f = a[i][c]
                if f:
                    ai = a[i]
                    for j in nz:
                        ai[j] = ai[j] - f * row[j]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    rows, pivots = rref_rows([list(r) for r in m.entries], m.cols)
    z = m.field.zero
    rows = rows + [[z] * m.cols for _ in range(m.rows - len(rows))]
    return Matrix(m.field, m.rows, m.cols, tuple(tuple(r) for r in rows)), pivots


def rank(m) -> int:
    rows, ncols, _ = _as_rows(m)
    return len(rref_rows(rows, ncols)[1])


def kernel_from_rref(rows: list[list], pivots: list[int], ncols: int, field: Field) -> list[list]:
    z, one = field.zero, field.one
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [z] * ncols
        v[f] = one
        for r, pc in zip(rows, pivots):
            if r[f]:
                v[pc] = -r[f]
        basis.append(v)
    return basis


def kernel_basis(m: Matrix) -> list[list]:
    """Basis of the right null space, parametrized by the free columns."""
    rows, pivots = rref_rows([list(r) for r in m.entries], m.cols)
    return kernel_from_rref(rows, pivots, m.cols, m.field)


def solve(m: Matrix, b) -> list | None:
    """Some x with m x = b, or None when the system is inconsistent."""
    if len(b) != m.rows:
        raise ValueError(f"shape mismatch: {m.rows} rows, right-hand side of length {len(b)}")
    f = m.field
    aug = [list(r) + [f(x)] for r, x in zip(m.entries, b)]
    rows, pivots = rref_rows(aug, m.cols + 1)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [f.zero] * m.cols
    for r, pc in zip(rows, pivots):
        x[pc] = r[m.cols]
    return x


def solve_many(field: Field, columns: list[list], nrows: int, targets: list[list]) -> list[list | None]:
    """Express each target as a combination of ``columns`` (all of length nrows)."""
    ncols = len(columns)
    aug = [[columns[j][i] for j in range(ncols)] + [t[i] for t in targets] for i in range(nrows)]
    rows, pivots = rref_rows(aug, ncols + len(targets)) if nrows else ([], [])
    main_pivots = [p for p in pivots if p < ncols]
    k = len(main_pivots)
    out = []
    for t in range(len(targets)):
        col = ncols + t
        if any(rows[i][col] for i in range(k, len(rows))):
            out.append(None)
            continue
        x = [field.zero] * ncols
        for i, pc in enumerate(main_pivots):
            x[pc] = rows[i][col]
        out.append(x)
    return out


def inverse(m: Matrix) -> Matrix:
    n = m.rows
    if n != m.cols:
        raise ValueError("square matrix required")
    f = m.field
    aug = [list(r) + [f.one if i == j else f.zero for j in range(n)] for i, r in enumerate(m.entries)]
    rows, pivots = rref_rows(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(rows) < n:
        raise ValueError("matrix is singular")
    return Matrix(f, n, n, tuple(tuple(r[n:]) for r in rows))


class Subspace:
    """A subspace of field^ambient held as a reduced echelon basis.

    Two subspaces are equal exactly when their echelon bases agree, so
    equality, containment and sums are all rank computations.
    """

    __slots__ = ("field", "ambient", "rows", "pivots")

    def __init__(self, field: Field, ambient: int, vectors=()):
        self.field = field
        self.ambient = ambient
        vecs = [list(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient:
                raise ValueError("vector length does not match ambient dimension")
        self.rows, self.pivots = rref_rows(vecs, ambient) if vecs else ([], [])

    @classmethod
    def zero(cls, field, ambient):
        return cls(field, ambient)

    @classmethod
    def full(cls, field, ambient):
        z, o = field.zero, field.one
        return cls(field, ambient, [[o if i == j else z for j in range(ambient)] for i in range(ambient)])

    @property
    def dim(self) -> int:
        return len(self.rows)

    def basis(self) -> list[list]:
        return [list(r) for r in self.rows]

    def reduce(self, v) -> list:
        """Remainder of v after eliminating the pivot coordinates."""
        w = list(v)
        for r, pc in zip(self.rows, self.pivots):
            c = w[pc]
            if c:
                for j in range(pc, self.ambient):
                    if r[j]:
                        w[j] = w[j] - c * r[j]
        return w

    def contains(self, v) -> bool:
        return not any(self.reduce(v))

    def coordinates(self, v) -> list | None:
        """Coefficients of v on the echelon basis, or None if v is outside."""
        coeffs = [v[pc] for pc in self.pivots]
        if any(self.reduce(v)):
            return None
        return coeffs

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.field, self.ambient, self.rows + other.rows)

    def extend(self, vectors) -> "Subspace":
        return Subspace(self.field, self.ambient, self.rows + [list(v) for v in vectors])

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.rows)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.pivots == other.pivots and self.rows == other.rows

    def __hash__(self):
        return hash((self.ambient, tuple(tuple(r) for r in self.rows)))

    def intersect(self, other: "Subspace") -> "Subspace":
        # v = sum a_i r_i = sum b_j s_j  ->  kernel of [R; -S]^T
        k1, k2 = self.dim, other.dim
        if not k1 or not k2:
            return Subspace(self.field, self.ambient)
        cols = [list(r) for r in self.rows] + [[-x for x in s] for s in other.rows]
        m = [[cols[j][i] for j in range(k1 + k2)] for i in range(self.ambient)]
        rows, piv = rref_rows(m, k1 + k2)
        ker = kernel_from_rref(rows, piv, k1 + k2, self.field)
        vecs = []
        for c in ker:
            v = [self.field.zero] * self.ambient
            for a, r in zip(c[:k1], self.rows):
                if a:
                    v = [x + a * y for x, y in zip(v, r)]
            vecs.append(v)
        return Subspace(self.field, self.ambient, vecs)

    def complement_basis(self) -> list[list]:
        """Standard basis vectors spanning a complement (non-pivot coordinates)."""
        z, o = self.field.zero, self.field.one
        piv = set(self.pivots)
        return [[o if i == j else z for i in range(self.ambient)] for j in range(self.ambient) if j not in piv]

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"
