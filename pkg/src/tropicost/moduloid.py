"""Dense matrices and vectors over a cost dioid."""

from __future__ import annotations

from typing import Iterable, Sequence

from .dioid import CostDioid


class DimensionError(ValueError):
    pass


class CostVector:
    """An element of the moduloid Q^n; immutable."""

    __slots__ = ("dioid", "entries")

    def __init__(self, dioid: CostDioid, entries: Iterable, *, coerce: bool = True):
        vals = tuple(dioid.coerce(x) for x in entries) if coerce else tuple(entries)
        if not vals:
            raise DimensionError("vectors need at least one entry")
        object.__setattr__(self, "dioid", dioid)
        object.__setattr__(self, "entries", vals)

    def __setattr__(self, name, value):
        raise AttributeError("CostVector is immutable")

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        if not isinstance(other, CostVector):
            return NotImplemented
        return (
            self.dioid == other.dioid
            and len(self) == len(other)
            and all(self.dioid.eq(a, b) for a, b in zip(self.entries, other.entries))
        )

    def __hash__(self):
        return hash(self.entries)

    def __or__(self, other):
        return vec_add(self, other)

    def __le__(self, other):
        return vec_leq(self, other)

    def __repr__(self):
        return "CostVector(" + ", ".join(self.dioid.format(x) for x in self.entries) + ")"

    @classmethod
    def zeros(cls, dioid: CostDioid, n: int) -> "CostVector":
        return cls(dioid, [dioid.zero] * n, coerce=False)

    @classmethod
    def unit(cls, dioid: CostDioid, n: int, i: int) -> "CostVector":
        return cls(dioid, [dioid.one if j == i else dioid.zero for j in range(n)], coerce=False)

    @classmethod
    def indicator(cls, dioid: CostDioid, n: int, support: Iterable[int]) -> "CostVector":
        s = set(support)
        return cls(dioid, [dioid.one if j in s else dioid.zero for j in range(n)], coerce=False)

    def support(self) -> frozenset[int]:
        """Positions holding something other than bottom."""
        d = self.dioid
        return frozenset(i for i, x in enumerate(self.entries) if not d.eq(x, d.zero))


class CostMatrix:
    """An n x m matrix over a cost dioid; immutable.

    Rows and columns are indexed by ordinal; naming states is the job of the
    transition system.
    """

    __slots__ = ("dioid", "rows", "shape")

    def __init__(self, dioid: CostDioid, rows: Iterable[Iterable], *, coerce: bool = True):
        if coerce:
            grid = tuple(tuple(dioid.coerce(x) for x in row) for row in rows)
        else:
            grid = tuple(tuple(row) for row in rows)
        if not grid or not grid[0]:
            raise DimensionError("matrix dimensions must be positive")
        width = len(grid[0])
        if any(len(r) != width for r in grid):
            raise DimensionError("ragged matrix rows")
        object.__setattr__(self, "dioid", dioid)
        object.__setattr__(self, "rows", grid)
        object.__setattr__(self, "shape", (len(grid), width))

    def __setattr__(self, name, value):
        raise AttributeError("CostMatrix is immutable")

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, CostMatrix):
            return NotImplemented
        if self.dioid != other.dioid or self.shape != other.shape:
            return False
        eq = self.dioid.eq
        return all(eq(a, b) for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))

    def __hash__(self):
        return hash(self.rows)

    def __matmul__(self, other):
        if isinstance(other, CostVector):
            return mat_vec(self, other)
        return mat_mul(self, other)

    def __or__(self, other):
        return mat_add(self, other)

    def __le__(self, other):
        return mat_leq(self, other)

    def __repr__(self):
        body = "; ".join(" ".join(self.dioid.format(x) for x in r) for r in self.rows)
        return f"CostMatrix[{self.dioid.name}]({body})"

    @property
    def n_rows(self) -> int:
        return self.shape[0]

    @property
    def n_cols(self) -> int:
        return self.shape[1]

    def column(self, j: int) -> CostVector:
        return CostVector(self.dioid, (r[j] for r in self.rows), coerce=False)

    def row(self, i: int) -> CostVector:
        return CostVector(self.dioid, self.rows[i], coerce=False)

    def submatrix(self, idx: Sequence[int]) -> "CostMatrix":
        return CostMatrix(self.dioid, [[self.rows[i][j] for j in idx] for i in idx], coerce=False)

    @classmethod
    def zeros(cls, dioid: CostDioid, n: int, m: int | None = None) -> "CostMatrix":
        m = n if m is None else m
        return cls(dioid, [[dioid.zero] * m for _ in range(n)], coerce=False)

    @classmethod
    def identity(cls, dioid: CostDioid, n: int) -> "CostMatrix":
        z, e = dioid.zero, dioid.one
        return cls(dioid, [[e if i == j else z for j in range(n)] for i in range(n)], coerce=False)

    @classmethod
    def from_columns(cls, dioid: CostDioid, columns: Sequence[Sequence]) -> "CostMatrix":
        return cls(dioid, list(zip(*columns)))


def _same_dioid(a, b):
    if a.dioid != b.dioid:
        raise DimensionError(f"dioid mismatch: {a.dioid.name} vs {b.dioid.name}")


def mat_add(A: CostMatrix, B: CostMatrix) -> CostMatrix:
    _same_dioid(A, B)
    if A.shape != B.shape:
        raise DimensionError(f"cannot add {A.shape} and {B.shape}")
    add = A.dioid.add
    return CostMatrix(A.dioid, [[add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A.rows, B.rows)], coerce=False)


def mat_mul(A: CostMatrix, B: CostMatrix) -> CostMatrix:
    """(AB)_ij = (+)_k A_ik (x) B_kj."""
    _same_dioid(A, B)
    if A.n_cols != B.n_rows:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    d = A.dioid
    add, mul, zero, eq = d.add, d.mul, d.zero, d.eq
    cols = list(zip(*B.rows))
    out = []
    for ra in A.rows:
        nz = [(k, a) for k, a in enumerate(ra) if not eq(a, zero)]
        row = []
        for col in cols:
            acc = zero
            for k, a in nz:
                b = col[k]
                if not eq(b, zero):
                    acc = add(acc, mul(a, b))
            row.append(acc)
        out.append(row)
    return CostMatrix(d, out, coerce=False)


def mat_vec(A: CostMatrix, u: CostVector) -> CostVector:
    _same_dioid(A, u)
    if A.n_cols != len(u):
        raise DimensionError(f"cannot apply {A.shape} matrix to length-{len(u)} vector")
    d = A.dioid
    add, mul = d.add, d.mul
    out = []
    for ra in A.rows:
        acc = d.zero
        for a, x in zip(ra, u.entries):
            acc = add(acc, mul(a, x))
        out.append(acc)
    return CostVector(d, out, coerce=False)


def vec_add(u: CostVector, v: CostVector) -> CostVector:
    _same_dioid(u, v)
    if len(u) != len(v):
        raise DimensionError("vector length mismatch")
    return CostVector(u.dioid, map(u.dioid.add, u.entries, v.entries), coerce=False)


def vec_leq(u: CostVector, v: CostVector) -> bool:
    _same_dioid(u, v)
    if len(u) != len(v):
        raise DimensionError("vector length mismatch")
    d = u.dioid
    return all(d.eq(d.add(a, b), b) for a, b in zip(u.entries, v.entries))


def mat_leq(A: CostMatrix, B: CostMatrix) -> bool:
    """Entrywise order."""
    _same_dioid(A, B)
    if A.shape != B.shape:
        raise DimensionError(f"cannot compare {A.shape} and {B.shape}")
    d = A.dioid
    return all(d.eq(d.add(a, b), b) for ra, rb in zip(A.rows, B.rows) for a, b in zip(ra, rb))


def first_violation(A: CostMatrix, B: CostMatrix) -> tuple[int, int] | None:
    """First (i, j) with A_ij not <= B_ij, scanning row-major."""
    _same_dioid(A, B)
    if A.shape != B.shape:
        raise DimensionError(f"cannot compare {A.shape} and {B.shape}")
    d = A.dioid
    for i, (ra, rb) in enumerate(zip(A.rows, B.rows)):
        for j, (a, b) in enumerate(zip(ra, rb)):
            if not d.eq(d.add(a, b), b):
                return i, j
    return None


def _square(A: CostMatrix):
    if A.n_rows != A.n_cols:
        raise DimensionError(f"square matrix required, got {A.shape}")


def mat_power(A: CostMatrix, k: int) -> CostMatrix:
    _square(A)
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"power must be a positive integer, got {k!r}")
    out = A
    for _ in range(k - 1):
        out = mat_mul(out, A)
    return out


def mat_powers(A: CostMatrix, kmax: int) -> list[CostMatrix]:
    """[A, A^2, ..., A^kmax]."""
    _square(A)
    out = [A]
    for _ in range(kmax - 1):
        out.append(mat_mul(out[-1], A))
    return out


def kleene_plus(A: CostMatrix) -> CostMatrix:
    """Transitive closure A+ = (+)_{i>=1} A^i.

    Floyd-Warshall style elimination where each pivot passes through the
    element star of its diagonal entry, so divergent entries come out as top
    without iterating powers.
    """
    _square(A)
    d = A.dioid
    add, mul, star, eq, zero = d.add, d.mul, d.star, d.eq, d.zero
    n = A.n_rows
    g = [list(r) for r in A.rows]
    for k in range(n):
        s = star(g[k][k])
        col = [g[i][k] for i in range(n)]
        row = [mul(s, x) for x in g[k]]
        for i in range(n):
            a = col[i]
            if eq(a, zero):
                continue
            gi = g[i]
            for j in range(n):
                b = row[j]
                if not eq(b, zero):
                    gi[j] = add(gi[j], mul(a, b))
    return CostMatrix(d, g, coerce=False)


def trace(A: CostMatrix):
    _square(A)
    return A.dioid.sum(A.rows[i][i] for i in range(A.n_rows))


def transpose(A: CostMatrix) -> CostMatrix:
    return CostMatrix(A.dioid, list(zip(*A.rows)), coerce=False)


def mat_residual(A: CostMatrix, y: CostVector) -> CostVector:
    """Greatest x with A x <= y: x_j = meet over i of A_ij \\ y_i."""
    _same_dioid(A, y)
    if A.n_rows != len(y):
        raise DimensionError(f"cannot divide length-{len(y)} vector by {A.shape} matrix")
    d = A.dioid
    out = []
    for j in range(A.n_cols):
        acc = d.top
        for i in range(A.n_rows):
            acc = d.meet(acc, d.divide(A.rows[i][j], y.entries[i]))
        out.append(acc)
    return CostVector(d, out, coerce=False)
