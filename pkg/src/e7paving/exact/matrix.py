"""Dense exact matrices over QQ or a prime field, and subspace arithmetic.

Matrices are small here (at most 21 columns, a few dozen rows), so a plain
tuple-of-tuples representation with Gauss-Jordan elimination is enough.
Subspaces are handled as lists of row vectors; `row_space` returns the
canonical reduced basis, which doubles as a hashable signature.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .fields import QQ, Field

Vector = tuple


class Matrix:
    """An immutable dense matrix.  Rows are tuples of field elements."""

    __slots__ = ("rows", "nrows", "ncols", "field")

    def __init__(self, rows: Iterable[Sequence], ncols: int | None = None, field: Field = QQ):
        conv = field
        self.rows = tuple(tuple(conv(x) for x in r) for r in rows)
        self.nrows = len(self.rows)
        if ncols is None:
            if not self.rows:
                raise ValueError("ncols required for an empty matrix")
            ncols = len(self.rows[0])
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("ragged rows")
        self.ncols = ncols
        self.field = field

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: Field = QQ) -> "Matrix":
        return cls([[0] * ncols for _ in range(nrows)], ncols, field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "Matrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, field)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.shape == other.shape
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"Matrix([{body}], field={self.field})"

    def transpose(self) -> "Matrix":
        cols = [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)]
        return Matrix(cols, self.nrows, self.field)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ot = other.transpose().rows
            zero = self.field.zero
            out = [[sum((a * b for a, b in zip(r, c)), zero) for c in ot] for r in self.rows]
            return Matrix(out, other.ncols, self.field)
        vec = tuple(other)
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        zero = self.field.zero
        return tuple(sum((a * b for a, b in zip(r, vec)), zero) for r in self.rows)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise ValueError("column mismatch")
        return Matrix(self.rows + other.rows, self.ncols, self.field)

    def rank(self) -> int:
        return rref(self)[1]


def rref(m: Matrix) -> tuple[Matrix, int]:
    """Reduced row-echelon form and rank.  The input is left untouched."""
    rows = [list(r) for r in m.rows]
    nr, nc = m.nrows, m.ncols
    zero = m.field.zero
    piv_r = 0
    for c in range(nc):
        if piv_r == nr:
            break
        sel = next((i for i in range(piv_r, nr) if rows[i][c] != zero), None)
        if sel is None:
            continue
        rows[piv_r], rows[sel] = rows[sel], rows[piv_r]
        p = rows[piv_r][c]
        prow = [x / p for x in rows[piv_r]]
        rows[piv_r] = prow
        for i in range(nr):
            if i != piv_r:
                f = rows[i][c]
                if f != zero:
                    r = rows[i]
                    rows[i] = [a - f * b for a, b in zip(r, prow)]
        piv_r += 1
    return Matrix(rows, nc, m.field), piv_r


def pivots(reduced: Matrix) -> list[int]:
    zero = reduced.field.zero
    out = []
    for r in reduced.rows:
        for j, x in enumerate(r):
            if x != zero:
                out.append(j)
                break
    return out


def kernel_basis(m: Matrix) -> list[Vector]:
    """Basis of the right kernel {v : m v = 0}; one vector per free column."""
    red, rk = rref(m)
    piv = pivots(red)[:rk]
    field = m.field
    free = [j for j in range(m.ncols) if j not in piv]
    basis = []
    for f in free:
        v = [field.zero] * m.ncols
        v[f] = field.one
        for i, pc in enumerate(piv):
            v[pc] = -red.rows[i][f]
        basis.append(tuple(v))
    return basis


# -- subspaces -------------------------------------------------------------

def row_space(vectors: Sequence[Sequence], dim: int, field: Field = QQ) -> tuple[Vector, ...]:
    """Canonical basis (nonzero rows of the rref) of the span of `vectors`."""
    if not vectors:
        return ()
    m = Matrix(vectors, dim, field)
    red, rk = rref(m)
    return red.rows[:rk]


def _check_dim(a, b, dim):
    for v in list(a) + list(b):
        if len(v) != dim:
            raise ValueError(f"vector of length {len(v)} in ambient dimension {dim}")


def subspace_sum(a, b, dim: int, field: Field = QQ) -> tuple[Vector, ...]:
    _check_dim(a, b, dim)
    return row_space(list(a) + list(b), dim, field)


def annihilator(basis, dim: int, field: Field = QQ) -> list[Vector]:
    """Basis of the linear forms vanishing on span(basis)."""
    if not basis:
        return [tuple(field(int(i == j)) for j in range(dim)) for i in range(dim)]
    return kernel_basis(Matrix(basis, dim, field))


def subspace_intersection(a, b, dim: int, field: Field = QQ) -> tuple[Vector, ...]:
    _check_dim(a, b, dim)
    if not a or not b:
        return ()
    forms = annihilator(a, dim, field) + annihilator(b, dim, field)
    if not forms:
        return row_space(a, dim, field)
    return row_space(kernel_basis(Matrix(forms, dim, field)), dim, field)


def contains(basis, v, dim: int, field: Field = QQ) -> bool:
    """Membership of v in span(basis)."""
    _check_dim(basis, [v], dim)
    if not basis:
        return all(x == 0 for x in v)
    return Matrix(list(basis) + [v], dim, field).rank() == Matrix(basis, dim, field).rank()


def is_subspace(a, b, dim: int, field: Field = QQ) -> bool:
    """span(a) is contained in span(b)."""
    return all(contains(b, v, dim, field) for v in a)
