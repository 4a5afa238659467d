"""Exact linear algebra over the rationals.

Everything in this package runs on top of the dense :class:`Matrix` type
defined here, with entries of :class:`fractions.Fraction`.  Fractions keep
themselves in lowest terms with a positive denominator, so every arithmetic
result is canonical and every identity asserted elsewhere is an exact
equality of integers or of fully reduced fractions.

Matrices are immutable; all operations return fresh values, so they can be
shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ValidationError

try:  # gmpy2's mpq is a drop-in exact rational, much faster than Fraction
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    Q = Fraction

_ZERO = Q(0)
_ONE = Q(1)
_RATIONAL_TYPES = (Fraction, type(_ZERO))

Vector = tuple


def parse_rational(value):
    """Parse an integer, a rational, or a string ``"p"`` / ``"p/q"``."""
    if isinstance(value, bool):
        raise ValidationError(f"expected a rational, got boolean {value!r}")
    if isinstance(value, int):
        return Q(value)
    if isinstance(value, _RATIONAL_TYPES):
        return Q(value)
    if isinstance(value, str):
        try:
            return Q(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"malformed rational literal {value!r}") from exc
    raise ValidationError(f"expected a rational, got {type(value).__name__}")


def format_rational(q) -> str:
    """Serialize as ``"p"`` or ``"p/q"``; never floats."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Matrix:
    """Immutable dense matrix of Fractions, stored row-major.

    Zero-row and zero-column matrices are legal values; they arise at the
    ends of cochain complexes and in trivial subspaces.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: tuple[tuple[Fraction, ...], ...]):
        self.rows = rows
        self.cols = cols
        self.data = data

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_rows(cls, entries: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = len(entries)
        if rows == 0:
            if cols is None:
                raise ValueError("cols is required for a zero-row matrix")
            return cls(0, cols, ())
        width = len(entries[0])
        if cols is not None and cols != width:
            raise ValueError("explicit cols disagrees with row length")
        data = []
        for r in entries:
            if len(r) != width:
                raise ValueError("ragged rows")
            data.append(tuple(parse_rational(x) for x in r))
        return cls(rows, width, tuple(data))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "Matrix":
        if len(columns) == 0:
            if rows is None:
                raise ValueError("rows is required for a zero-column matrix")
            return cls(rows, 0, tuple(() for _ in range(rows)))
        height = len(columns[0])
        if any(len(c) != height for c in columns):
            raise ValueError("ragged columns")
        if rows is not None and rows != height:
            raise ValueError("explicit rows disagrees with column length")
        data = tuple(
            tuple(parse_rational(columns[j][i]) for j in range(len(columns)))
            for i in range(height)
        )
        return cls(height, len(columns), data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        row = tuple(_ZERO for _ in range(cols))
        return cls(rows, cols, tuple(row for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(
            tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n)
        ))

    @classmethod
    def column_vector(cls, v: Sequence) -> "Matrix":
        return cls.from_rows([[x] for x in v], cols=1)

    # -- accessors --------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def entry(self, i: int, j: int) -> Fraction:
        return self.data[i][j]

    def row(self, i: int) -> Vector:
        return self.data[i]

    def column(self, j: int) -> Vector:
        return tuple(self.data[i][j] for i in range(self.rows))

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.data]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        if not self.is_square():
            return False
        return all(
            self.data[i][j] == self.data[j][i]
            for i in range(self.rows) for j in range(i + 1, self.cols)
        )

    # -- arithmetic -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.data))

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return Matrix(self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(ra, rb))
            for ra, rb in zip(self.data, other.data)
        ))

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} - {other.shape}")
        return Matrix(self.rows, self.cols, tuple(
            tuple(a - b for a, b in zip(ra, rb))
            for ra, rb in zip(self.data, other.data)
        ))

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, tuple(
            tuple(-a for a in r) for r in self.data
        ))

    def scale(self, q) -> "Matrix":
        q = parse_rational(q)
        return Matrix(self.rows, self.cols, tuple(
            tuple(q * a for a in r) for r in self.data
        ))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.cols
        ocols = [other.column(j) for j in range(cols)]
        out = []
        for i in range(self.rows):
            ri = self.data[i]
            out.append(tuple(
                sum((ri[k] * oc[k] for k in range(self.cols)), _ZERO)
                for oc in ocols
            ))
        return Matrix(self.rows, cols, tuple(out))

    def mul_vec(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise ValueError(f"vector length {len(v)} != cols {self.cols}")
        return tuple(
            sum((self.data[i][k] * v[k] for k in range(self.cols)), _ZERO)
            for i in range(self.rows)
        )

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, tuple(
            tuple(self.data[i][j] for i in range(self.rows))
            for j in range(self.cols)
        ))

    # -- block assembly ---------------------------------------------------

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch in hstack")
        return Matrix(self.rows, self.cols + other.cols, tuple(
            ra + rb for ra, rb in zip(self.data, other.data)
        ))

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch in vstack")
        return Matrix(self.rows + other.rows, self.cols, self.data + other.data)

    @staticmethod
    def block(grid: Sequence[Sequence["Matrix"]]) -> "Matrix":
        rows = None
        for band in grid:
            acc = band[0]
            for m in band[1:]:
                acc = acc.hstack(m)
            rows = acc if rows is None else rows.vstack(acc)
        assert rows is not None
        return rows

    @staticmethod
    def direct_sum(a: "Matrix", b: "Matrix") -> "Matrix":
        return Matrix.block([
            [a, Matrix.zeros(a.rows, b.cols)],
            [Matrix.zeros(b.rows, a.cols), b],
        ])

    def __repr__(self) -> str:
        body = "; ".join(
            " ".join(format_rational(x) for x in r) for r in self.data
        )
        return f"Matrix({self.rows}x{self.cols}: [{body}])"


# -- elimination ----------------------------------------------------------

def _rref(m: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    a = [list(r) for r in m.data]
    pivots: list[int] = []
    pr = 0
    for pc in range(m.cols):
        pivot_row = None
        for i in range(pr, m.rows):
            if a[i][pc] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        a[pr], a[pivot_row] = a[pivot_row], a[pr]
        inv = 1 / a[pr][pc]
        a[pr] = [x * inv for x in a[pr]]
        for i in range(m.rows):
            if i != pr and a[i][pc] != 0:
                f = a[i][pc]
                a[i] = [x - f * y for x, y in zip(a[i], a[pr])]
        pivots.append(pc)
        pr += 1
        if pr == m.rows:
            break
    return a, pivots


def rank(m: Matrix) -> int:
    return len(_rref(m)[1])


def matrix_inverse(m: Matrix) -> Matrix:
    if not m.is_square():
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    aug = m.hstack(Matrix.identity(n))
    rows, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return Matrix(n, n, tuple(tuple(r[n:]) for r in rows[:n]))


# -- spec surface ---------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """A linear subspace given by a matrix whose columns form a basis."""

    ambient_dim: int
    basis: Matrix

    def __post_init__(self):
        if self.basis.rows != self.ambient_dim:
            raise ValidationError(
                f"basis rows {self.basis.rows} != ambient_dim {self.ambient_dim}"
            )
        if rank(self.basis) != self.basis.cols:
            raise ValidationError("basis columns are linearly dependent")

    @property
    def dim(self) -> int:
        return self.basis.cols

    def vectors(self) -> list[Vector]:
        return self.basis.columns()

    def contains(self, v: Sequence) -> bool:
        return solve(self.basis, v) is not None


def kernel_basis(m: Matrix) -> Subspace:
    """Basis of the null space {v : m v = 0}."""
    rows, pivots = _rref(m)
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    cols = []
    for f in free:
        v = [_ZERO] * m.cols
        v[f] = _ONE
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][f]
        cols.append(v)
    return Subspace(m.cols, Matrix.from_columns(cols, rows=m.cols))


def image_basis(m: Matrix) -> Subspace:
    """Basis of the column space, taken from pivot columns of m itself."""
    _, pivots = _rref(m)
    cols = [m.column(j) for j in pivots]
    return Subspace(m.rows, Matrix.from_columns(cols, rows=m.rows))


def solve(m: Matrix, b: Sequence) -> Vector | None:
    """Exact solution of m x = b, or None when b is outside the image.

    Free variables are set to zero, so the answer is one particular
    solution; add kernel vectors for the rest.
    """
    if len(b) != m.rows:
        raise ValidationError(f"right-hand side length {len(b)} != rows {m.rows}")
    bq = [parse_rational(x) for x in b]
    aug = m.hstack(Matrix.column_vector(bq))
    rows, pivots = _rref(aug)
    if m.cols in pivots:
        return None
    x = [_ZERO] * m.cols
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][m.cols]
    return tuple(x)


class GramForm:
    """A symmetric positive-definite bilinear form, certified exactly.

    Positivity is gated by an LDL^T factorization in rational arithmetic:
    the form is accepted iff every pivot is strictly positive.
    """

    __slots__ = ("dim", "matrix", "_inverse")

    def __init__(self, matrix: Matrix):
        if not matrix.is_square():
            raise ValidationError("Gram matrix must be square")
        if not matrix.is_symmetric():
            raise ValidationError("Gram matrix must be symmetric")
        if not _ldlt_positive(matrix):
            raise ValidationError("Gram matrix is not positive-definite (LDL^T pivot <= 0)")
        self.dim = matrix.rows
        self.matrix = matrix
        self._inverse: Matrix | None = None

    @classmethod
    def standard(cls, n: int) -> "GramForm":
        return cls(Matrix.identity(n))

    @classmethod
    def direct_sum(cls, a: "GramForm", b: "GramForm") -> "GramForm":
        """Block-diagonal sum of two certified forms.

        Skips the LDL^T gate: the pivots of a block-diagonal matrix are
        exactly the pivots of its blocks, which are already certified.
        """
        out = cls.__new__(cls)
        out.dim = a.dim + b.dim
        out.matrix = Matrix.direct_sum(a.matrix, b.matrix)
        out._inverse = None
        return out

    @property
    def inverse(self) -> Matrix:
        if self._inverse is None:
            self._inverse = matrix_inverse(self.matrix)
        return self._inverse

    def inner(self, u: Sequence, v: Sequence) -> Fraction:
        gv = self.matrix.mul_vec(v)
        return sum((parse_rational(a) * b for a, b in zip(u, gv)), _ZERO)

    def __eq__(self, other) -> bool:
        return isinstance(other, GramForm) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"GramForm(dim={self.dim})"


def _ldlt_positive(m: Matrix) -> bool:
    """True iff the symmetric matrix has an LDL^T factorization with all
    pivots > 0 (no pivoting needed exactly when the matrix is PD)."""
    n = m.rows
    a = [list(r) for r in m.data]
    for k in range(n):
        p = a[k][k]
        if p <= 0:
            return False
        for i in range(k + 1, n):
            f = a[i][k] / p
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return True


def gram_adjoint(d: Matrix, g_dom: GramForm, g_cod: GramForm) -> Matrix:
    """Adjoint of d with respect to the given forms:
    <d x, y>_cod = <x, d* y>_dom, realized as g_dom^-1 d^T g_cod."""
    if d.cols != g_dom.dim or d.rows != g_cod.dim:
        raise ValidationError(
            f"adjoint shape mismatch: d is {d.rows}x{d.cols}, "
            f"forms have dims {g_cod.dim}, {g_dom.dim}"
        )
    return g_dom.inverse @ d.transpose() @ g_cod.matrix


def orthogonal_projector(s: Subspace, g: GramForm) -> Matrix:
    """Projector onto s, orthogonal for g: P^2 = P, g P = P^T g, im P = s."""
    if s.ambient_dim != g.dim:
        raise ValidationError(
            f"projector shape mismatch: ambient {s.ambient_dim}, form dim {g.dim}"
        )
    if s.dim == 0:
        return Matrix.zeros(g.dim, g.dim)
    b = s.basis
    normal = b.transpose() @ g.matrix @ b
    return b @ matrix_inverse(normal) @ b.transpose() @ g.matrix
