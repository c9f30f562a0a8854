from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple, Union

from app.algebra.field import FieldDesc, Raw, Scalar
from app.core.errors import ShapeMismatchError, UsageError

Rows = Tuple[Tuple[Raw, ...], ...]


@dataclass(frozen=True)
class Matrix:
    """Dense n x p matrix over an exact field, immutable.

    ``rows`` holds canonical raw field values; every constructor goes through
    :meth:`FieldDesc.coerce` or produces values from field arithmetic.
    """

    field: FieldDesc
    nrows: int
    ncols: int
    rows: Rows

    def __post_init__(self) -> None:
        if self.nrows < 0 or self.ncols < 0:
            raise UsageError("matrix dimensions must be non-negative")
        if len(self.rows) != self.nrows or any(len(r) != self.ncols for r in self.rows):
            raise ShapeMismatchError(
                f"entries do not form a {self.nrows}x{self.ncols} matrix"
            )

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rows(
        cls, field: FieldDesc, rows: Sequence[Sequence[Union[int, str, Raw]]], ncols: int | None = None
    ) -> "Matrix":
        coerced = tuple(tuple(field.coerce(x) for x in row) for row in rows)
        if ncols is None:
            ncols = len(coerced[0]) if coerced else 0
        return cls(field, len(coerced), ncols, coerced)

    @classmethod
    def zeros(cls, field: FieldDesc, n: int, p: int) -> "Matrix":
        z = field.zero
        return cls(field, n, p, tuple(tuple(z for _ in range(p)) for _ in range(n)))

    @classmethod
    def identity(cls, field: FieldDesc, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def unit(cls, field: FieldDesc, n: int, p: int, i: int, j: int) -> "Matrix":
        """The elementary matrix with a single 1 at (i, j), 0-based."""
        if not (0 <= i < n and 0 <= j < p):
            raise UsageError(f"position ({i}, {j}) outside a {n}x{p} matrix")
        z, o = field.zero, field.one
        return cls(
            field,
            n,
            p,
            tuple(tuple(o if (a, b) == (i, j) else z for b in range(p)) for a in range(n)),
        )

    @classmethod
    def from_vector(cls, field: FieldDesc, n: int, p: int, vec: Sequence[Raw]) -> "Matrix":
        """Inverse of :meth:`vectorize` (row-major)."""
        if len(vec) != n * p:
            raise ShapeMismatchError(f"vector of length {len(vec)} cannot fill a {n}x{p} matrix")
        return cls(field, n, p, tuple(tuple(vec[i * p:(i + 1) * p]) for i in range(n)))

    # -- access ------------------------------------------------------------

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def at(self, i: int, j: int) -> Raw:
        return self.rows[i][j]

    def entry(self, i: int, j: int) -> Scalar:
        return Scalar(self.field, self.rows[i][j])

    def vectorize(self) -> Tuple[Raw, ...]:
        """Row-major flattening; subspace canonicity depends on this order."""
        return tuple(x for row in self.rows for x in row)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.rows for x in row)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "Matrix":
        rows, cols = list(rows), list(cols)
        return Matrix(
            self.field,
            len(rows),
            len(cols),
            tuple(tuple(self.rows[i][j] for j in cols) for i in rows),
        )

    def column(self, j: int) -> Tuple[Raw, ...]:
        return tuple(row[j] for row in self.rows)

    # -- arithmetic --------------------------------------------------------

    def _check_same_shape(self, other: "Matrix") -> None:
        self.field.require_same(other.field)
        if self.shape != other.shape:
            raise ShapeMismatchError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        add = self.field.add
        return Matrix(
            self.field,
            self.nrows,
            self.ncols,
            tuple(tuple(add(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        sub = self.field.sub
        return Matrix(
            self.field,
            self.nrows,
            self.ncols,
            tuple(tuple(sub(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
        )

    def __neg__(self) -> "Matrix":
        neg = self.field.neg
        return Matrix(self.field, self.nrows, self.ncols, tuple(tuple(neg(a) for a in r) for r in self.rows))

    def scale(self, c: Union[Raw, Scalar]) -> "Matrix":
        c = self.field.coerce(c)
        mul = self.field.mul
        return Matrix(
            self.field, self.nrows, self.ncols, tuple(tuple(mul(c, a) for a in r) for r in self.rows)
        )

    def axpy(self, t: Raw, other: "Matrix") -> "Matrix":
        """self + t * other, with t a raw field value."""
        self._check_same_shape(other)
        f = self.field
        return Matrix(
            f,
            self.nrows,
            self.ncols,
            tuple(
                tuple(f.add(a, f.mul(t, b)) for a, b in zip(r, s))
                for r, s in zip(self.rows, other.rows)
            ),
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self.field.require_same(other.field)
        if self.ncols != other.nrows:
            raise ShapeMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        f = self.field
        cols = [other.column(j) for j in range(other.ncols)]
        if f.modulus is not None:
            m = f.modulus
            out = tuple(
                tuple(sum(a * b for a, b in zip(r, c)) % m for c in cols) for r in self.rows
            )
        else:
            out = tuple(tuple(sum((a * b for a, b in zip(r, c)), f.zero) for c in cols) for r in self.rows)
        return Matrix(f, self.nrows, other.ncols, out)

    def transpose(self) -> "Matrix":
        return Matrix(
            self.field,
            self.ncols,
            self.nrows,
            tuple(self.column(j) for j in range(self.ncols)),
        )

    def hstack(self, other: "Matrix") -> "Matrix":
        self.field.require_same(other.field)
        if self.nrows != other.nrows:
            raise ShapeMismatchError(f"cannot stack {self.shape} beside {other.shape}")
        return Matrix(
            self.field,
            self.nrows,
            self.ncols + other.ncols,
            tuple(r + s for r, s in zip(self.rows, other.rows)),
        )

    def vstack(self, other: "Matrix") -> "Matrix":
        self.field.require_same(other.field)
        if self.ncols != other.ncols:
            raise ShapeMismatchError(f"cannot stack {self.shape} above {other.shape}")
        return Matrix(self.field, self.nrows + other.nrows, self.ncols, self.rows + other.rows)

    def __str__(self) -> str:
        fmt = self.field.format
        return "\n".join(" ".join(fmt(x) for x in row) for row in self.rows)


def block_matrix(blocks: Sequence[Sequence[Matrix]]) -> Matrix:
    """Assemble [[A, C], [B, D]]-style block layouts."""
    out: Matrix | None = None
    for block_row in blocks:
        row = block_row[0]
        for b in block_row[1:]:
            row = row.hstack(b)
        out = row if out is None else out.vstack(row)
    if out is None:
        raise UsageError("empty block layout")
    return out
