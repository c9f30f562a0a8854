"""Plain-text formats for matrices and subspaces.

Matrix::

    field gf 2          (or: field rat)
    size 3 2
    0 0
    1 0
    0 1

Subspace: the same two header lines, then ``dim d`` and d rows of n*p entries (row-major
vectorized basis matrices). An affine subspace appends a ``base`` line followed by n rows of p
entries. Blank lines and ``#`` comments are ignored everywhere.
"""

from pathlib import Path
from typing import List, Sequence, Tuple, Union

from app.algebra.field import FieldDesc, Raw, parse_field_header
from app.algebra.matrix import Matrix
from app.core.errors import ParseError, UsageError
from app.spaces.subspace import (
    AffineMatrixSubspace,
    AnySubspace,
    MatrixSpaceShape,
    from_basis_vectors,
)

PathLike = Union[str, Path]


class _Lines:
    """Meaningful lines with their 1-based line numbers."""

    def __init__(self, text: str):
        self._items: List[Tuple[int, str]] = []
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                self._items.append((number, line))
        self._pos = 0

    def next(self, what: str) -> Tuple[int, str]:
        if self._pos >= len(self._items):
            last = self._items[-1][0] if self._items else 0
            raise ParseError(f"unexpected end of input, expected {what}", line=last + 1)
        item = self._items[self._pos]
        self._pos += 1
        return item

    def peek(self) -> Tuple[int, str] | None:
        return self._items[self._pos] if self._pos < len(self._items) else None

    def expect_end(self) -> None:
        item = self.peek()
        if item is not None:
            raise ParseError(f"unexpected trailing content {item[1]!r}", line=item[0])


def _read_header(lines: _Lines) -> Tuple[FieldDesc, int, int]:
    number, line = lines.next("field header")
    try:
        field = parse_field_header(line)
    except UsageError as e:
        raise ParseError(e.message, line=number) from e
    number, line = lines.next("size line")
    parts = line.split()
    if len(parts) != 3 or parts[0] != "size":
        raise ParseError(f"expected 'size <n> <p>', got {line!r}", line=number)
    try:
        n, p = int(parts[1]), int(parts[2])
    except ValueError as e:
        raise ParseError(f"invalid size {line!r}", line=number) from e
    if n < 0 or p < 0:
        raise ParseError("sizes must be non-negative", line=number)
    return field, n, p


def _read_row(lines: _Lines, field: FieldDesc, width: int, what: str) -> List[Raw]:
    if width == 0:
        return []
    number, line = lines.next(what)
    tokens = line.split()
    if len(tokens) != width:
        raise ParseError(f"expected {width} entries, got {len(tokens)}", line=number)
    try:
        return [field.parse(tok) for tok in tokens]
    except ParseError as e:
        raise ParseError(e.message, line=number) from e


def _read_block(lines: _Lines, field: FieldDesc, n: int, p: int) -> Matrix:
    rows = [_read_row(lines, field, p, f"matrix row {i + 1}") for i in range(n)]
    return Matrix(field, n, p, tuple(tuple(r) for r in rows))


def parse_matrix(text: str) -> Matrix:
    lines = _Lines(text)
    field, n, p = _read_header(lines)
    M = _read_block(lines, field, n, p)
    lines.expect_end()
    return M


def parse_subspace(text: str) -> AnySubspace:
    lines = _Lines(text)
    field, n, p = _read_header(lines)
    shape = MatrixSpaceShape(field, n, p)
    number, line = lines.next("dim line")
    parts = line.split()
    if len(parts) != 2 or parts[0] != "dim":
        raise ParseError(f"expected 'dim <d>', got {line!r}", line=number)
    try:
        d = int(parts[1])
    except ValueError as e:
        raise ParseError(f"invalid dimension {parts[1]!r}", line=number) from e
    if not 0 <= d <= shape.ambient_dim:
        raise ParseError(f"dimension {d} out of range [0, {shape.ambient_dim}]", line=number)
    vectors = [_read_row(lines, field, shape.ambient_dim, f"basis row {i + 1}") for i in range(d)]
    linear = from_basis_vectors(shape, vectors)
    if linear.dim != d:
        raise ParseError(f"the {d} basis rows span only a {linear.dim}-dimensional space", line=number)
    item = lines.peek()
    if item is None:
        return linear
    number, line = lines.next("base section")
    if line != "base":
        raise ParseError(f"expected 'base', got {line!r}", line=number)
    base = _read_block(lines, field, n, p)
    lines.expect_end()
    return AffineMatrixSubspace.through(linear, base)


def _format_row(field: FieldDesc, row: Sequence[Raw]) -> str:
    return " ".join(field.format(x) for x in row)


def _header(field: FieldDesc, n: int, p: int) -> List[str]:
    return [field.header(), f"size {n} {p}"]


def format_matrix(M: Matrix) -> str:
    out = _header(M.field, M.nrows, M.ncols)
    out.extend(_format_row(M.field, row) for row in M.rows)
    return "\n".join(out) + "\n"


def format_subspace(V: AnySubspace) -> str:
    shape = V.shape
    out = _header(shape.field, shape.n, shape.p)
    out.append(f"dim {V.dim}")
    out.extend(_format_row(shape.field, row) for row in V.basis)
    if isinstance(V, AffineMatrixSubspace):
        out.append("base")
        out.extend(_format_row(shape.field, row) for row in V.base.rows)
    return "\n".join(out) + "\n"


def _read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror or e}") from e
    except UnicodeDecodeError as e:
        line = e.object[: e.start].count(b"\n") + 1
        raise ParseError(f"{path} is not valid UTF-8 text", line=line) from e


def read_matrix(path: PathLike) -> Matrix:
    return parse_matrix(_read_text(path))


def read_subspace(path: PathLike) -> AnySubspace:
    return parse_subspace(_read_text(path))


def write_text(path: PathLike, text: str) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")
    return target


def write_matrix(path: PathLike, M: Matrix) -> Path:
    return write_text(path, format_matrix(M))


def write_subspace(path: PathLike, V: AnySubspace) -> Path:
    return write_text(path, format_subspace(V))


__all__ = [
    "format_matrix",
    "format_subspace",
    "parse_matrix",
    "parse_subspace",
    "read_matrix",
    "read_subspace",
    "write_matrix",
    "write_subspace",
    "write_text",
]
