"""Exact linear algebra over :class:`FieldDesc`: rank, determinant, RREF, kernels and the
equivalence transforms used to move a direction N to its canonical block form."""

import random
from typing import List, Sequence, Tuple

from app.algebra.field import FieldDesc, Raw, Scalar
from app.algebra.gf2 import gf2_rank, pack_rows
from app.algebra.matrix import Matrix, block_matrix
from app.core.config import settings
from app.core.errors import ShapeMismatchError, UsageError


# -- elimination kernels on raw rows ---------------------------------------


def rank_rows(field: FieldDesc, rows: Sequence[Sequence[Raw]], ncols: int) -> int:
    """Rank of raw rows. Hot path of every search; GF(2) goes through packed bitsets."""
    if field.modulus == 2 and settings.GF2_PACKED:
        return gf2_rank(pack_rows(rows))
    work = [list(r) for r in rows]
    m = len(work)
    rank = 0
    p = field.modulus
    for col in range(ncols):
        if rank == m:
            break
        pivot = None
        for i in range(rank, m):
            if work[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        prow = work[rank]
        inv = field.inv(prow[col])
        for i in range(rank + 1, m):
            row = work[i]
            if row[col] != 0:
                c = row[col] * inv
                if p is not None:
                    c %= p
                    for j in range(col, ncols):
                        row[j] = (row[j] - c * prow[j]) % p
                else:
                    for j in range(col, ncols):
                        row[j] = row[j] - c * prow[j]
        rank += 1
    return rank


def rref_rows(field: FieldDesc, rows: Sequence[Sequence[Raw]], ncols: int) -> Tuple[List[List[Raw]], List[int]]:
    """Gauss-Jordan elimination; returns (nonzero RREF rows, pivot columns)."""
    work = [list(r) for r in rows]
    m = len(work)
    pivots: List[int] = []
    r = 0
    for col in range(ncols):
        if r == m:
            break
        pivot = None
        for i in range(r, m):
            if work[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = field.inv(work[r][col])
        work[r] = [field.mul(inv, x) for x in work[r]]
        prow = work[r]
        for i in range(m):
            if i != r and work[i][col] != 0:
                c = work[i][col]
                work[i] = [field.sub(x, field.mul(c, y)) for x, y in zip(work[i], prow)]
        pivots.append(col)
        r += 1
    return work[:r], pivots


# -- public operations -------------------------------------------------------


def rank(M: Matrix) -> int:
    return rank_rows(M.field, M.rows, M.ncols)


def rref(M: Matrix) -> Tuple[Matrix, Tuple[int, ...]]:
    """Reduced row-echelon form (same shape as M, zero rows at the bottom) and pivot columns."""
    reduced, pivots = rref_rows(M.field, M.rows, M.ncols)
    z = M.field.zero
    padding = [[z] * M.ncols for _ in range(M.nrows - len(reduced))]
    return Matrix.from_rows(M.field, reduced + padding, M.ncols), tuple(pivots)


def _require_square(M: Matrix) -> None:
    if not M.is_square:
        raise ShapeMismatchError(f"square matrix required, got {M.nrows}x{M.ncols}")


def det_raw(field: FieldDesc, rows: Sequence[Sequence[Raw]]) -> Raw:
    """Bareiss fraction-free elimination; over GF(p) the exact divisions are inverse products."""
    n = len(rows)
    if n == 0:
        return field.one
    work = [list(r) for r in rows]
    sign = 1
    prev = field.one
    for k in range(n - 1):
        if work[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if work[i][k] != 0), None)
            if swap is None:
                return field.zero
            work[k], work[swap] = work[swap], work[k]
            sign = -sign
        pivot = work[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = field.sub(field.mul(work[i][j], pivot), field.mul(work[i][k], work[k][j]))
                work[i][j] = field.div(num, prev)
        prev = pivot
    result = work[n - 1][n - 1]
    return result if sign > 0 else field.neg(result)


def det(M: Matrix) -> Scalar:
    _require_square(M)
    return Scalar(M.field, det_raw(M.field, M.rows))


def kernel_basis(M: Matrix) -> Matrix:
    """Right kernel of M as the columns of a p x k matrix (k = p - rank M), one column per free variable."""
    f = M.field
    reduced, pivots = rref_rows(f, M.rows, M.ncols)
    free = [j for j in range(M.ncols) if j not in set(pivots)]
    columns = []
    for j in free:
        v = [f.zero] * M.ncols
        v[j] = f.one
        for i, c in enumerate(pivots):
            v[c] = f.neg(reduced[i][j])
        columns.append(v)
    if not columns:
        return Matrix.zeros(f, M.ncols, 0)
    return Matrix.from_rows(f, columns).transpose()


def inverse(M: Matrix) -> Matrix:
    _require_square(M)
    n = M.nrows
    reduced, pivots = rref_rows(M.field, M.hstack(Matrix.identity(M.field, n)).rows, 2 * n)
    if pivots[:n] != list(range(n)):
        raise UsageError("matrix is singular")
    return Matrix.from_rows(M.field, [row[n:] for row in reduced], n)


def adjugate(M: Matrix) -> Matrix:
    """Transpose of the cofactor matrix; M @ adjugate(M) = det(M) I."""
    _require_square(M)
    f = M.field
    n = M.nrows
    if n == 0:
        return M
    if n == 1:
        return Matrix.identity(f, 1)
    cof = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = [[M.rows[a][b] for b in range(n) if b != j] for a in range(n) if a != i]
            d = det_raw(f, minor)
            row.append(d if (i + j) % 2 == 0 else f.neg(d))
        cof.append(row)
    return Matrix.from_rows(f, cof).transpose()


def block_decompose(M: Matrix, r: int) -> Tuple[Matrix, Matrix, Matrix, Matrix]:
    """Split a square M = [[A, C], [B, D]] with A of size r x r."""
    _require_square(M)
    n = M.nrows
    if not 0 <= r <= n:
        raise UsageError(f"block size {r} out of range [0, {n}]")
    head, tail = range(r), range(r, n)
    return (
        M.submatrix(head, head),
        M.submatrix(head, tail),
        M.submatrix(tail, head),
        M.submatrix(tail, tail),
    )


def is_invertible(M: Matrix) -> bool:
    return M.is_square and rank(M) == M.nrows


def equivalence_apply(P: Matrix, M: Matrix, Q: Matrix) -> Matrix:
    """P @ M @ Q for invertible P (n x n) and Q (p x p)."""
    if P.shape != (M.nrows, M.nrows) or Q.shape != (M.ncols, M.ncols):
        raise ShapeMismatchError(
            f"transforms {P.shape}, {Q.shape} do not fit a {M.nrows}x{M.ncols} matrix"
        )
    if not is_invertible(P) or not is_invertible(Q):
        raise UsageError("equivalence transforms must be invertible")
    return P @ M @ Q


def canonical_N(field: FieldDesc, n: int, p: int, r: int) -> Matrix:
    """The block matrix [[I_r, 0], [0, 0]] of size n x p."""
    if not 0 <= r <= min(n, p):
        raise UsageError(f"rank {r} out of range [0, {min(n, p)}]")
    z, o = field.zero, field.one
    return Matrix(
        field, n, p, tuple(tuple(o if i == j and i < r else z for j in range(p)) for i in range(n))
    )


def equivalence_to_canonical(N: Matrix) -> Tuple[Matrix, Matrix]:
    """Invertible (P, Q) with P @ N @ Q = canonical_N(n, p, rank N)."""
    f = N.field
    n, p = N.shape
    reduced, pivots = rref_rows(f, N.hstack(Matrix.identity(f, n)).rows, p + n)
    # 左侧即 N 的 RREF，右侧为行变换 P
    P = Matrix.from_rows(f, [row[p:] for row in reduced], n)
    R = [row[:p] for row in reduced]
    pivots = [c for c in pivots if c < p]
    r = len(pivots)

    q1 = [[f.one if i == j else f.zero for j in range(p)] for i in range(p)]
    non_pivots = [j for j in range(p) if j not in set(pivots)]
    for i, c in enumerate(pivots):
        for j in non_pivots:
            q1[c][j] = f.neg(R[i][j])
    q2 = [[f.zero] * p for _ in range(p)]
    for i, c in enumerate(pivots):
        q2[c][i] = f.one
    for k, j in enumerate(non_pivots):
        q2[j][r + k] = f.one
    Q = Matrix.from_rows(f, q1, p) @ Matrix.from_rows(f, q2, p)
    return P, Q


def random_matrix(field: FieldDesc, n: int, p: int, rng: random.Random, bound: int = 3) -> Matrix:
    """Uniform over GF(q); integers in [-bound, bound] over the rationals."""
    if field.is_finite:
        q = field.order
        return Matrix.from_rows(field, [[rng.randrange(q) for _ in range(p)] for _ in range(n)], p)
    return Matrix.from_rows(field, [[rng.randint(-bound, bound) for _ in range(p)] for _ in range(n)], p)


def random_invertible(field: FieldDesc, n: int, rng: random.Random) -> Matrix:
    while True:
        M = random_matrix(field, n, n, rng)
        if is_invertible(M):
            return M


def random_rank_matrix(field: FieldDesc, n: int, p: int, r: int, rng: random.Random) -> Matrix:
    """A random n x p matrix of rank exactly r (a random conjugate of canonical_N)."""
    return random_invertible(field, n, rng) @ canonical_N(field, n, p, r) @ random_invertible(field, p, rng)


__all__ = [
    "rank",
    "rank_rows",
    "rref",
    "rref_rows",
    "det",
    "det_raw",
    "kernel_basis",
    "inverse",
    "adjugate",
    "block_decompose",
    "block_matrix",
    "is_invertible",
    "equivalence_apply",
    "canonical_N",
    "equivalence_to_canonical",
    "random_matrix",
    "random_invertible",
    "random_rank_matrix",
]
