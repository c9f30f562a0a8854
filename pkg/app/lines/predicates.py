"""Full-rank line predicate with certificates, and the side conditions of the square theorems."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from app.algebra.field import FieldDesc, Raw, Scalar
from app.algebra.gf2 import gf2_line_ranks, pack_row
from app.algebra.linalg import kernel_basis, rank, rank_rows
from app.algebra.matrix import Matrix
from app.algebra.pencil import PencilAnalysis, classify_line
from app.core.config import settings
from app.core.errors import ShapeMismatchError

# t values replayed over the rationals
RATIONAL_SPOT_CHECKS = (0, 1, -1, 2, -2, 3, -3, Fraction(1, 2), Fraction(-1, 2))


@dataclass(frozen=True)
class WitnessCertificate:
    """Evidence that every matrix of A + KN has rank p.

    Over GF(q) ``table`` lists rank(A + tN) for every t; over the rationals it holds spot checks and
    ``analysis`` carries the formal argument (no rational root of the minor gcd).
    """

    A: Matrix
    N: Matrix
    table: Tuple[Tuple[Raw, int], ...]
    analysis: Optional[PencilAnalysis] = None

    @property
    def field(self) -> FieldDesc:
        return self.A.field

    def validate(self) -> bool:
        """Replay the evidence from scratch with exactalg.rank only."""
        f = self.field
        p = self.A.ncols
        if self.A.shape != self.N.shape or self.A.nrows < p:
            return False
        for t, r in self.table:
            if r != p or rank(self.A.axpy(t, self.N)) != p:
                return False
        if f.is_finite:
            return sorted(t for t, _ in self.table) == list(f.elements())
        return classify_line(self.A, self.N).full_rank


@dataclass(frozen=True)
class LineCheck:
    full_rank: bool
    certificate: Optional[WitnessCertificate] = None
    failing_t: Optional[Scalar] = None


def _check_line_shapes(A: Matrix, N: Matrix) -> None:
    A.field.require_same(N.field)
    if A.shape != N.shape:
        raise ShapeMismatchError(f"A is {A.nrows}x{A.ncols} but N is {N.nrows}x{N.ncols}")
    if A.nrows < A.ncols:
        raise ShapeMismatchError(f"full-rank lines need n >= p, got {A.nrows}x{A.ncols}")


def line_full_rank(A: Matrix, N: Matrix) -> LineCheck:
    """Decide whether rank(A + tN) = p for every t in K; certificate or smallest failing t."""
    _check_line_shapes(A, N)
    f = A.field
    p = A.ncols
    if f.is_finite:
        table = []
        for t in f.elements():
            r = rank_rows(f, A.axpy(t, N).rows, p)
            if r < p:
                return LineCheck(False, failing_t=Scalar(f, t))
            table.append((t, r))
        return LineCheck(True, WitnessCertificate(A, N, tuple(table)))

    analysis = classify_line(A, N)
    if not analysis.full_rank:
        # identically-zero：每个 t 都降秩，取 t0 = 0
        t0 = analysis.witness if analysis.witness is not None else Scalar(f, f.zero)
        return LineCheck(False, failing_t=t0)
    table = tuple((f.coerce(t), rank(A.axpy(f.coerce(t), N))) for t in RATIONAL_SPOT_CHECKS)
    return LineCheck(True, WitnessCertificate(A, N, table, analysis))


class LineTester:
    """Full-rank test on raw row-major vectors for a fixed direction N (search hot path)."""

    def __init__(self, N: Matrix):
        self.N = N
        self.field = N.field
        self.n, self.p = N.shape
        self.packed = self.field.modulus == 2 and settings.GF2_PACKED
        if self.packed:
            self.n_bits = [pack_row(r) for r in N.rows]
        self.n_vec = N.vectorize()

    def _rows(self, vec: Sequence[Raw]):
        p = self.p
        return [vec[i * p:(i + 1) * p] for i in range(self.n)]

    def __call__(self, vec: Sequence[Raw]) -> bool:
        p = self.p
        f = self.field
        if self.packed:
            a_bits = [pack_row(r) for r in self._rows(vec)]
            return gf2_line_ranks(a_bits, self.n_bits) == (p, p)
        if f.is_finite:
            q = f.order
            for t in range(q):
                line = [(a + t * b) % q for a, b in zip(vec, self.n_vec)]
                if rank_rows(f, self._rows(line), p) < p:
                    return False
            return True
        A = Matrix.from_vector(f, self.n, p, vec)
        return classify_line(A, self.N).full_rank


def _check_square_pair(M: Matrix, N: Matrix) -> None:
    M.field.require_same(N.field)
    if not M.is_square or M.shape != N.shape:
        raise ShapeMismatchError(f"square matrices of equal size required, got {M.shape} and {N.shape}")


def _image_of_kernel(M: Matrix, N: Matrix) -> Tuple[int, int, int]:
    """(rank N, dim Ker N, rank [N | M K]) with K a kernel basis of N."""
    K = kernel_basis(N)
    r = N.nrows - K.ncols
    if K.ncols == 0:
        return r, 0, r
    return r, K.ncols, rank(N.hstack(M @ K))


def maps_ker_into_im(M: Matrix, N: Matrix) -> bool:
    """M(Ker N) is contained in im N."""
    _check_square_pair(M, N)
    r, _, r_aug = _image_of_kernel(M, N)
    return r_aug == r


def ker_coker_noninjective(M: Matrix, N: Matrix) -> bool:
    """The induced map Ker N -> K^n / im N, X -> class of MX, is non-injective."""
    _check_square_pair(M, N)
    r, k, r_aug = _image_of_kernel(M, N)
    return r_aug < r + k
