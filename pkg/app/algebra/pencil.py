"""Formal analysis of the pencil A + tN: det(A + tN) as a polynomial, gcd of maximal minors for
rectangular pencils, and the line classification used by the full-rank predicates."""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence

from app.algebra.field import FieldDesc, Raw, Scalar
from app.algebra.linalg import det_raw, rank_rows
from app.algebra.matrix import Matrix
from app.algebra.polynomial import Polynomial, poly_gcd
from app.core.errors import ShapeMismatchError, UsageError
from app.core.logging import get_logger

logger = get_logger(__name__)


class LineClass(str, Enum):
    IDENTICALLY_ZERO = "identically-zero"
    CONSTANT_NONZERO = "constant-nonzero"
    NONCONSTANT_NO_ROOT = "nonconstant-no-root-in-K"
    HAS_ROOT = "has-root-in-K"


class DetMethod(str, Enum):
    AUTO = "auto"
    BAREISS = "bareiss"
    COFACTOR = "cofactor"
    INTERPOLATION = "interpolation"


@dataclass(frozen=True)
class PencilAnalysis:
    """Formal polynomial of the line plus its classification.

    ``poly`` is det(A + tN) for square pencils and the monic gcd of the maximal minors otherwise.
    ``witness`` is set iff the classification is HAS_ROOT.
    """

    poly: Polynomial
    classification: LineClass
    witness: Optional[Scalar] = None

    @property
    def full_rank(self) -> bool:
        return self.classification in (LineClass.CONSTANT_NONZERO, LineClass.NONCONSTANT_NO_ROOT)


def _check_pair(A: Matrix, N: Matrix) -> None:
    A.field.require_same(N.field)
    if A.shape != N.shape:
        raise ShapeMismatchError(f"A is {A.nrows}x{A.ncols} but N is {N.nrows}x{N.ncols}")


def _pencil_entries(A: Matrix, N: Matrix) -> List[List[Polynomial]]:
    f = A.field
    return [
        [Polynomial.linear(f, a, b) for a, b in zip(ra, rn)] for ra, rn in zip(A.rows, N.rows)
    ]


def _det_bareiss(field: FieldDesc, entries: List[List[Polynomial]]) -> Polynomial:
    """Bareiss elimination in K[t]; every division is exact."""
    n = len(entries)
    if n == 0:
        return Polynomial.constant(field, field.one)
    work = [row[:] for row in entries]
    negate = False
    prev = Polynomial.constant(field, field.one)
    for k in range(n - 1):
        if work[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not work[i][k].is_zero()), None)
            if swap is None:
                return Polynomial.zero(field)
            work[k], work[swap] = work[swap], work[k]
            negate = not negate
        pivot = work[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                work[i][j] = (work[i][j] * pivot - work[i][k] * work[k][j]).exact_div(prev)
        prev = pivot
    result = work[n - 1][n - 1]
    return -result if negate else result


def _det_cofactor(field: FieldDesc, entries: List[List[Polynomial]]) -> Polynomial:
    n = len(entries)
    if n == 0:
        return Polynomial.constant(field, field.one)
    if n == 1:
        return entries[0][0]
    total = Polynomial.zero(field)
    for j in range(n):
        if entries[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in entries[1:]]
        term = entries[0][j] * _det_cofactor(field, minor)
        total = total - term if j % 2 else total + term
    return total


def _interpolate(field: FieldDesc, xs: Sequence[Raw], ys: Sequence[Raw]) -> Polynomial:
    """Newton divided differences; xs must be pairwise distinct."""
    coef = list(ys)
    k = len(xs)
    for level in range(1, k):
        for i in range(k - 1, level - 1, -1):
            coef[i] = field.div(field.sub(coef[i], coef[i - 1]), field.sub(xs[i], xs[i - level]))
    result = Polynomial.constant(field, coef[-1]) if coef else Polynomial.zero(field)
    for i in range(k - 2, -1, -1):
        result = result * Polynomial.linear(field, field.neg(xs[i]), field.one) + Polynomial.constant(
            field, coef[i]
        )
    return result


def _det_interpolation(A: Matrix, N: Matrix) -> Polynomial:
    f = A.field
    n = A.nrows
    if f.is_finite and f.order <= n:
        raise UsageError(f"interpolation needs more than {n} field elements, {f} has {f.order}")
    xs = [f.coerce(k) for k in range(n + 1)]
    ys = [det_raw(f, A.axpy(x, N).rows) for x in xs]
    return _interpolate(f, xs, ys)


def det_pencil(A: Matrix, N: Matrix, method: DetMethod = DetMethod.AUTO) -> Polynomial:
    """The exact polynomial det(A + tN)."""
    _check_pair(A, N)
    if not A.is_square:
        raise ShapeMismatchError(f"square pencil required, got {A.nrows}x{A.ncols}")
    f = A.field
    if method is DetMethod.AUTO:
        large_enough = not f.is_finite or f.order > A.nrows
        method = DetMethod.INTERPOLATION if large_enough else DetMethod.BAREISS
    if method is DetMethod.INTERPOLATION:
        return _det_interpolation(A, N)
    entries = _pencil_entries(A, N)
    if method is DetMethod.COFACTOR:
        return _det_cofactor(f, entries)
    return _det_bareiss(f, entries)


def maximal_minors(A: Matrix, N: Matrix) -> List[Polynomial]:
    """All C(n, p) maximal minors of A + tN as polynomials, rows chosen in lexicographic order."""
    _check_pair(A, N)
    n, p = A.shape
    if n < p:
        raise ShapeMismatchError(f"maximal minors need n >= p, got {n}x{p}")
    minors = []
    for rows in combinations(range(n), p):
        sub_a = A.submatrix(rows, range(p))
        sub_n = N.submatrix(rows, range(p))
        minors.append(det_pencil(sub_a, sub_n))
    return minors


def minor_gcd(A: Matrix, N: Matrix) -> Polynomial:
    """Monic gcd of the maximal minors of A + tN; zero iff every minor vanishes identically."""
    g = Polynomial.zero(A.field)
    for m in maximal_minors(A, N):
        g = poly_gcd(g, m)
        if g.degree == 0:
            break
    return g


def _divisors(m: int) -> List[int]:
    m = abs(m)
    small, large = [], []
    d = 1
    while d * d <= m:
        if m % d == 0:
            small.append(d)
            if d * d != m:
                large.append(m // d)
        d += 1
    return small + large[::-1]


def rational_roots(g: Polynomial) -> List[Scalar]:
    """Exactly the rational roots of g (rational-root theorem), in deterministic order."""
    if g.field.is_finite:
        raise UsageError("rational_roots works over the rationals")
    if g.is_zero():
        raise UsageError("the zero polynomial has every element as a root")
    ints = g.primitive_integer_form()
    roots: set = set()
    low = 0
    while ints[low] == 0:
        low += 1
    if low:
        roots.add(Fraction(0))
    ints = ints[low:]
    if len(ints) > 1:
        for u in _divisors(ints[0]):
            for v in _divisors(ints[-1]):
                for cand in (Fraction(u, v), Fraction(-u, v)):
                    if cand not in roots and g(cand) == 0:
                        roots.add(cand)
    ordered = sorted(roots, key=g.field.sort_key)
    return [Scalar(g.field, r) for r in ordered]


def classify_line(A: Matrix, N: Matrix) -> PencilAnalysis:
    """Classify the line A + KN; ``full_rank`` iff every matrix on it has rank p."""
    _check_pair(A, N)
    n, p = A.shape
    if n < p:
        raise ShapeMismatchError(f"line analysis needs n >= p, got {n}x{p}")
    f = A.field
    poly = det_pencil(A, N) if n == p else minor_gcd(A, N)

    if f.is_finite:
        # 有限域：直接枚举所有 t
        for t in f.elements():
            if rank_rows(f, A.axpy(t, N).rows, p) < p:
                return PencilAnalysis(poly, LineClass.HAS_ROOT, Scalar(f, t))
        cls = LineClass.CONSTANT_NONZERO if poly.is_constant() else LineClass.NONCONSTANT_NO_ROOT
        return PencilAnalysis(poly, cls)

    if poly.is_zero():
        return PencilAnalysis(poly, LineClass.IDENTICALLY_ZERO)
    roots = rational_roots(poly)
    if roots:
        return PencilAnalysis(poly, LineClass.HAS_ROOT, roots[0])
    if poly.is_constant():
        return PencilAnalysis(poly, LineClass.CONSTANT_NONZERO)
    return PencilAnalysis(poly, LineClass.NONCONSTANT_NO_ROOT)


def charpoly(M: Matrix) -> Polynomial:
    """det(tI - M), the characteristic polynomial."""
    return det_pencil(-M, Matrix.identity(M.field, M.nrows))


def has_constant_nonzero_det(A: Matrix, N: Matrix) -> bool:
    """det(A + tN) is a nonzero constant polynomial (strictly stronger than a full-rank line)."""
    d = det_pencil(A, N)
    return d.degree == 0
