"""Explicit constructions: Lemma-style witnesses, the sharpness family, the affine hyperplanes of
the square remarks and the extremal bounded-rank space.

Every generator emits N in canonical block form. Indices in docstrings are 1-based, code is 0-based.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional

from app.algebra.field import FieldDesc, GF
from app.algebra.linalg import adjugate, block_decompose, canonical_N, det, rank
from app.algebra.matrix import Matrix
from app.algebra.pencil import det_pencil
from app.algebra.polynomial import Polynomial
from app.core.errors import UsageError
from app.spaces.subspace import (
    AffineMatrixSubspace,
    AnySubspace,
    LinearMatrixSubspace,
    MatrixSpaceShape,
    from_generators,
    full_space,
)


class ExampleName(str, Enum):
    LEMMA1 = "lemma1"
    SHARPNESS = "sharpness"
    REMARK1 = "remark1"
    REMARK2_F2 = "remark2-f2"
    FLANDERS_EXTREMAL = "flanders-extremal"


def _units(field: FieldDesc, n: int, p: int, positions) -> List[Matrix]:
    return [Matrix.unit(field, n, p, i, j) for i, j in positions]


def _sum(field: FieldDesc, n: int, p: int, mats: List[Matrix]) -> Matrix:
    out = Matrix.zeros(field, n, p)
    for M in mats:
        out = out + M
    return out


def lemma1_witness(n: int, p: int, r: int, field: FieldDesc) -> Matrix:
    """A with every matrix of A + K canonical_N(n, p, r) of rank p.

    n > p: A = sum_{j=1..p} E_{j+1,j}. n = p: A = E_{1,n} + sum_{j=1..n-1} E_{j+1,j}.
    """
    if not n >= p >= 1:
        raise UsageError(f"need n >= p >= 1, got n={n}, p={p}")
    if not 0 <= r < p:
        raise UsageError(f"need 0 <= r < p, got r={r}, p={p}")
    if n > p:
        positions = [(j + 1, j) for j in range(p)]
    else:
        positions = [(0, n - 1)] + [(j + 1, j) for j in range(n - 1)]
    return _sum(field, n, p, _units(field, n, p, positions))


def sharpness_example(n: int, p: int, field: FieldDesc) -> tuple[LinearMatrixSubspace, Matrix]:
    """S = matrices whose first column vanishes below row 1, N = [[I_{p-1}, 0], [0, 0]].

    codim S = n - 1 and no A in S spans a full-rank line: some A + tN has a zero first column.
    """
    if p < 2:
        raise UsageError(f"the sharpness example needs p >= 2, got p={p}")
    if n < p:
        raise UsageError(f"need n >= p, got n={n}, p={p}")
    shape = MatrixSpaceShape(field, n, p)
    positions = [(0, 0)] + [(i, j) for i in range(n) for j in range(1, p)]
    S = from_generators(shape, _units(field, n, p, positions))
    return S, canonical_N(field, n, p, p - 1)


def remark1_example(n: int, field: FieldDesc) -> tuple[AffineMatrixSubspace, Matrix]:
    """The affine hyperplane {M : M_{n,n} = 1} with N = [[I_{n-1}, 0], [0, 0]].

    Every det(A + tN) there is monic of degree n - 1, so the Ker N -> im N side condition cannot
    be dropped.
    """
    if n < 2:
        raise UsageError(f"the hyperplane example needs n >= 2, got n={n}")
    shape = MatrixSpaceShape(field, n, n)
    positions = [(i, j) for i in range(n) for j in range(n) if (i, j) != (n - 1, n - 1)]
    linear = from_generators(shape, _units(field, n, n, positions))
    space = AffineMatrixSubspace.through(linear, Matrix.unit(field, n, n, n - 1, n - 1))
    return space, canonical_N(field, n, n, n - 1)


def remark2_f2_example() -> tuple[AffineMatrixSubspace, Matrix]:
    """Over GF(2), n = 3: matrices with entry (1,3) = a and entry (3,2) = a + 1, others free.

    Codimension 1; no member has a constant nonzero det(M + tN) for N = diag(1, 1, 0).
    """
    f = GF(2)
    shape = MatrixSpaceShape(f, 3, 3)
    free = [(i, j) for i in range(3) for j in range(3) if (i, j) not in {(0, 2), (2, 1)}]
    gens = _units(f, 3, 3, free) + [Matrix.unit(f, 3, 3, 0, 2) + Matrix.unit(f, 3, 3, 2, 1)]
    linear = from_generators(shape, gens)
    # a = 0
    space = AffineMatrixSubspace.through(linear, Matrix.unit(f, 3, 3, 2, 1))
    return space, canonical_N(f, 3, 3, 2)


def flanders_extremal(n: int, p: int, r: int, field: FieldDesc) -> LinearMatrixSubspace:
    """Matrices vanishing on the last p - r columns: dim n*r, every member of rank <= r."""
    if not 0 <= r <= p <= n:
        raise UsageError(f"need 0 <= r <= p <= n, got n={n}, p={p}, r={r}")
    shape = MatrixSpaceShape(field, n, p)
    positions = [(i, j) for i in range(n) for j in range(r)]
    return from_generators(shape, _units(field, n, p, positions))


def adjugate_expansion(M: Matrix) -> Polynomial:
    """det(M + tN) for N = canonical_N(n, n, n-1), expanded through the leading block.

    With M = [[A, C], [B, d]] and A of size n-1:
    det(M + tN) = d det(A + tI) - B (A + tI)^ad C.
    For n = 3 the adjugate is linear, (A + tI)^ad = A^ad + tI, which gives
    d det(A + tI) - t BC - B A^ad C (the signs vanish in characteristic 2).
    """
    f = M.field
    n = M.nrows
    if not M.is_square or n < 2:
        raise UsageError("the expansion needs a square matrix of size >= 2")
    A, C, B, D = block_decompose(M, n - 1)
    d = D.at(0, 0)
    I = Matrix.identity(f, n - 1)
    head = det_pencil(A, I).scale(d)
    if n == 3:
        bc = (B @ C).at(0, 0)
        bac = (B @ adjugate(A) @ C).at(0, 0)
        return head - Polynomial.make(f, [bac, bc])
    # 一般情形：加边行列式 det([[A + tI, C], [B, 0]]) = -B adj(A + tI) C
    return head + det_pencil(_bordered(A, B, C), canonical_N(f, n, n, n - 1))


def _bordered(A: Matrix, B: Matrix, C: Matrix) -> Matrix:
    """[[A, C], [B, 0]]; det of the bordered pencil is -B adj(A + tI) C."""
    f = A.field
    top = A.hstack(C)
    bottom = B.hstack(Matrix.zeros(f, 1, 1))
    return top.vstack(bottom)


@dataclass(frozen=True)
class GalleryItem:
    name: ExampleName
    space: AnySubspace
    N: Matrix
    A: Optional[Matrix] = None


def build_example(
    name: ExampleName, field: FieldDesc, n: int = 3, p: int = 2, r: int = 1
) -> GalleryItem:
    """Dispatch used by ``gen``; unused size parameters are ignored per example."""
    if name is ExampleName.LEMMA1:
        A = lemma1_witness(n, p, r, field)
        return GalleryItem(name, full_space(MatrixSpaceShape(field, n, p)), canonical_N(field, n, p, r), A)
    if name is ExampleName.SHARPNESS:
        S, N = sharpness_example(n, p, field)
        return GalleryItem(name, S, N)
    if name is ExampleName.REMARK1:
        space, N = remark1_example(n, field)
        return GalleryItem(name, space, N)
    if name is ExampleName.REMARK2_F2:
        space, N = remark2_f2_example()
        return GalleryItem(name, space, N)
    if name is ExampleName.FLANDERS_EXTREMAL:
        S = flanders_extremal(n, p, r, field)
        return GalleryItem(name, S, canonical_N(field, n, p, r))
    raise UsageError(f"unknown example {name}")


def example_properties(item: GalleryItem) -> Dict[str, object]:
    """The advertised numbers of an example, recomputed (codim, rank of N, det of A if square)."""
    props: Dict[str, object] = {"codim": item.space.codim, "dim": item.space.dim}
    props["rank_N"] = rank(item.N)
    if item.A is not None and item.A.is_square:
        props["det_A"] = str(det(item.A))
    return props
