"""Linear and affine subspaces of Mat_{n,p}(K).

Matrices are identified with their row-major vectorization in K^{n*p}. A linear subspace is
stored as the RREF of a basis (no zero rows), which makes equal subspaces compare equal; an
affine subspace adds the coset representative whose coordinates vanish on the pivot positions.
"""

from dataclasses import dataclass
from itertools import product
import random
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from app.algebra.field import FieldDesc, Raw
from app.algebra.linalg import rref_rows
from app.algebra.matrix import Matrix
from app.core.config import settings
from app.core.errors import ResourceExhaustedError, ShapeMismatchError, UsageError

Vector = Tuple[Raw, ...]


@dataclass(frozen=True)
class MatrixSpaceShape:
    field: FieldDesc
    n: int
    p: int

    @property
    def ambient_dim(self) -> int:
        return self.n * self.p

    def check(self, M: Matrix) -> None:
        self.field.require_same(M.field)
        if M.shape != (self.n, self.p):
            raise ShapeMismatchError(f"expected a {self.n}x{self.p} matrix, got {M.nrows}x{M.ncols}")

    def zero(self) -> Matrix:
        return Matrix.zeros(self.field, self.n, self.p)

    def matrix(self, vec: Sequence[Raw]) -> Matrix:
        return Matrix.from_vector(self.field, self.n, self.p, vec)


@dataclass(frozen=True)
class LinearMatrixSubspace:
    shape: MatrixSpaceShape
    basis: Tuple[Vector, ...]
    pivots: Tuple[int, ...]

    @property
    def field(self) -> FieldDesc:
        return self.shape.field

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def codim(self) -> int:
        return self.shape.ambient_dim - self.dim

    @property
    def linear(self) -> "LinearMatrixSubspace":
        return self

    @property
    def base(self) -> Matrix:
        return self.shape.zero()

    def basis_matrix(self) -> Matrix:
        """The dim x (n*p) RREF basis as a matrix."""
        return Matrix(self.field, self.dim, self.shape.ambient_dim, self.basis)

    def basis_matrices(self) -> List[Matrix]:
        return [self.shape.matrix(v) for v in self.basis]

    def reduce(self, vec: Sequence[Raw]) -> Vector:
        """Subtract basis rows to clear every pivot coordinate; zero iff vec lies in the span."""
        f = self.field
        out = list(vec)
        for row, c in zip(self.basis, self.pivots):
            a = out[c]
            if a != 0:
                out = [f.sub(x, f.mul(a, y)) for x, y in zip(out, row)]
        return tuple(out)

    def non_pivots(self) -> Tuple[int, ...]:
        used = set(self.pivots)
        return tuple(j for j in range(self.shape.ambient_dim) if j not in used)

    def as_affine(self) -> "AffineMatrixSubspace":
        return AffineMatrixSubspace(self, self.shape.zero())


@dataclass(frozen=True)
class AffineMatrixSubspace:
    linear: LinearMatrixSubspace
    base: Matrix

    @classmethod
    def through(cls, linear: LinearMatrixSubspace, point: Matrix) -> "AffineMatrixSubspace":
        """The coset point + linear, with its canonical base."""
        linear.shape.check(point)
        return cls(linear, linear.shape.matrix(linear.reduce(point.vectorize())))

    @property
    def shape(self) -> MatrixSpaceShape:
        return self.linear.shape

    @property
    def field(self) -> FieldDesc:
        return self.linear.field

    @property
    def dim(self) -> int:
        return self.linear.dim

    @property
    def codim(self) -> int:
        return self.linear.codim

    @property
    def basis(self) -> Tuple[Vector, ...]:
        return self.linear.basis

    def as_affine(self) -> "AffineMatrixSubspace":
        return self


AnySubspace = Union[LinearMatrixSubspace, AffineMatrixSubspace]


def from_generators(shape: MatrixSpaceShape, mats: Sequence[Matrix]) -> LinearMatrixSubspace:
    """Canonical subspace spanned by the vectorized generators."""
    for M in mats:
        shape.check(M)
    reduced, pivots = rref_rows(shape.field, [M.vectorize() for M in mats], shape.ambient_dim)
    return LinearMatrixSubspace(shape, tuple(tuple(r) for r in reduced), tuple(pivots))


def from_basis_vectors(shape: MatrixSpaceShape, vectors: Sequence[Sequence[Raw]]) -> LinearMatrixSubspace:
    reduced, pivots = rref_rows(shape.field, vectors, shape.ambient_dim)
    return LinearMatrixSubspace(shape, tuple(tuple(r) for r in reduced), tuple(pivots))


def full_space(shape: MatrixSpaceShape) -> LinearMatrixSubspace:
    f = shape.field
    m = shape.ambient_dim
    basis = tuple(tuple(f.one if i == j else f.zero for j in range(m)) for i in range(m))
    return LinearMatrixSubspace(shape, basis, tuple(range(m)))


def zero_space(shape: MatrixSpaceShape) -> LinearMatrixSubspace:
    return LinearMatrixSubspace(shape, (), ())


def membership(V: AnySubspace, M: Matrix) -> bool:
    V.shape.check(M)
    vec = M.vectorize()
    if isinstance(V, AffineMatrixSubspace):
        f = V.field
        vec = tuple(f.sub(a, b) for a, b in zip(vec, V.base.vectorize()))
    return all(x == 0 for x in V.linear.reduce(vec))


def _element_count(V: AnySubspace) -> int:
    if not V.field.is_finite:
        raise UsageError("elements can only be listed over a finite field")
    return V.field.order ** V.dim


def element_vectors(V: AnySubspace, budget: Optional[int] = None) -> Iterator[Vector]:
    """Raw vectors of all q^dim members; coefficient tuples counted with the first basis row
    most significant, so the base point (or zero) comes first."""
    budget = settings.ELEMENT_BUDGET if budget is None else budget
    count = _element_count(V)
    if count > budget:
        raise ResourceExhaustedError(
            f"subspace has {count} elements, budget is {budget}", required=count, budget=budget
        )
    f = V.field
    q = f.order
    base = V.as_affine().base.vectorize()
    basis = V.basis
    m = V.shape.ambient_dim
    for coeffs in product(range(q), repeat=len(basis)):
        vec = list(base)
        for c, row in zip(coeffs, basis):
            if c:
                for j in range(m):
                    if row[j]:
                        vec[j] = (vec[j] + c * row[j]) % q
        yield tuple(vec)


def elements(V: AnySubspace, budget: Optional[int] = None) -> Iterator[Matrix]:
    shape = V.shape
    for vec in element_vectors(V, budget):
        yield shape.matrix(vec)


def random_element(V: AnySubspace, rng: random.Random, bound: int = 3) -> Matrix:
    """Uniform member over GF(q); small integer coefficients over the rationals."""
    f = V.field
    vec = list(V.as_affine().base.vectorize())
    for row in V.basis:
        c = f.coerce(rng.randrange(f.order) if f.is_finite else rng.randint(-bound, bound))
        vec = [f.add(x, f.mul(c, y)) for x, y in zip(vec, row)]
    return V.shape.matrix(vec)


def transport(V: AnySubspace, P: Matrix, Q: Matrix) -> AnySubspace:
    """Image {P @ M @ Q : M in V}."""
    gens = [P @ B @ Q for B in V.linear.basis_matrices()]
    image = from_generators(V.shape, gens)
    if isinstance(V, AffineMatrixSubspace):
        return AffineMatrixSubspace.through(image, P @ V.base @ Q)
    return image


def span_sum(V: LinearMatrixSubspace, mats: Sequence[Matrix]) -> LinearMatrixSubspace:
    return from_generators(V.shape, V.basis_matrices() + list(mats))


def block_projection(V: AnySubspace, rows: Sequence[int], cols: Sequence[int]) -> AffineMatrixSubspace:
    """Affine image of V under M -> M[rows, cols]."""
    shape = MatrixSpaceShape(V.field, len(rows), len(cols))
    gens = [B.submatrix(rows, cols) for B in V.linear.basis_matrices()]
    image = from_generators(shape, gens)
    return AffineMatrixSubspace.through(image, V.as_affine().base.submatrix(rows, cols))
