"""Duplicate-free enumeration of subspaces of Mat_{n,p}(GF(q)).

Every k-dimensional subspace of K^m has exactly one RREF basis. Walking the pivot-column subsets
in lexicographic order and, inside each Schubert cell, every filling of the free entries (the
entries right of a pivot that are not themselves pivot columns) yields each subspace once. The
total is the Gaussian binomial [m choose k]_q.
"""

from itertools import combinations, product
import random
from typing import Iterator, List, Tuple

from app.algebra.field import Raw
from app.core.errors import UsageError
from app.spaces.subspace import (
    AffineMatrixSubspace,
    LinearMatrixSubspace,
    MatrixSpaceShape,
)


def gaussian_binomial(m: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^m (product formula)."""
    if k < 0 or k > m:
        return 0
    k = min(k, m - k)
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (m - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def count_subspaces(ambient_dim: int, codim: int, q: int) -> int:
    return gaussian_binomial(ambient_dim, ambient_dim - codim, q)


def _free_positions(pivots: Tuple[int, ...], m: int) -> List[Tuple[int, int]]:
    """(row, column) slots of an RREF profile that can hold arbitrary values."""
    pivot_set = set(pivots)
    return [(i, j) for i, c in enumerate(pivots) for j in range(c + 1, m) if j not in pivot_set]


def _cell_basis(pivots: Tuple[int, ...], free: List[Tuple[int, int]], values: Tuple[int, ...], m: int):
    rows = [[0] * m for _ in pivots]
    for i, c in enumerate(pivots):
        rows[i][c] = 1
    for (i, j), v in zip(free, values):
        rows[i][j] = v
    return tuple(tuple(r) for r in rows)


def _require_finite(shape: MatrixSpaceShape, codim: int) -> None:
    if not shape.field.is_finite:
        raise UsageError("subspace enumeration needs a finite field")
    if not 0 <= codim <= shape.ambient_dim:
        raise UsageError(f"codimension {codim} out of range [0, {shape.ambient_dim}]")


class SubspaceIterator:
    """Single-consumer stream of all codim-c linear subspaces, in lexicographic profile order."""

    def __init__(self, shape: MatrixSpaceShape, codim: int):
        _require_finite(shape, codim)
        self.shape = shape
        self.codim = codim
        self.count = count_subspaces(shape.ambient_dim, codim, shape.field.order)
        self.position = 0
        self._stream = self._generate()

    def _generate(self) -> Iterator[LinearMatrixSubspace]:
        m = self.shape.ambient_dim
        k = m - self.codim
        q = self.shape.field.order
        for pivots in combinations(range(m), k):
            free = _free_positions(pivots, m)
            for values in product(range(q), repeat=len(free)):
                yield LinearMatrixSubspace(self.shape, _cell_basis(pivots, free, values, m), pivots)

    def __iter__(self) -> "SubspaceIterator":
        return self

    def __next__(self) -> LinearMatrixSubspace:
        space = next(self._stream)
        self.position += 1
        return space

    def __len__(self) -> int:
        return self.count


def enumerate_subspaces(shape: MatrixSpaceShape, codim: int) -> SubspaceIterator:
    return SubspaceIterator(shape, codim)


def cosets(linear: LinearMatrixSubspace) -> Iterator[AffineMatrixSubspace]:
    """The q^codim cosets of a linear subspace, bases supported on the non-pivot coordinates."""
    shape = linear.shape
    q = shape.field.order
    m = shape.ambient_dim
    slots = linear.non_pivots()
    for values in product(range(q), repeat=len(slots)):
        vec: List[Raw] = [0] * m
        for j, v in zip(slots, values):
            vec[j] = v
        yield AffineMatrixSubspace(linear, shape.matrix(vec))


def enumerate_affine(shape: MatrixSpaceShape, codim: int) -> Iterator[AffineMatrixSubspace]:
    for linear in enumerate_subspaces(shape, codim):
        yield from cosets(linear)


def count_affine(ambient_dim: int, codim: int, q: int) -> int:
    return q**codim * count_subspaces(ambient_dim, codim, q)


def random_subspace(shape: MatrixSpaceShape, codim: int, rng: random.Random) -> LinearMatrixSubspace:
    """Uniform over all codim-c subspaces: pick a profile weighted by its cell size, then fill."""
    _require_finite(shape, codim)
    m = shape.ambient_dim
    q = shape.field.order
    profiles = list(combinations(range(m), m - codim))
    weights = [q ** len(_free_positions(piv, m)) for piv in profiles]
    pick = rng.randrange(sum(weights))
    for pivots, w in zip(profiles, weights):
        if pick < w:
            break
        pick -= w
    free = _free_positions(pivots, m)
    values = tuple(rng.randrange(q) for _ in free)
    return LinearMatrixSubspace(shape, _cell_basis(pivots, free, values, m), pivots)


def random_affine(shape: MatrixSpaceShape, codim: int, rng: random.Random) -> AffineMatrixSubspace:
    linear = random_subspace(shape, codim, rng)
    q = shape.field.order
    vec: List[Raw] = [0] * shape.ambient_dim
    for j in linear.non_pivots():
        vec[j] = rng.randrange(q)
    return AffineMatrixSubspace(linear, shape.matrix(vec))
