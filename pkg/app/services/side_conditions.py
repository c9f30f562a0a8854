"""Side conditions of the square theorems, evaluated over a whole affine subspace.

Both conditions ask whether *some* member M of the subspace satisfies a predicate in (M, N). For
the canonical N = [[I_r, 0], [0, 0]] they only involve the lower-right (n - r) block D(M):

- M maps Ker N into im N  iff  D(M) = 0
- Ker N -> K^n / im N, X -> [MX], is non-injective  iff  D(M) is singular

so the scan runs over the projection of the subspace onto that block. Other directions fall back
to scanning the members themselves.
"""

from enum import Enum
from typing import Optional

from app.algebra.linalg import canonical_N, rank, rank_rows
from app.algebra.matrix import Matrix
from app.core.config import settings
from app.core.logging import get_logger
from app.lines.predicates import ker_coker_noninjective, maps_ker_into_im
from app.spaces.subspace import AnySubspace, block_projection, element_vectors, elements, membership

logger = get_logger(__name__)


class SideCondition(str, Enum):
    KER_INTO_IM = "ker-into-im"
    NONINJECTIVE = "noninjective"


_PREDICATES = {
    SideCondition.KER_INTO_IM: maps_ker_into_im,
    SideCondition.NONINJECTIVE: ker_coker_noninjective,
}


def _closed_form(V: AnySubspace, r: int, condition: SideCondition, budget: int) -> bool:
    n = V.shape.n
    block = list(range(r, n))
    if not block:
        # Ker N = 0：映射恒为单射，且 Ker N 平凡地落入 im N
        return condition is SideCondition.KER_INTO_IM
    D = block_projection(V, block, block)
    if condition is SideCondition.KER_INTO_IM:
        return membership(D, D.shape.zero())
    if D.dim == len(block) ** 2:
        return True
    m = len(block)
    f = V.field
    for vec in element_vectors(D, budget):
        if rank_rows(f, [vec[i * m:(i + 1) * m] for i in range(m)], m) < m:
            return True
    return False


def side_condition_holds(
    V: AnySubspace, N: Matrix, condition: SideCondition, budget: Optional[int] = None
) -> bool:
    """Whether some member M of V satisfies the condition for the direction N."""
    budget = settings.SIDE_CONDITION_BUDGET if budget is None else budget
    V.shape.check(N)
    n = N.nrows
    r = rank(N)
    if N == canonical_N(N.field, n, N.ncols, r):
        return _closed_form(V, r, condition, budget)
    return side_condition_by_scan(V, N, condition, budget)


def side_condition_by_scan(
    V: AnySubspace, N: Matrix, condition: SideCondition, budget: Optional[int] = None
) -> bool:
    """Reference evaluation: test every member with the matrix predicate."""
    budget = settings.SIDE_CONDITION_BUDGET if budget is None else budget
    predicate = _PREDICATES[condition]
    return any(predicate(M, N) for M in elements(V, budget))
