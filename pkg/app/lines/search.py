"""Witness search: find A in a (sub)space such that the line A + KN has only rank-p matrices.

Exhaustive search scans ``spaces.element_vectors`` in its deterministic order and returns the
first hit, which makes the result independent of the number of workers. Random search samples
with a seeded generator and never claims that no witness exists.
"""

from dataclasses import dataclass
from enum import Enum
import random
from typing import Any, Callable, Iterator, Optional, Sequence, Tuple

from app.algebra.field import Raw
from app.algebra.linalg import rank
from app.algebra.matrix import Matrix
from app.algebra.pencil import has_constant_nonzero_det
from app.core.config import settings
from app.core.errors import HypothesisError, ResourceExhaustedError, ShapeMismatchError, UsageError
from app.core.logging import get_logger
from app.lines.predicates import LineTester, WitnessCertificate, line_full_rank
from app.spaces.subspace import AnySubspace, element_vectors, random_element
from app.workers.manager import WorkerPool

logger = get_logger(__name__)


class SearchStatus(str, Enum):
    WITNESS_FOUND = "witness-found"
    EXHAUSTED = "exhausted-no-witness"
    BUDGET_EXHAUSTED = "budget-exhausted"


class SearchStrategy(str, Enum):
    EXHAUSTIVE = "exhaustive"
    RANDOM = "random"


@dataclass(frozen=True)
class SearchOutcome:
    status: SearchStatus
    certificate: Optional[WitnessCertificate] = None
    cases_examined: int = 0

    @property
    def found(self) -> bool:
        return self.status is SearchStatus.WITNESS_FOUND


class ConstantDetTester:
    """Acceptance predicate of the strong search: det(A + tN) is a nonzero constant."""

    def __init__(self, N: Matrix):
        self.N = N

    def __call__(self, vec: Sequence[Raw]) -> bool:
        n, p = self.N.shape
        return has_constant_nonzero_det(Matrix.from_vector(self.N.field, n, p, vec), self.N)


def _check_search_input(V: AnySubspace, N: Matrix) -> None:
    V.shape.check(N)
    n, p = N.shape
    if n < p:
        raise ShapeMismatchError(f"full-rank lines need n >= p, got {n}x{p}")
    if rank(N) >= p:
        raise HypothesisError(f"the direction must satisfy rk N < p = {p}")


@dataclass
class _ExhaustiveScan:
    """Strided scan job: each worker reports the first accepted index in its stride."""

    V: AnySubspace
    accept: Callable[[Sequence[Raw]], bool]
    budget: int
    campaign_id: Optional[str] = None

    def iter_stride(self, worker_index: int, workers: int) -> Iterator[Tuple[int, Any]]:
        for index, vec in enumerate(element_vectors(self.V, self.budget)):
            if index % workers != worker_index:
                continue
            if self.accept(vec):
                yield index, vec
                return


def _certify(N: Matrix, vec: Sequence[Raw]) -> WitnessCertificate:
    n, p = N.shape
    A = Matrix.from_vector(N.field, n, p, vec)
    check = line_full_rank(A, N)
    if check.certificate is None:
        raise AssertionError("accepted matrix does not span a full-rank line")
    return check.certificate


def _search(
    V: AnySubspace,
    N: Matrix,
    accept: Callable[[Sequence[Raw]], bool],
    strategy: SearchStrategy,
    budget: Optional[int],
    seed: Optional[int],
    workers: int,
) -> SearchOutcome:
    _check_search_input(V, N)

    if strategy is SearchStrategy.RANDOM:
        budget = settings.RANDOM_SEARCH_BUDGET if budget is None else budget
        rng = random.Random(settings.DEFAULT_SEED if seed is None else seed)
        for draw in range(1, budget + 1):
            A = random_element(V, rng)
            if accept(A.vectorize()):
                return SearchOutcome(SearchStatus.WITNESS_FOUND, _certify(N, A.vectorize()), draw)
        return SearchOutcome(SearchStatus.BUDGET_EXHAUSTED, None, budget)

    budget = settings.ELEMENT_BUDGET if budget is None else budget
    if not V.field.is_finite:
        raise UsageError("exhaustive search needs a finite field, use the random strategy")
    total = V.field.order**V.dim
    if total > budget:
        raise ResourceExhaustedError(
            f"subspace has {total} elements, budget is {budget}", required=total, budget=budget
        )
    scan = _ExhaustiveScan(V, accept, budget)
    if workers > 1:
        hits = WorkerPool(workers).run(scan).results
    else:
        hits = list(scan.iter_stride(0, 1))
    if hits:
        index, vec = min(hits, key=lambda item: item[0])
        return SearchOutcome(SearchStatus.WITNESS_FOUND, _certify(N, vec), index + 1)
    return SearchOutcome(SearchStatus.EXHAUSTED, None, total)


def witness_search(
    V: AnySubspace,
    N: Matrix,
    strategy: SearchStrategy = SearchStrategy.EXHAUSTIVE,
    budget: Optional[int] = None,
    seed: Optional[int] = None,
    workers: int = 1,
) -> SearchOutcome:
    """Find A in V such that every matrix of A + KN has rank p.

    ``budget`` is the element budget in exhaustive mode and the sample count in random mode.
    """
    outcome = _search(V, N, LineTester(N), strategy, budget, seed, workers)
    logger.debug(f"witness_search {strategy.value}: {outcome.status.value} after {outcome.cases_examined}")
    return outcome


def constant_det_witness_search(
    V: AnySubspace,
    N: Matrix,
    budget: Optional[int] = None,
    strategy: SearchStrategy = SearchStrategy.EXHAUSTIVE,
    seed: Optional[int] = None,
    workers: int = 1,
) -> SearchOutcome:
    """Like witness_search, accepting only A with det(A + tN) constant and nonzero."""
    if not N.is_square:
        raise ShapeMismatchError("the constant-determinant search needs square matrices")
    n = N.nrows
    if rank(N) != n - 1:
        raise HypothesisError(f"the constant-determinant search needs rk N = n - 1 = {n - 1}")
    return _search(V, N, ConstantDetTester(N), strategy, budget, seed, workers)
