import random
import time
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional, Tuple

from app.algebra.field import GF
from app.algebra.linalg import canonical_N, random_invertible, rank_rows
from app.algebra.matrix import Matrix
from app.core.context import set_campaign
from app.core.errors import UsageError
from app.core.logging import get_logger, log_campaign_event, log_case_failure, performance_logger
from app.lines.search import SearchOutcome, constant_det_witness_search, witness_search
from app.schemas.campaign import (
    CONSTANT_DET_THEOREMS,
    CampaignSpec,
    FailureRecord,
    ReportCounts,
    Theorem,
    VerificationReport,
)
from app.services.cases import (
    Case,
    campaign_shape,
    case_order_hash,
    fallback_spec,
    iter_cases,
    needs_fallback,
)
from app.services.side_conditions import SideCondition, side_condition_holds
from app.spaces.enumeration import random_subspace
from app.spaces.subspace import (
    AnySubspace,
    element_vectors,
    full_space,
    membership,
    random_element,
    span_sum,
    transport,
)
from app.utils.textformat import format_matrix, format_subspace
from app.workers.manager import WorkerPool

logger = get_logger(__name__)


class CaseStatus(str, Enum):
    PASSED = "passed"
    FILTERED = "filtered"
    FAILED = "failed"


@dataclass(frozen=True)
class CaseResult:
    status: CaseStatus
    descriptor: str
    record: Optional[FailureRecord] = None


def _record(case: Case, N: Matrix, diagnostics: Dict[str, Any]) -> FailureRecord:
    return FailureRecord(
        index=case.index,
        codim=case.codim,
        rank=case.rank,
        space=format_subspace(case.space),
        N=format_matrix(N),
        diagnostics=diagnostics,
    )


# -- per-theorem evaluation ---------------------------------------------------


def _flanders_case(spec: CampaignSpec, case: Case) -> CaseResult:
    """Contrapositive of Flanders's bound: dim S > n*r forces a member of rank > r."""
    S = case.space
    n, p, r = spec.n, spec.p, case.rank
    N = canonical_N(S.field, n, p, r)
    if S.dim <= n * r:
        return CaseResult(CaseStatus.FILTERED, case.descriptor)
    f = S.field
    for vec in element_vectors(S, spec.element_budget):
        if rank_rows(f, [vec[i * p:(i + 1) * p] for i in range(n)], p) > r:
            return CaseResult(CaseStatus.PASSED, case.descriptor)
    diagnostics = {"dim": S.dim, "bound": n * r, "reason": "every member has rank <= r"}
    return CaseResult(CaseStatus.FAILED, case.descriptor, _record(case, N, diagnostics))


def _side_condition(theorem: Theorem) -> Optional[SideCondition]:
    if theorem in (Theorem.FLANDERS, Theorem.MAIN):
        return None
    if theorem is Theorem.SQUARE:
        return SideCondition.NONINJECTIVE
    return SideCondition.KER_INTO_IM


def _search(spec: CampaignSpec, V: AnySubspace, N: Matrix) -> SearchOutcome:
    if spec.theorem in CONSTANT_DET_THEOREMS:
        return constant_det_witness_search(V, N, budget=spec.element_budget)
    return witness_search(V, N, budget=spec.element_budget)


def _verdict(spec: CampaignSpec, V: AnySubspace, N: Matrix) -> Tuple[bool, Optional[SearchOutcome]]:
    """(side condition holds, search outcome or None when filtered)."""
    condition = _side_condition(spec.theorem)
    if condition is not None and not side_condition_holds(V, N, condition):
        return False, None
    return True, _search(spec, V, N)


def _conjugate_mismatch(
    spec: CampaignSpec, case: Case, N: Matrix, expected: Tuple[bool, bool]
) -> Optional[Dict[str, Any]]:
    """Re-run the case on random (P, Q)-conjugates; the verdict must not change."""
    rng = random.Random(f"{spec.seed}:{case.index}")
    f = case.space.field
    for j in range(spec.random_conjugates):
        P = random_invertible(f, spec.n, rng)
        Q = random_invertible(f, spec.p, rng)
        holds, outcome = _verdict(spec, transport(case.space, P, Q), P @ N @ Q)
        got = (holds, outcome is not None and outcome.found)
        if got != expected:
            return {
                "conjugate": j,
                "P": format_matrix(P),
                "Q": format_matrix(Q),
                "expected": list(expected),
                "got": list(got),
            }
    return None


def evaluate_case(spec: CampaignSpec, case: Case) -> CaseResult:
    if spec.theorem is Theorem.FLANDERS:
        return _flanders_case(spec, case)
    N = canonical_N(case.space.field, spec.n, spec.p, case.rank)
    holds, outcome = _verdict(spec, case.space, N)
    found = outcome is not None and outcome.found
    if spec.random_conjugates:
        mismatch = _conjugate_mismatch(spec, case, N, (holds, found))
        if mismatch is not None:
            return CaseResult(CaseStatus.FAILED, case.descriptor, _record(case, N, mismatch))
    if not holds:
        return CaseResult(CaseStatus.FILTERED, case.descriptor)
    if found:
        return CaseResult(CaseStatus.PASSED, case.descriptor)
    diagnostics = {"status": outcome.status.value, "cases_examined": outcome.cases_examined}
    return CaseResult(CaseStatus.FAILED, case.descriptor, _record(case, N, diagnostics))


@dataclass
class CampaignJob:
    """Strided campaign job: worker k evaluates the cases with index = k (mod w)."""

    spec: CampaignSpec
    campaign_id: Optional[str] = None

    def iter_stride(self, worker_index: int, workers: int) -> Iterator[Tuple[int, CaseResult]]:
        for case in iter_cases(self.spec):
            if case.index % workers == worker_index:
                yield case.index, evaluate_case(self.spec, case)


# -- coordinator ---------------------------------------------------------------


class CampaignService:
    """验证任务服务 - 枚举案例、并行求解并汇总为报告"""

    def __init__(self, workers: Optional[int] = None):
        self.workers = workers

    def run(self, spec: CampaignSpec) -> VerificationReport:
        notes: List[str] = []
        effective = spec
        if needs_fallback(spec):
            effective = fallback_spec(spec)
            notes.append(
                f"exhaustive enumeration too large, sampled {effective.samples} subspaces "
                f"with seed {effective.seed}"
            )
            logger.warning(notes[-1])
        if not effective.gating:
            notes.append("exploratory run: unexpected outcomes are reported as findings")

        campaign_id = spec.campaign_id()
        set_campaign(campaign_id)
        workers = self.workers or spec.workers
        logger.info(f"Campaign {campaign_id}: {spec.theorem.value} q={spec.q} n={spec.n} p={spec.p} workers={workers}")

        start = time.perf_counter()
        with performance_logger.time_operation("campaign", theorem=spec.theorem.value):
            pool = WorkerPool(workers).run(CampaignJob(effective, campaign_id))
        elapsed_ms = int((time.perf_counter() - start) * 1000)

        counts = ReportCounts()
        failures: List[FailureRecord] = []
        findings: List[FailureRecord] = []
        descriptors = []
        for index, result in pool.results:
            descriptors.append(result.descriptor)
            counts.total += 1
            if result.status is CaseStatus.PASSED:
                counts.passed += 1
            elif result.status is CaseStatus.FILTERED:
                counts.filtered += 1
            elif effective.gating:
                counts.failed += 1
                failures.append(result.record)
                log_case_failure(index, spec.theorem.value, result.record.diagnostics)
            else:
                counts.findings += 1
                findings.append(result.record)

        report = VerificationReport(
            spec=effective,
            counts=counts,
            failures=failures,
            findings=findings,
            case_order_hash=case_order_hash(descriptors),
            elapsed_ms=elapsed_ms,
            complete=pool.complete,
            notes=notes,
        )
        log_campaign_event(
            "finished",
            spec.theorem.value,
            counts.model_dump(),
            elapsed_ms,
            complete=pool.complete,
            details={"verdict": report.verdict, "case_order_hash": report.case_order_hash},
        )
        set_campaign(None)
        return report

    def _run_checked(self, spec: CampaignSpec, *allowed: Theorem) -> VerificationReport:
        if spec.theorem not in allowed:
            raise UsageError(f"campaign for {spec.theorem.value} passed to a {allowed[0].value} runner")
        return self.run(spec)

    def run_flanders(self, spec: CampaignSpec) -> VerificationReport:
        return self._run_checked(spec, Theorem.FLANDERS)

    def run_main(self, spec: CampaignSpec) -> VerificationReport:
        return self._run_checked(spec, Theorem.MAIN)

    def run_pencil(self, spec: CampaignSpec) -> VerificationReport:
        return self._run_checked(spec, Theorem.PENCIL)

    def run_square(self, spec: CampaignSpec) -> VerificationReport:
        return self._run_checked(spec, Theorem.SQUARE)

    def run_remark2(self, spec: CampaignSpec) -> VerificationReport:
        return self._run_checked(
            spec, Theorem.REMARK2_STRONG, Theorem.REMARK2_CONJECTURE, Theorem.REMARK2_SMALL_CODIM
        )

    def run_monotonicity(self, spec: CampaignSpec, chains: int) -> VerificationReport:
        """Sampled chains S ⊂ S' ⊂ ... of decreasing codimension, each space searched on its own.

        A step fails when S has a witness and S' does not, or when the witness found for S' lies
        in S although the search on S came back empty.
        """
        if spec.theorem is not Theorem.MAIN:
            raise UsageError("the monotonicity spot-check runs on theorem main")
        rng = random.Random(spec.seed)
        shape = campaign_shape(spec)
        ambient = full_space(shape)
        set_campaign(spec.campaign_id())
        start = time.perf_counter()
        counts = ReportCounts()
        failures: List[FailureRecord] = []
        descriptors: List[str] = []
        index = 0
        for _ in range(chains):
            r = rng.choice(spec.ranks)
            N = canonical_N(GF(spec.q), spec.n, spec.p, r)
            current = random_subspace(shape, spec.codim_max, rng)
            found = witness_search(current, N, budget=spec.element_budget).found
            descriptors.append(Case(index, current.codim, r, current).descriptor)
            index += 1
            counts.total += 1
            if found:
                counts.passed += 1
            else:
                counts.filtered += 1
            while current.codim > spec.codim_min:
                M = random_element(ambient, rng)
                if membership(current, M):
                    continue
                bigger = span_sum(current, [M])
                case = Case(index, bigger.codim, r, bigger)
                descriptors.append(case.descriptor)
                index += 1
                counts.total += 1
                outcome = witness_search(bigger, N, budget=spec.element_budget)
                diagnostics: Dict[str, Any] = {"smaller_found": found, "found": outcome.found}
                if found and not outcome.found:
                    counts.failed += 1
                    failures.append(_record(case, N, diagnostics))
                elif outcome.found and not found and membership(current, outcome.certificate.A):
                    diagnostics["witness"] = format_matrix(outcome.certificate.A)
                    counts.failed += 1
                    failures.append(_record(Case(case.index, current.codim, r, current), N, diagnostics))
                elif outcome.found:
                    counts.passed += 1
                else:
                    counts.filtered += 1
                current, found = bigger, outcome.found
        elapsed_ms = int((time.perf_counter() - start) * 1000)
        report = VerificationReport(
            spec=spec,
            counts=counts,
            failures=failures,
            case_order_hash=case_order_hash(descriptors),
            elapsed_ms=elapsed_ms,
            notes=[f"monotonicity spot-check over {chains} sampled chains"],
        )
        log_campaign_event("monotonicity", spec.theorem.value, counts.model_dump(), elapsed_ms)
        set_campaign(None)
        return report


def run_campaign(spec: CampaignSpec, workers: Optional[int] = None) -> VerificationReport:
    return CampaignService(workers).run(spec)
