"""
验证任务测试
Verification Campaign Tests

小规模的穷举验证任务，外加确定性、抽样回退与共轭一致性检查
Small exhaustive campaigns, plus determinism, sampling fallback and conjugate consistency
"""

import random

import pytest

from app.algebra.field import GF
from app.algebra.linalg import canonical_N, random_invertible, rank
from app.core.config import settings
from app.core.errors import UsageError
from app.gallery.examples import remark2_f2_example, sharpness_example
from app.lines.search import SearchOutcome, SearchStatus, constant_det_witness_search, witness_search
from app.schemas.campaign import CampaignMode, CampaignSpec
from app.services import campaign_service
from app.services.campaign_service import CampaignService, CaseStatus, evaluate_case, run_campaign
from app.services.cases import Case, count_cases, iter_cases, needs_fallback
from app.services.side_conditions import SideCondition, side_condition_by_scan, side_condition_holds
from app.spaces.enumeration import random_affine
from app.spaces.subspace import MatrixSpaceShape
from app.utils.textformat import parse_matrix, parse_subspace


def _spec(**values) -> CampaignSpec:
    return CampaignSpec.build(**values)


@pytest.mark.unit
class TestCaseStream:
    """测试案例流 / Test the case stream"""

    def test_counts(self):
        assert count_cases(_spec(theorem="main", q=2, n=3, p=2, codim_min=1, codim_max=1)) == 126
        assert count_cases(_spec(theorem="pencil", q=2, n=3, codim_max=1)) == 1023
        assert count_cases(_spec(theorem="main", q=2, n=3, p=2, mode="sample", samples=7)) == 14

    def test_order(self):
        spec = _spec(theorem="main", q=2, n=3, p=2, codim_min=0, codim_max=1)
        cases = list(iter_cases(spec))
        assert len(cases) == 2 + 126
        assert [c.index for c in cases] == list(range(len(cases)))
        assert [c.codim for c in cases[:2]] == [0, 0]
        assert [c.rank for c in cases[:4]] == [0, 1, 0, 1]

    def test_sample_stream_is_seeded(self):
        spec = _spec(theorem="square", q=2, n=3, codim_max=1, mode="sample", samples=5, seed=3)
        first = [c.descriptor for c in iter_cases(spec)]
        assert first == [c.descriptor for c in iter_cases(spec)]
        other = spec.model_copy(update={"seed": 4})
        assert first != [c.descriptor for c in iter_cases(other)]

    def test_sample_codims_are_uniform(self):
        """测试抽样模式下余维均匀选取 / Test sample mode draws codims uniformly, not by count"""
        spec = _spec(theorem="main", q=2, n=3, p=2, ranks=[1], codim_min=0, codim_max=1, mode="sample", samples=40)
        codims = [c.codim for c in iter_cases(spec)]
        # 按子空间数加权时余维 0 只占 1/64
        assert codims.count(0) >= 6
        assert codims.count(1) >= 6


@pytest.mark.integration
class TestCampaigns:
    """测试小规模穷举验证 / Test small exhaustive campaigns"""

    def test_main_3x2(self):
        report = run_campaign(_spec(theorem="main", q=2, n=3, p=2, codim_min=1, codim_max=1))
        assert report.counts.total == 126
        assert report.counts.passed == 126
        assert report.counts.failed == 0
        assert report.verdict == "verified"
        assert report.exit_code == 0
        assert len(report.case_order_hash) == 64

    def test_pencil_3x3(self):
        """测试仿射超平面上的铅笔定理 / Test the pencil theorem on affine hyperplanes"""
        report = CampaignService().run_pencil(_spec(theorem="pencil", q=2, n=3, codim_max=1))
        assert report.counts.total == 1023
        assert report.counts.failed == 0
        # 唯一被过滤的是 D(M) = 1 的陪集
        assert report.counts.filtered == 1
        assert report.counts.passed == 1022

    def test_flanders(self):
        report = CampaignService().run_flanders(_spec(theorem="flanders", q=2, n=3, ranks=[2], codim_min=1, codim_max=1))
        assert report.counts.total == 511
        assert report.counts.passed == 511

    def test_flanders_filters_small_spaces(self):
        report = run_campaign(_spec(theorem="flanders", q=2, n=2, p=2, ranks=[1], codim_min=2, codim_max=2))
        assert report.counts.filtered == report.counts.total == 35

    def test_remark2_small_codim(self):
        report = CampaignService().run_remark2(_spec(theorem="remark2-small-codim", q=2, n=3))
        assert report.counts.total == 1
        assert report.counts.passed == 1

    def test_remark2_strong_over_gf3(self):
        report = run_campaign(_spec(theorem="remark2-strong", q=3, n=2))
        assert report.counts.total == 1
        assert report.verdict == "verified"


    def test_remark2_conjecture(self):
        report = CampaignService().run_remark2(_spec(theorem="remark2-conjecture", q=2, n=4))
        assert report.counts.total == 1
        assert report.counts.passed == 1
        assert report.counts.findings == 0
        assert report.verdict == "verified"

    def test_remark2_conjecture_findings_do_not_gate(self, monkeypatch):
        """测试猜想的反例记为发现而非失败 / Test conjecture counterexamples are findings, not failures"""
        def exhausted(V, N, budget=None):
            return SearchOutcome(SearchStatus.EXHAUSTED, cases_examined=0)

        monkeypatch.setattr(campaign_service, "constant_det_witness_search", exhausted)
        report = CampaignService().run_remark2(_spec(theorem="remark2-conjecture", q=2, n=4))
        assert report.counts.findings == 1
        assert report.counts.failed == 0
        assert report.failures == []
        assert report.findings[0].diagnostics["status"] == "exhausted-no-witness"
        assert report.exit_code == 0

    def test_remark2_small_codim_beyond_bound(self):
        """测试 n = 3 时超出余维界的探索运行 / Test the exploratory run past the codim bound at n = 3"""
        spec = _spec(theorem="remark2-small-codim", q=2, n=3, codim_max=1, allow_out_of_hypothesis=True)
        report = CampaignService().run_remark2(spec)
        c = report.counts
        assert c.total == 1023
        assert c.failed == 0
        assert c.passed + c.filtered + c.findings == c.total
        assert c.findings == len(report.findings)
        assert all(r.diagnostics["status"] == "exhausted-no-witness" for r in report.findings)
        assert report.exit_code == 0

    def test_remark2_f2_space_has_no_constant_det_member(self):
        space, N = remark2_f2_example()
        spec = _spec(theorem="remark2-small-codim", q=2, n=3, codim_max=1, allow_out_of_hypothesis=True)
        result = evaluate_case(spec, Case(0, 1, 2, space))
        assert result.status is not CaseStatus.PASSED
        assert constant_det_witness_search(space, N).status is SearchStatus.EXHAUSTED

    def test_failure_records_replay(self):
        """测试失败记录可复现：解析后重新搜索仍无见证 / Test failure records replay to an exhausted search"""
        spec = _spec(theorem="main", q=2, n=3, p=2, codim_min=2, codim_max=2, allow_out_of_hypothesis=True)
        report = run_campaign(spec)
        assert report.findings
        for record in report.findings:
            space = parse_subspace(record.space)
            N = parse_matrix(record.N)
            assert space.codim == record.codim
            assert rank(N) == record.rank
            outcome = witness_search(space, N)
            assert outcome.status is SearchStatus.EXHAUSTED
            assert outcome.cases_examined == record.diagnostics["cases_examined"] == 2**space.dim
    def test_out_of_hypothesis_run_reports_findings(self):
        """测试超出假设的运行：失败记为发现，退出码为 0 / Test exploratory runs record findings"""
        spec = _spec(theorem="main", q=2, n=2, p=2, codim_min=1, codim_max=1, allow_out_of_hypothesis=True)
        report = run_campaign(spec)
        assert report.counts.findings > 0
        assert report.counts.failed == 0
        assert report.exit_code == 0
        assert any("exploratory" in note for note in report.notes)

    def test_runner_checks_theorem(self):
        with pytest.raises(UsageError):
            CampaignService().run_pencil(_spec(theorem="main", q=2, n=3))

    @pytest.mark.slow
    def test_square_3x3(self):
        report = CampaignService().run_square(_spec(theorem="square", q=2, n=3, codim_max=1, ranks=[0, 1]))
        assert report.counts.total == 2 * 1023
        assert report.counts.failed == 0


@pytest.mark.integration
class TestDeterminism:
    """测试确定性 / Test determinism"""

    def test_workers_do_not_change_the_report(self):
        spec = _spec(theorem="main", q=2, n=3, p=2, codim_max=1)
        serial = CampaignService(workers=1).run(spec)
        parallel = CampaignService(workers=2).run(spec)
        assert serial.case_order_hash == parallel.case_order_hash
        assert serial.counts == parallel.counts
        assert serial.failures == parallel.failures

    def test_fallback_to_sampling(self, monkeypatch):
        monkeypatch.setattr(settings, "MAX_EXHAUSTIVE_CASES", 10)
        monkeypatch.setattr(settings, "SAMPLE_FALLBACK_COUNT", 5)
        spec = _spec(theorem="main", q=2, n=3, p=2, codim_max=1)
        assert needs_fallback(spec)
        report = run_campaign(spec)
        assert report.spec.mode is CampaignMode.SAMPLE
        assert report.counts.total == 10
        assert any("sampled 5" in note for note in report.notes)
        assert report.verdict == "verified"

    def test_random_conjugates_agree(self):
        spec = _spec(theorem="main", q=2, n=3, p=2, codim_min=1, codim_max=1, ranks=[1], random_conjugates=1)
        report = run_campaign(spec)
        assert report.counts.passed == 63
        assert report.counts.failed == 0

    def test_monotonicity_chains(self):
        spec = _spec(theorem="main", q=2, n=3, p=2, codim_min=0, codim_max=1, seed=11)
        report = CampaignService().run_monotonicity(spec, chains=3)
        assert report.counts.failed == 0
        assert report.counts.passed == report.counts.total == 6
        assert report.verdict == "verified"

    def test_monotonicity_needs_main(self):
        with pytest.raises(UsageError):
            CampaignService().run_monotonicity(_spec(theorem="pencil", q=2, n=3), chains=1)

    def test_monotonicity_detects_a_lost_witness(self, monkeypatch):
        """测试超空间搜索失败时链检查报错 / Test that a superspace without a witness fails the chain"""
        real = campaign_service.witness_search

        def no_witness_at_codim_0(V, N, budget=None):
            if V.codim == 0:
                return SearchOutcome(SearchStatus.EXHAUSTED, cases_examined=2**V.dim)
            return real(V, N, budget=budget)

        monkeypatch.setattr(campaign_service, "witness_search", no_witness_at_codim_0)
        spec = _spec(theorem="main", q=2, n=3, p=2, codim_min=0, codim_max=1, seed=11)
        report = CampaignService().run_monotonicity(spec, chains=2)
        assert report.counts.total == 4
        assert report.counts.passed == 2
        assert report.counts.failed == 2
        assert all(r.codim == 0 and r.diagnostics["smaller_found"] for r in report.failures)
        assert report.verdict == "falsified"


@pytest.mark.unit
class TestEvaluateCase:
    """测试单个案例 / Test single cases"""

    def test_sharpness_case_fails(self, gf2):
        S, _ = sharpness_example(3, 2, gf2)
        spec = _spec(theorem="main", q=2, n=3, p=2, codim_max=2, allow_out_of_hypothesis=True)
        result = evaluate_case(spec, Case(0, 2, 1, S))
        assert result.status is CaseStatus.FAILED
        assert result.record.diagnostics["status"] == "exhausted-no-witness"
        assert result.record.diagnostics["cases_examined"] == 2 ** S.dim


@pytest.mark.unit
class TestSideConditions:
    """测试方阵定理的附加条件 / Test the side conditions of the square theorems"""

    @pytest.mark.parametrize("condition", list(SideCondition))
    @pytest.mark.parametrize("r", [0, 1, 2])
    def test_closed_form_matches_scan(self, condition, r):
        f = GF(2)
        shape = MatrixSpaceShape(f, 3, 3)
        rng = random.Random(r)
        N = canonical_N(f, 3, 3, r)
        for _ in range(15):
            V = random_affine(shape, rng.choice([1, 2, 3]), rng)
            assert side_condition_holds(V, N, condition) == side_condition_by_scan(V, N, condition)

    def test_noncanonical_direction_scans(self):
        f = GF(3)
        rng = random.Random(5)
        shape = MatrixSpaceShape(f, 2, 2)
        P, Q = random_invertible(f, 2, rng), random_invertible(f, 2, rng)
        N = P @ canonical_N(f, 2, 2, 1) @ Q
        V = random_affine(shape, 2, rng)
        for condition in SideCondition:
            assert side_condition_holds(V, N, condition) == side_condition_by_scan(V, N, condition)
