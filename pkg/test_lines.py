"""
满秩直线判定与见证搜索测试
Full-Rank Line Predicate and Witness Search Tests
"""

from itertools import product
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.algebra.field import GF, QQ
from app.algebra.linalg import canonical_N, det, random_invertible, rank
from app.algebra.matrix import Matrix
from app.algebra.pencil import det_pencil, has_constant_nonzero_det
from app.core.config import settings
from app.core.errors import HypothesisError, ResourceExhaustedError, ShapeMismatchError, UsageError
from app.gallery.examples import lemma1_witness, remark2_f2_example, sharpness_example
from app.lines.predicates import (
    LineTester,
    WitnessCertificate,
    ker_coker_noninjective,
    line_full_rank,
    maps_ker_into_im,
)
from app.lines.search import (
    SearchStatus,
    SearchStrategy,
    constant_det_witness_search,
    witness_search,
)
from app.spaces.enumeration import random_subspace
from app.spaces.subspace import MatrixSpaceShape, full_space, membership, random_element, transport
from conftest import matrices

ALL_FIELDS = [GF(2), GF(3), GF(5), QQ]


def _all_3x3_gf2():
    f = GF(2)
    for bits in product(range(2), repeat=9):
        yield Matrix.from_vector(f, 3, 3, bits)


@pytest.mark.unit
class TestLineFullRank:
    """测试满秩直线判定 / Test the full-rank line predicate"""

    def test_lemma_witness_3x2(self, gf2):
        A = Matrix.from_rows(gf2, [[0, 0], [1, 0], [0, 1]])
        assert A == lemma1_witness(3, 2, 1, gf2)
        check = line_full_rank(A, canonical_N(gf2, 3, 2, 1))
        assert check.full_rank
        assert check.certificate.table == ((0, 2), (1, 2))
        assert check.certificate.validate()

    @pytest.mark.parametrize("field", [GF(3), QQ])
    def test_zero_matrix_fails_at_zero(self, field):
        check = line_full_rank(Matrix.zeros(field, 3, 2), canonical_N(field, 3, 2, 1))
        assert not check.full_rank
        assert check.failing_t.value == 0

    def test_smallest_failing_t(self, gf3):
        check = line_full_rank(Matrix.identity(gf3, 2), Matrix.unit(gf3, 2, 2, 0, 0))
        assert not check.full_rank
        assert check.failing_t.value == 2

    def test_zero_direction_reduces_to_rank(self, gf3):
        N = Matrix.zeros(gf3, 2, 2)
        assert line_full_rank(Matrix.identity(gf3, 2), N).full_rank
        assert not line_full_rank(Matrix.unit(gf3, 2, 2, 0, 0), N).full_rank

    def test_rational_certificate(self, qq):
        A = lemma1_witness(3, 2, 1, qq)
        check = line_full_rank(A, canonical_N(qq, 3, 2, 1))
        assert check.full_rank
        assert check.certificate.analysis is not None
        assert check.certificate.validate()

    def test_tampered_certificate_fails(self, gf2):
        A = lemma1_witness(3, 2, 1, gf2)
        N = canonical_N(gf2, 3, 2, 1)
        assert not WitnessCertificate(A, N, ((0, 2),)).validate()
        assert not WitnessCertificate(Matrix.zeros(gf2, 3, 2), N, ((0, 2), (1, 2))).validate()

    def test_shape_errors(self, gf2, gf3):
        with pytest.raises(ShapeMismatchError):
            line_full_rank(Matrix.zeros(gf2, 2, 3), Matrix.zeros(gf2, 2, 3))
        with pytest.raises(ShapeMismatchError):
            line_full_rank(Matrix.zeros(gf2, 3, 2), Matrix.zeros(gf2, 2, 2))
        with pytest.raises(UsageError):
            line_full_rank(Matrix.zeros(gf2, 2, 2), Matrix.zeros(gf3, 2, 2))

    @pytest.mark.parametrize("field", ALL_FIELDS)
    def test_lemma_witness_for_all_small_sizes(self, field):
        """测试 n ≤ 6 的全部引理见证 / Test every lemma witness with n <= 6"""
        for n in range(1, 7):
            for p in range(1, n + 1):
                for r in range(p):
                    A = lemma1_witness(n, p, r, field)
                    check = line_full_rank(A, canonical_N(field, n, p, r))
                    assert check.full_rank, (n, p, r)
                    assert check.certificate.validate()

    @given(st.sampled_from([GF(2), GF(3), QQ]), st.data())
    def test_line_tester_agrees(self, field, data):
        """测试搜索热路径与判定一致 / Test the search hot path against the predicate"""
        p = data.draw(st.integers(min_value=1, max_value=3))
        n = data.draw(st.integers(min_value=p, max_value=4))
        A = data.draw(matrices(field, n, p))
        N = data.draw(matrices(field, n, p))
        assert LineTester(N)(A.vectorize()) == line_full_rank(A, N).full_rank

    @pytest.mark.parametrize("r", [0, 1])
    def test_packed_gf2_path_matches_generic(self, monkeypatch, r):
        """测试 GF(2) 位压缩路径与通用路径一致 / Test the packed GF(2) path against the generic one"""
        f = GF(2)
        N = canonical_N(f, 3, 2, r)
        packed = LineTester(N)
        monkeypatch.setattr(settings, "GF2_PACKED", False)
        generic = LineTester(N)
        assert packed.packed and not generic.packed
        for vec in product(range(2), repeat=6):
            assert packed(vec) == generic(vec)

    @given(st.sampled_from([GF(2), GF(3), GF(5)]), st.integers(min_value=0, max_value=2**32), st.data())
    def test_transport_invariance(self, field, seed, data):
        """测试等价变换不改变判定 / Test invariance under (P, Q)-conjugation"""
        rng = random.Random(seed)
        A = data.draw(matrices(field, 3, 2))
        N = data.draw(matrices(field, 3, 2))
        P = random_invertible(field, 3, rng)
        Q = random_invertible(field, 2, rng)
        assert line_full_rank(A, N).full_rank == line_full_rank(P @ A @ Q, P @ N @ Q).full_rank


@pytest.mark.unit
class TestSideConditionPredicates:
    """测试平方定理的附加条件 / Test the side conditions of the square theorems"""

    def test_ker_into_im_examples(self, gf2, gf3):
        for f in (gf2, gf3):
            N = canonical_N(f, 3, 3, 2)
            assert maps_ker_into_im(N, N)
            assert not maps_ker_into_im(Matrix.unit(f, 3, 3, 2, 2), N)
            assert maps_ker_into_im(Matrix.unit(f, 3, 3, 0, 2) + Matrix.unit(f, 3, 3, 2, 0), N)

    def test_noninjective_examples(self, gf3):
        for r in range(3):
            assert ker_coker_noninjective(Matrix.zeros(gf3, 3, 3), canonical_N(gf3, 3, 3, r))
        assert not ker_coker_noninjective(Matrix.identity(gf3, 3), canonical_N(gf3, 3, 3, 1))
        assert not ker_coker_noninjective(Matrix.zeros(gf3, 3, 3), Matrix.identity(gf3, 3))

    def test_closed_forms_on_all_3x3(self):
        """测试 512 个矩阵上的闭式判定 / Test the closed forms on all 512 matrices"""
        f = GF(2)
        N2 = canonical_N(f, 3, 3, 2)
        N1 = canonical_N(f, 3, 3, 1)
        for M in _all_3x3_gf2():
            into = maps_ker_into_im(M, N2)
            assert into == (M.at(2, 2) == 0)
            assert ker_coker_noninjective(M, N2) == into
            D = M.submatrix(range(1, 3), range(1, 3))
            assert ker_coker_noninjective(M, N1) == (det(D).value == 0)

    def test_square_required(self, gf2):
        with pytest.raises(ShapeMismatchError):
            maps_ker_into_im(Matrix.zeros(gf2, 3, 2), Matrix.zeros(gf2, 3, 2))


@pytest.mark.unit
class TestWitnessSearch:
    """测试见证搜索 / Test witness search"""

    @pytest.mark.parametrize("n,p,r", [(2, 2, 1), (3, 2, 0), (3, 2, 1), (3, 3, 2)])
    def test_full_space_has_witness(self, gf2, n, p, r):
        V = full_space(MatrixSpaceShape(gf2, n, p))
        outcome = witness_search(V, canonical_N(gf2, n, p, r))
        assert outcome.status is SearchStatus.WITNESS_FOUND
        assert outcome.certificate.validate()
        assert membership(V, outcome.certificate.A)

    def test_exhaustive_search_is_deterministic(self, gf3):
        V = full_space(MatrixSpaceShape(gf3, 2, 2))
        N = canonical_N(gf3, 2, 2, 1)
        first = witness_search(V, N)
        second = witness_search(V, N)
        assert first == second
        assert first.cases_examined >= 1

    @pytest.mark.parametrize("q,n,p", [(2, 2, 2), (2, 3, 2), (2, 3, 3), (3, 2, 2), (3, 3, 2)])
    def test_sharpness_space_has_no_witness(self, q, n, p):
        S, N = sharpness_example(n, p, GF(q))
        outcome = witness_search(S, N)
        assert outcome.status is SearchStatus.EXHAUSTED
        assert outcome.certificate is None
        assert outcome.cases_examined == q**S.dim

    def test_codim_one_subspaces_of_3x3(self, gf2):
        rng = random.Random(7)
        shape = MatrixSpaceShape(gf2, 3, 3)
        N = canonical_N(gf2, 3, 3, 1)
        for _ in range(25):
            V = random_subspace(shape, 1, rng)
            outcome = witness_search(V, N)
            assert outcome.found
            assert membership(V, outcome.certificate.A)

    def test_rejects_full_rank_direction(self, gf2):
        V = full_space(MatrixSpaceShape(gf2, 2, 2))
        with pytest.raises(HypothesisError):
            witness_search(V, Matrix.identity(gf2, 2))

    def test_rejects_wide_shapes(self, gf2):
        V = full_space(MatrixSpaceShape(gf2, 2, 3))
        with pytest.raises(ShapeMismatchError):
            witness_search(V, Matrix.zeros(gf2, 2, 3))

    def test_exhaustive_needs_finite_field(self, qq):
        V = full_space(MatrixSpaceShape(qq, 2, 2))
        with pytest.raises(UsageError):
            witness_search(V, canonical_N(qq, 2, 2, 1))

    def test_exhaustive_budget(self, gf2):
        V = full_space(MatrixSpaceShape(gf2, 3, 3))
        with pytest.raises(ResourceExhaustedError):
            witness_search(V, canonical_N(gf2, 3, 3, 1), budget=10)

    def test_random_strategy(self, gf3, qq):
        """测试随机策略 / Test the random strategy"""
        V = full_space(MatrixSpaceShape(gf3, 3, 2))
        N = canonical_N(gf3, 3, 2, 1)
        a = witness_search(V, N, strategy=SearchStrategy.RANDOM, seed=11)
        b = witness_search(V, N, strategy=SearchStrategy.RANDOM, seed=11)
        assert a.found and a == b

        Vq = full_space(MatrixSpaceShape(qq, 2, 2))
        outcome = witness_search(Vq, canonical_N(qq, 2, 2, 1), strategy=SearchStrategy.RANDOM)
        assert outcome.found
        assert outcome.certificate.validate()

    def test_random_strategy_never_claims_absence(self, gf2):
        S, N = sharpness_example(3, 2, gf2)
        outcome = witness_search(S, N, strategy=SearchStrategy.RANDOM, budget=5)
        assert outcome.status is SearchStatus.BUDGET_EXHAUSTED
        assert outcome.cases_examined == 5

    def test_parallel_scan_matches_serial(self, gf2):
        """测试并行扫描结果与串行一致 / Test parallel scans against the serial result"""
        S, N = sharpness_example(3, 3, gf2)
        V = full_space(MatrixSpaceShape(gf2, 3, 3))
        for space in (S, V):
            serial = witness_search(space, N)
            parallel = witness_search(space, N, workers=2)
            assert parallel == serial


@pytest.mark.unit
class TestConstantDetSearch:
    """测试常数行列式搜索 / Test the constant-determinant search"""

    def test_gf2_remark_space(self):
        space, N = remark2_f2_example()
        strong = constant_det_witness_search(space, N)
        assert strong.status is SearchStatus.EXHAUSTED
        assert strong.cases_examined == 256
        plain = witness_search(space, N)
        assert plain.found
        assert membership(space, plain.certificate.A)

    def test_mat2_gf3(self, gf3):
        V = full_space(MatrixSpaceShape(gf3, 2, 2))
        N = canonical_N(gf3, 2, 2, 1)
        outcome = constant_det_witness_search(V, N)
        assert outcome.found
        A = outcome.certificate.A
        poly = det_pencil(A, N)
        assert poly.degree == 0
        assert has_constant_nonzero_det(A, N)

    def test_constant_det_implies_full_rank(self, gf3):
        """测试常数非零行列式蕴含满秩直线 / Test constant nonzero det implies a full-rank line"""
        rng = random.Random(3)
        shape = MatrixSpaceShape(gf3, 3, 3)
        N = canonical_N(gf3, 3, 3, 2)
        for _ in range(10):
            V = random_subspace(shape, 1, rng)
            strong = constant_det_witness_search(V, N)
            if strong.found:
                assert line_full_rank(strong.certificate.A, N).full_rank
                assert witness_search(V, N).found

    def test_hypotheses(self, gf3):
        V = full_space(MatrixSpaceShape(gf3, 3, 3))
        with pytest.raises(HypothesisError):
            constant_det_witness_search(V, canonical_N(gf3, 3, 3, 1))
        W = full_space(MatrixSpaceShape(gf3, 3, 2))
        with pytest.raises(ShapeMismatchError):
            constant_det_witness_search(W, canonical_N(gf3, 3, 2, 1))

    @given(st.integers(min_value=0, max_value=2**32))
    def test_transported_space_keeps_witnesses(self, seed):
        rng = random.Random(seed)
        f = GF(3)
        shape = MatrixSpaceShape(f, 2, 2)
        V = random_subspace(shape, 1, rng)
        N = canonical_N(f, 2, 2, 1)
        P = random_invertible(f, 2, rng)
        Q = random_invertible(f, 2, rng)
        A = random_element(V, rng)
        W = transport(V, P, Q)
        assert membership(W, P @ A @ Q)
        assert line_full_rank(A, N).full_rank == line_full_rank(P @ A @ Q, P @ N @ Q).full_rank
        assert witness_search(V, N).found == witness_search(W, P @ N @ Q).found
        assert rank(P @ N @ Q) == 1
