"""
共享测试夹具与 hypothesis 策略
Shared fixtures and hypothesis strategies
"""

import pytest
from hypothesis import HealthCheck, settings as hypothesis_settings
from hypothesis import strategies as st

from app.algebra.field import GF, QQ, FieldDesc
from app.algebra.matrix import Matrix

hypothesis_settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
hypothesis_settings.register_profile("ci", max_examples=200, deadline=None)
hypothesis_settings.load_profile("default")

SMALL_FIELDS = [GF(2), GF(3), GF(5), QQ]


@pytest.fixture
def gf2() -> FieldDesc:
    return GF(2)


@pytest.fixture
def gf3() -> FieldDesc:
    return GF(3)


@pytest.fixture
def gf5() -> FieldDesc:
    return GF(5)


@pytest.fixture
def qq() -> FieldDesc:
    return QQ


def entries(field: FieldDesc) -> st.SearchStrategy:
    if field.is_finite:
        return st.integers(min_value=0, max_value=field.order - 1)
    return st.fractions(min_value=-3, max_value=3, max_denominator=3)


@st.composite
def matrices(draw, field: FieldDesc, n: int, p: int) -> Matrix:
    rows = draw(st.lists(st.lists(entries(field), min_size=p, max_size=p), min_size=n, max_size=n))
    return Matrix.from_rows(field, rows, p)


@st.composite
def field_and_square(draw, max_size: int = 4):
    """(field, n x n matrix) over one of the small test fields."""
    field = draw(st.sampled_from(SMALL_FIELDS))
    n = draw(st.integers(min_value=1, max_value=max_size))
    return field, draw(matrices(field, n, n))


@st.composite
def field_and_rect(draw, max_size: int = 4):
    field = draw(st.sampled_from(SMALL_FIELDS))
    n = draw(st.integers(min_value=1, max_value=max_size))
    p = draw(st.integers(min_value=1, max_value=max_size))
    return field, draw(matrices(field, n, p))
