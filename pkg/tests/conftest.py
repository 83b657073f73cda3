import pytest

from ultragh import (
    ExactValue,
    truncated_unramified_ring,
    validate_space,
    zq_delta,
)


@pytest.fixture
def x2():
    return truncated_unramified_ring(2, 1, 1)


@pytest.fixture
def x3():
    return truncated_unramified_ring(3, 1, 1)


@pytest.fixture
def z4():
    return truncated_unramified_ring(2, 1, 2)


@pytest.fixture
def ydelta():
    return zq_delta(3, 2, 1)


@pytest.fixture
def singleton():
    return validate_space([[ExactValue(0)]], ["p"])


def ev(text):
    return ExactValue.parse(str(text))
