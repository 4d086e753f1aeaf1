import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from ancestry_labels import from_parent_array, kernels

settings.register_profile(
    "default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@st.composite
def parent_arrays(draw, min_n=1, max_n=40):
    n = draw(st.integers(min_n, max_n))
    return [draw(st.integers(0, i - 1)) for i in range(1, n)]


@st.composite
def trees(draw, min_n=1, max_n=40):
    return from_parent_array(draw(parent_arrays(min_n, max_n)))


@pytest.fixture(params=kernels.BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def path3():
    return from_parent_array([0, 1])


@pytest.fixture
def star3():
    return from_parent_array([0, 0])


@pytest.fixture
def single():
    return from_parent_array([])


def all_pairs(n):
    us, vs = np.divmod(np.arange(n * n, dtype=np.int64), n)
    return us, vs


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
