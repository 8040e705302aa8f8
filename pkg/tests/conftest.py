import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from clusterforge import quiver as qv

settings.register_profile(
    "default", max_examples=60, deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def random_acyclic(rng: random.Random, n: int, max_mult: int = 1, connected: bool = True) -> qv.Quiver:
    """Random acyclic quiver: arrows only go from lower to higher in a shuffled order."""
    while True:
        order = list(range(n))
        rng.shuffle(order)
        b = [[0] * n for _ in range(n)]
        for a in range(n):
            for c in range(a + 1, n):
                if rng.random() < 0.55:
                    m = rng.randint(1, max_mult)
                    i, j = order[a], order[c]
                    b[i][j], b[j][i] = m, -m
        q = qv.from_matrix(b)
        if not connected or qv.is_connected(q):
            return q


@st.composite
def quivers(draw, min_n: int = 1, max_n: int = 5, max_mult: int = 2):
    n = draw(st.integers(min_n, max_n))
    b = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m = draw(st.integers(-max_mult, max_mult))
            b[i][j], b[j][i] = m, -m
    return qv.from_matrix(b)


@st.composite
def acyclic_quivers(draw, max_n: int = 4, max_mult: int = 1):
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(1, max_n))
    return random_acyclic(random.Random(seed), n, max_mult)


@pytest.fixture
def a3():
    return qv.linear_quiver(3)


ACCEPTANCE: dict[int, tuple[str, float, float]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, elapsed, bound = ACCEPTANCE[n]
        terminalreporter.write_line(f"{status} criterion {n} ({elapsed:.2f}s, bound {bound:g}s)")
