import random

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from hgturan.core import build

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

FANO_LINES = [(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)]


@pytest.fixture
def fano():
    return build(3, 7, FANO_LINES)


def random_graph(r, n, density, seed):
    from itertools import combinations

    rng = random.Random(seed)
    return build(r, n, [e for e in combinations(range(n), r) if rng.random() < density])


@st.composite
def hypergraphs(draw, r=None, max_n=8):
    r = draw(st.integers(2, 4)) if r is None else r
    n = draw(st.integers(r, max_n))
    seed = draw(st.integers(0, 2**32))
    density = draw(st.floats(0.0, 1.0))
    return random_graph(r, n, density, seed)


# acceptance criteria record "criterion N: PASS/FAIL ..." lines here
CRITERIA: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[n])
