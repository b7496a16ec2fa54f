import random
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from k4ep.graph import Graph

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

K4_PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def complete(n: int, offset: int = 0) -> Graph:
    return Graph(range(offset, offset + n), [(u + offset, v + offset) for u, v in combinations(range(n), 2)])


def disjoint_k4s(count: int) -> Graph:
    pairs = [(u + 4 * i, v + 4 * i) for i in range(count) for u, v in K4_PAIRS]
    return Graph(range(4 * count), pairs)


def gnp(n: int, p: float, seed: int) -> Graph:
    h = nx.gnp_random_graph(n, p, seed=seed)
    return Graph(h.nodes, h.edges)


@st.composite
def small_graphs(draw, max_n: int = 7, max_m: int | None = None):
    n = draw(st.integers(2, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True,
                           max_size=max_m if max_m is not None else len(pairs)))
    return Graph(range(n), chosen)


@pytest.fixture
def k4():
    return complete(4)


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
