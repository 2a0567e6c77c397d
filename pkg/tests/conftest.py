import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from signedflow.graph import SignedGraph

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def signed_graphs(draw, max_vertices=7, max_edges=10, loops=True, min_vertices=1, positive=False):
    n = draw(st.integers(min_vertices, max_vertices))
    m = draw(st.integers(0, max_edges))
    edges = []
    for _ in range(m):
        u = draw(st.integers(0, n - 1))
        v = draw(st.integers(0, n - 1))
        if u == v and not loops:
            continue
        edges.append((u, v, 1 if positive else draw(st.sampled_from((1, -1)))))
    return SignedGraph.from_edges(n, edges)


def triangle(signs=(1, 1, 1)):
    return SignedGraph.from_edges(3, [(0, 1, signs[0]), (1, 2, signs[1]), (2, 0, signs[2])])


def cycle_graph(k, neg=()):
    return SignedGraph.from_edges(k, [(i, (i + 1) % k, -1 if i in neg else 1) for i in range(k)])


K4_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def k4(neg=()):
    return SignedGraph.from_edges(4, [(u, v, -1 if i in neg else 1) for i, (u, v) in enumerate(K4_EDGES)])


PETERSEN_EDGES = ([(i, (i + 1) % 5) for i in range(5)] + [(i, i + 5) for i in range(5)]
                  + [(5 + i, 5 + (i + 2) % 5) for i in range(5)])


def petersen(signs):
    return SignedGraph.from_edges(10, [(u, v, s) for (u, v), s in zip(PETERSEN_EDGES, signs)])


@pytest.fixture
def rng():
    return random.Random(12345)


# acceptance summary lines, printed at the end of the session

ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
