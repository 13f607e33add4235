from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from hyperminor import Edge, Hypergraph, canonical_key, enumerate_hypergraphs, reduce  # noqa: E402

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")


@st.composite
def hypergraphs(draw, max_v: int = 4, max_e: int = 4, directed_only: bool = False):
    n = draw(st.integers(1, max_v))
    vs = [f"x{i}" for i in range(n)]
    m = draw(st.integers(0, max_e))
    edges = []
    for i in range(m):
        if directed_only:
            src = {draw(st.sampled_from(vs))}
            rng = {draw(st.sampled_from(vs))}
        else:
            src = draw(st.sets(st.sampled_from(vs), min_size=1, max_size=n))
            rng = draw(st.sets(st.sampled_from(vs), max_size=n))
        edges.append(Edge(f"e{i}", src, rng))
    return Hypergraph(vs, edges)


_POPULATION = None


def reduced_population():
    """Reduced forms of every class with at most 3 vertices and 3 edges,
    one per isomorphism class."""
    global _POPULATION
    if _POPULATION is None:
        pop = {}
        for H in enumerate_hypergraphs(3, 3):
            R, _ = reduce(H)
            pop.setdefault(canonical_key(R), R)
        _POPULATION = [pop[k] for k in sorted(pop)]
    return _POPULATION


@pytest.fixture(scope="session")
def population():
    return reduced_population()


# one line per acceptance criterion, collected by test_acceptance.py
CRITERIA = {}


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[n])
