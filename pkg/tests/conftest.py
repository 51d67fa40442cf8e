import random

import pytest
from hypothesis import strategies as st

from flagtorsion.graph import Graph


@st.composite
def graphs(draw, min_n=0, max_n=16):
    n = draw(st.integers(min_n, max_n))
    edges = [(u, v) for v in range(n) for u in range(v)]
    chosen = draw(st.lists(st.booleans(), min_size=len(edges), max_size=len(edges)))
    return Graph.from_edges(n, [e for e, keep in zip(edges, chosen) if keep])


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    return Graph.from_edges(n, [(u, v) for v in range(n) for u in range(v) if rng.random() < p])


@pytest.fixture
def rng():
    return random.Random(20240611)


CRITERIA: list[str] = []


@pytest.fixture
def criterion(capsys):
    """Print one acceptance line immediately and again in the session summary."""

    def emit(line: str) -> None:
        CRITERIA.append(line)
        with capsys.disabled():
            print(f"\n{line}", flush=True)

    return emit


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA:
            terminalreporter.write_line(line)
