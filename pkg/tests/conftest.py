import pytest
from hypothesis import settings

from tourfvs.core import Tournament, disjoint_union_forward, paley_tournament, transitive_tournament

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def three_cycle():
    return Tournament.from_arcs(3, [(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def paley7():
    return paley_tournament(7)


@pytest.fixture
def two_cycles_forward(three_cycle):
    return disjoint_union_forward(three_cycle, three_cycle)


@pytest.fixture
def transitive5():
    return transitive_tournament(5)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
