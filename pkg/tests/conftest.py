import pytest

from clawbound.graph import enumerate_connected_graphs, from_edge_list, is_claw_free

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def path(n):
    return from_edge_list(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return from_edge_list(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star(leaves):
    return from_edge_list(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


@pytest.fixture(scope="session")
def connected_corpus():
    """Connected graphs on 1..7 vertices, one per isomorphism class."""
    return {n: list(enumerate_connected_graphs(n)) for n in range(1, 8)}


@pytest.fixture(scope="session")
def clawfree_corpus(connected_corpus):
    return {n: [g for g in gs if is_claw_free(g)] for n, gs in connected_corpus.items()}
