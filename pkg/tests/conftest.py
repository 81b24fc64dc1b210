import numpy as np
import pytest

from spectrank.graph import build_graph

# (label, label, quantity) rows of the three-sector input-output table
ECONOMY = [
    ("agriculture", "agriculture", 7.5),
    ("agriculture", "industry", 6.0),
    ("agriculture", "family", 16.5),
    ("industry", "agriculture", 14.0),
    ("industry", "industry", 6.0),
    ("industry", "family", 30.0),
    ("family", "agriculture", 80.0),
    ("family", "industry", 180.0),
    ("family", "family", 40.0),
]

# exact stationary vector of the chain A->B->C (C dangling), alpha 0.85,
# from rational Gaussian elimination on the 3x3 Google matrix
CHAIN_PAGERANK = (400 / 2169, 740 / 2169, 343 / 723)

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20100205)


@pytest.fixture
def economy():
    return build_graph(ECONOMY)


@pytest.fixture
def chain():
    return build_graph([("A", "B"), ("B", "C")])


@pytest.fixture
def two_cycle():
    return build_graph([("A", "B"), ("B", "A")])


def write_tsv(path, rows):
    path.write_text("".join("\t".join(str(x) for x in row) + "\n" for row in rows), encoding="utf-8")
    return path


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
