import numpy as np
import pytest

from kjnn import PointCloud, pairwise_rankings

A, B, C, D = 0, 1, 2, 3


@pytest.fixture
def p4():
    """Four collinear nodes A=(0,0), B=(0.1,0), C=(0.25,0), D=(0.6,0)."""
    return PointCloud(np.array([[0.0, 0.0], [0.1, 0.0], [0.25, 0.0], [0.6, 0.0]]))


@pytest.fixture
def p4_ranking(p4):
    return pairwise_rankings(p4)


def edges(*pairs):
    return frozenset(tuple(sorted(p)) for p in pairs)


ACCEPTANCE_REPORT: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_REPORT:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_REPORT:
            terminalreporter.write_line(line)
