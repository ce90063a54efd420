import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

from rainbowsub.constructions import complete_graph_1f, hypercube  # noqa: E402
from rainbowsub.graph import build_graph  # noqa: E402


@pytest.fixture
def triangle():
    return build_graph(3, [(0, 1, 0), (1, 2, 1), (0, 2, 2)])


@pytest.fixture
def cube():
    return hypercube(3)


@pytest.fixture
def k4():
    return complete_graph_1f(4)


@pytest.fixture
def k4_pendant():
    base = complete_graph_1f(4)
    return build_graph(5, list(base.edges) + [(3, 4, 99)])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
