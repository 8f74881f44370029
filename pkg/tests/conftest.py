from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from secs.temporal_graph import TemporalGraph, load_edge_list

from .strategies import FIXTURES

settings.register_profile("default", max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
settings.load_profile("default")


@pytest.fixture
def fig1() -> TemporalGraph:
    return load_edge_list(FIXTURES / "fig1.txt")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
