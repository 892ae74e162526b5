import pytest
from hypothesis import HealthCheck, settings

from shockstab.convex_calculus import make_pair

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def burgers():
    return make_pair("burgers", "quadratic_half")


@pytest.fixture
def burgers_q():
    return make_pair("burgers", "quadratic")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
