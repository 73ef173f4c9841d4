import json
import pathlib

import pytest
from hypothesis import HealthCheck, settings

DATA = pathlib.Path(__file__).parent / "data"

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# Lines collected by the acceptance module, echoed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def wire_golden():
    return json.loads((DATA / "wire_golden.json").read_text())


@pytest.fixture(scope="session")
def oracle_fixtures():
    return json.loads((DATA / "oracle_fixtures.json").read_text())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
