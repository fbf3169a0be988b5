import json
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"

# filled by test_acceptance, echoed at the end of the run
ACCEPTANCE_LINES = {}


@pytest.fixture(scope="session")
def oracles():
    raw = json.loads((DATA / "oracles.json").read_text())
    return {k: float(v) for k, v in raw.items() if not k.startswith("_")}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
