import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from eigbiphoton.medium import AtomicParams, GratingGeometry  # noqa: E402

ACCEPTANCE = {}


@pytest.fixture(scope="session")
def params():
    return AtomicParams.from_lab_units()


@pytest.fixture(scope="session")
def geometry():
    return GratingGeometry()


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
