import sys

import pytest
from hypothesis import settings

from iiq import EngineConfig

# first calls may pay numba compilation, so wall-clock deadlines are meaningless
settings.register_profile("iiq", deadline=None)
settings.load_profile("iiq")


@pytest.fixture
def config():
    return EngineConfig()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.REPORT, key=lambda s: int(s.split()[1].rstrip("."))):
        terminalreporter.write_line(line)
