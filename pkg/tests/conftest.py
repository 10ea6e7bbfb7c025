import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(autouse=True, scope="session")
def _isolated_cache(tmp_path_factory):
    os.environ["HERMLAT_CACHE_DIR"] = str(tmp_path_factory.mktemp("cache"))
    yield


ACCEPTANCE_LINES: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: (int(k.rstrip("abcdefg")), k)):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
