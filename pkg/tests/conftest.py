import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "towerlab",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("towerlab")

ACCEPTANCE_LINES: dict = {}


@pytest.fixture(scope="session", autouse=True)
def data_dir(tmp_path_factory):
    """Point the point-count cache at a session directory unless one is set."""
    if os.environ.get("TOWERLAB_DATA_DIR"):
        yield os.environ["TOWERLAB_DATA_DIR"]
        return
    d = tmp_path_factory.mktemp("towerlab-data")
    os.environ["TOWERLAB_DATA_DIR"] = str(d)
    yield str(d)
    del os.environ["TOWERLAB_DATA_DIR"]


@pytest.fixture
def acceptance():
    """Record one pass/fail line per criterion for the terminal summary."""

    def record(number: int, title: str, ok: bool, detail: str = ""):
        status = "PASS" if ok else "FAIL"
        ACCEPTANCE_LINES[number] = f"[{status}] criterion {number:2d}: {title}" + (f" ({detail})" if detail else "")
        print(ACCEPTANCE_LINES[number])
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
