import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default", deadline=None, max_examples=200, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

EXAMPLE_CURVE = (-3440, 77658)
EXAMPLE_POINT = ("129/4", "129/8")


@pytest.fixture(scope="session")
def example_ctx():
    from cmcycles.criteria import build_context

    return build_context(*EXAMPLE_CURVE, D=43, p=11)


@pytest.fixture(scope="session")
def gaussian_ctx():
    from cmcycles.criteria import build_context

    return build_context(3, 0, D=1, p=5)


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("CMCYCLES_CACHE_DIR", str(tmp_path / "cache"))


ACCEPTANCE_LOG: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LOG:
            terminalreporter.write_line(line)
