import pytest
from hypothesis import settings

from flagstar.checks import Context
from flagstar.flag import FlagConfig, build_model
from flagstar.quantization import build_quantization

settings.register_profile("exact", max_examples=40, deadline=None)
settings.load_profile("exact")

SL2 = FlagConfig.projective(2)
P2 = FlagConfig.projective(3)
FULL3 = FlagConfig.full(3)


@pytest.fixture(scope="session")
def sl2_model():
    return build_model(SL2)


@pytest.fixture(scope="session")
def q_sl2():
    return build_quantization(SL2, 5)


@pytest.fixture(scope="session")
def q_p2():
    return build_quantization(P2, 3)


@pytest.fixture(scope="session")
def q_full():
    return build_quantization(FULL3, 3)


@pytest.fixture(scope="session")
def ctx_sl2(q_sl2):
    return Context(q_sl2)


@pytest.fixture(scope="session")
def ctx_p2(q_p2):
    return Context(q_p2)


@pytest.fixture(scope="session")
def ctx_full(q_full):
    return Context(q_full)


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path_factory, monkeypatch):
    monkeypatch.setenv("FLAGSTAR_CACHE_DIR", str(tmp_path_factory.getbasetemp() / "cache"))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
