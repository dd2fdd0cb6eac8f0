import pytest
from hypothesis import settings

from dynhopf.hopf_kernel import HopfModel, TruncationConfig
from dynhopf.lie_core import build_sl2, build_sln

settings.register_profile("repo", max_examples=40, deadline=None)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def sl2():
    return build_sl2()


@pytest.fixture(scope="session")
def sl3():
    return build_sln(3)


@pytest.fixture
def m2(sl2):
    """sl2 model, k = 1, N = 3."""
    return HopfModel(sl2, 1, TruncationConfig(3, 6, 6))


@pytest.fixture
def m2N2(sl2):
    return HopfModel(sl2, 1, TruncationConfig(2, 6, 6))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, text = results[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {text}")
