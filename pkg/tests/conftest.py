import contextlib

import numpy as np
import pytest

_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def acceptance(request):
    """Context manager recording one acceptance criterion as PASS/FAIL."""
    results = request.config.stash[_ACCEPTANCE]

    @contextlib.contextmanager
    def criterion(label, detail=""):
        try:
            yield
        except BaseException:
            results.append(("FAIL", label, detail))
            raise
        results.append(("PASS", label, detail))

    return criterion


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_ACCEPTANCE, [])
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for status, label, detail in results:
        terminalreporter.write_line(f"{status} {label}" + (f" :: {detail}" if detail else ""))


@pytest.fixture(scope="session")
def selftest_default():
    """One timed full selftest run at the default seed, shared across tests."""
    import time

    from overlap_bounds.selftest import run_all

    start = time.perf_counter()
    outcome = run_all(42)
    return outcome, time.perf_counter() - start
