import time
from contextlib import contextmanager

import pytest

ACCEPTANCE_LINES = []


@contextmanager
def _criterion(number, title, budget):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        elapsed = time.perf_counter() - t0
        line = f"AC{number:>2} FAIL  {title} ({elapsed:.2f}s): {type(exc).__name__}: {exc}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        raise
    elapsed = time.perf_counter() - t0
    if elapsed > budget:
        line = f"AC{number:>2} FAIL  {title} ({elapsed:.2f}s > budget {budget}s)"
        ACCEPTANCE_LINES.append(line)
        print(line)
        pytest.fail(f"runtime {elapsed:.2f}s exceeds {budget}s")
    line = f"AC{number:>2} PASS  {title} ({elapsed:.2f}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.fixture
def criterion():
    return _criterion


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s[2:4])):
            terminalreporter.write_line(line)
