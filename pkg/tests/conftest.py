from __future__ import annotations

import pytest

_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES] = []


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line for an acceptance criterion and fail on FAIL."""

    def record(number: int, title: str, failures: list, elapsed: float | None = None):
        status = "PASS" if not failures else "FAIL"
        timing = "" if elapsed is None else f" [{elapsed:.2f}s]"
        line = f"criterion {number}: {status} {title}{timing}"
        if failures:
            line += " :: " + "; ".join(failures)
        request.config.stash[_LINES].append(line)
        print(line)
        assert not failures, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
