import time

import numpy as np
import pytest

from pihl.numerics import QuadratureSpec

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def quad():
    return QuadratureSpec(abs_tol=1e-12, rel_tol=1e-12)


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


class _Criterion:
    """Times a criterion body and records one PASS/FAIL line for the summary."""

    def __init__(self, number: int, title: str, limit: float):
        self.number, self.title, self.limit = number, title, limit
        self.detail = ""

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        ok = exc_type is None and elapsed < self.limit
        why = self.detail
        if exc_type is not None and not why:
            why = (str(exc).splitlines() or [exc_type.__name__])[0]
        line = f"[{'PASS' if ok else 'FAIL'}] {self.number}. {self.title} ({elapsed:.2f}s / {self.limit:g}s)"
        if why:
            line += f": {why}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        if exc_type is None and not ok:
            raise AssertionError(f"runtime {elapsed:.2f}s exceeds {self.limit:g}s")
        return False


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split(".")[0].split()[-1])):
            terminalreporter.write_line(line)
