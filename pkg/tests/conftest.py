from fractions import Fraction

import pytest
from hypothesis import settings

from lilsigma.series import RatioPair

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def pp32():
    return RatioPair(3, 2)


@pytest.fixture
def pp21():
    return RatioPair(2, 1)


def F(*args):
    return Fraction(*args)


ACCEPTANCE_LINES = []


def record(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
