import numpy as np
import pytest

from binfringe.optics import gaussian_kernel
from binfringe.patterns import PatternSpec, make_patterns

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record_criterion():
    """Assert a criterion and log one PASS/FAIL line for the terminal summary."""

    def record(name: str, ok: bool, detail: str):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        assert ok, f"{name}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_single():
    return make_patterns(PatternSpec(8, 12, 24, "single"))


@pytest.fixture
def small_dual():
    return make_patterns(PatternSpec(8, 12, 32, "dual"))


@pytest.fixture
def k15():
    return gaussian_kernel(15, 2.0)


@pytest.fixture
def k5():
    return gaussian_kernel(5, 1.0)
