import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(42)


def random_monotone(rng, n):
    """A = S + K with S = B B^T / n positive semidefinite and K skew."""
    B = rng.standard_normal((n, n))
    C = rng.standard_normal((n, n))
    return B @ B.T / n + 0.1 * np.eye(n) * rng.uniform(0, 1) + (C - C.T)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
