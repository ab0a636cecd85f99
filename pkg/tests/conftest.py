import numpy as np
import pytest

from mirrorent.hilbert import CompositeSpace, StateVector


def random_state(rng, dims) -> StateVector:
    amps = rng.standard_normal(dims) + 1j * rng.standard_normal(dims)
    return StateVector(CompositeSpace.of(*dims), amps).normalized()


@pytest.fixture
def rng():
    return np.random.default_rng(20141215)


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
