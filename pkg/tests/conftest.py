import numpy as np
import pytest

from wqe.states import RngStream


@pytest.fixture
def gen():
    return RngStream(20240601, 0).generator()


def assert_close(a, b, atol=1e-10):
    np.testing.assert_allclose(np.asarray(a), np.asarray(b), atol=atol, rtol=0)


ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
