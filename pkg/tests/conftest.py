import numpy as np
import pytest

from etensor.tensor import diagonal_tensor


@pytest.fixture
def diag12():
    """Order-3, dim-2 diagonal tensor with entries (1, 2)."""
    return diagonal_tensor(3, [1, 2])


def close(a, b, rtol=1e-10, atol=0.0):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return bool(np.all(np.abs(a - b) <= atol + rtol * np.maximum(np.abs(b), 1e-300)))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.VERDICTS):
        terminalreporter.write_line(mod.VERDICTS[k])
