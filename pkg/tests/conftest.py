import numpy as np
import pytest

from xigemm import kernels

# Inputs of the hand-worked 3x3 example. A[1, 1] carries the five digits of the
# quoted maximum (1.58014) instead of the four-digit 1.5801 shown in the matrix.
EXAMPLE_A = np.array([[0.2735, -0.1588, 0.1218],
                      [0.0953, 1.58014, -0.4861],
                      [-0.2394, 0.1602, 0.4294]], dtype=np.float32)
EXAMPLE_B = np.array([[3.9284, -0.0195, -0.3836],
                      [-0.3288, 2.2353, -0.1895],
                      [-0.1376, 0.0545, -0.3641]], dtype=np.float32)
EXAMPLE_C = np.array([[1.1100, -0.3538, -0.1192],
                      [-0.0783, 3.5038, -0.1590],
                      [-1.0521, 0.3861, -0.0949]])
EXAMPLE_A_INT = np.array([[11, -6, 4], [3, 64, -19], [-9, 6, 17]])
EXAMPLE_B_INT = np.array([[63, 0, -6], [-5, 36, -3], [-2, 0, -5]])
EXAMPLE_C_QUANT = np.array([[1.0836, -0.3273, -0.1031],
                            [-0.1409, 3.4917, -0.1743],
                            [-0.9563, 0.3273, -0.0743]])
EXAMPLE_C_ROW = np.array([0.5047, 1.2690, 0.4526])
EXAMPLE_C_COL = np.array([0.7269, 1.3821, 0.1172])
EXAMPLE_RA = np.array([[0.0020, -0.0107, 0.0231],
                       [0.0212, 0.0000, -0.0170],
                       [-0.0172, 0.0120, 0.0097]])
EXAMPLE_RB = np.array([[0.0614, -0.0195, -0.0153],
                       [-0.0219, 0.0256, -0.0053],
                       [-0.0148, 0.0545, -0.0572]])
EXAMPLE_A_RED = np.array([[0.2735, 0, 0], [0, 1.58014, 0], [0, 0.1602, 0.4294]], dtype=np.float32)
EXAMPLE_B_RED = np.array([[3.9284, 0, 0], [0, 2.2353, 0], [0, 0, 0]], dtype=np.float32)
EXAMPLE_C_COMP = np.array([[1.1077, -0.3573, -0.1070],
                           [-0.0878, 3.5311, -0.1819],
                           [-1.0356, 0.3817, -0.0987]])
# example scale convention: A uses 64 levels, B the printed scale (which puts
# the B maximum at 63.9999 -> 63 under truncation)
EXAMPLE_LEVELS_A = 64
EXAMPLE_SCALE_B = 16.2916


@pytest.fixture(params=kernels.available_backends())
def kernel_set(request):
    return kernels.get_kernels(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


_ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Record one pass/fail line; call as ``criterion(n, text, ok)`` then assert."""
    def record(number, text, ok):
        _ACCEPTANCE.append((number, text, bool(ok)))
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, text, ok in sorted(_ACCEPTANCE, key=lambda t: t[0]):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {text}")
