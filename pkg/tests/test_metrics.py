import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xigemm import frobenius_error


def test_identical():
    x = np.arange(6.0).reshape(2, 3)
    r = frobenius_error(x, x)
    assert (r.e_r, r.e_delta, r.max_elem_rel) == (0.0, 0.0, 0.0)


def test_three_four_five():
    r = frobenius_error(np.array([[3.0, 4.0]]), np.zeros((1, 2)))
    assert r.e_r == 5.0 and r.e_delta == 1.0 and r.max_elem_rel == 1.0


def test_zero_reference_flagged():
    r = frobenius_error(np.zeros((2, 2)), np.full((2, 2), 0.5))
    assert r.zero_reference and r.e_delta == r.e_r == 1.0


def test_max_elem_rel_skips_tiny_reference():
    r = frobenius_error(np.array([[0.0, 2.0]]), np.array([[1.0, 3.0]]))
    assert r.max_elem_rel == 0.5


def test_shape_mismatch():
    with pytest.raises(ValueError):
        frobenius_error(np.ones((2, 2)), np.ones((2, 3)))


def test_float64_accumulation():
    # in float32 the small squares vanish next to 1e8 and the norm is exactly 1e4
    ref = np.zeros((1, 1001), np.float32)
    x = np.full((1, 1001), 1e-4, np.float32)
    x[0, 0] = 1e4
    e_r = frobenius_error(ref, x).e_r
    assert e_r > 1e4
    assert e_r == pytest.approx(np.sqrt(1e8 + 1000 * np.float64(np.float32(1e-4)) ** 2), rel=1e-14)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_triangle(seed):
    r = np.random.default_rng(seed)
    x, y, z = (r.standard_normal((5, 4)) for _ in range(3))
    assert frobenius_error(x, z).e_r <= frobenius_error(x, y).e_r + frobenius_error(y, z).e_r + 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.floats(-1e3, 1e3).filter(lambda c: abs(c) > 1e-3))
def test_scale_equivariance(seed, c):
    r = np.random.default_rng(seed)
    x, y = r.standard_normal((5, 4)), r.standard_normal((5, 4))
    base, scaled = frobenius_error(x, y), frobenius_error(c * x, c * y)
    assert scaled.e_r == pytest.approx(abs(c) * base.e_r, rel=1e-12)
    assert scaled.e_delta == pytest.approx(base.e_delta, rel=1e-12)
