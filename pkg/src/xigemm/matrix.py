"""Dense containers and the two dense GEMMs.

Dense matrices are plain 2-D C-contiguous ``float32`` numpy arrays and integer
accumulators are ``int32`` arrays; ``as_dense`` is the single entry point that
enforces that.
"""
import numpy as np

from . import kernels

DenseMatrix = np.ndarray
IntMatrix = np.ndarray


def as_dense(x, name="matrix"):
    """Validate ``x`` as a finite 2-D matrix and return it as C-ordered float32."""
    arr = np.asarray(x)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    arr = np.ascontiguousarray(arr, dtype=np.float32)
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains NaN or Inf")
    return arr


def check_inner(a_shape, b_shape):
    if a_shape[1] != b_shape[0]:
        raise ValueError(f"inner dimensions differ: {a_shape} x {b_shape}")


def gemm_f32(a, b):
    """Reference product ``a @ b``.

    Each entry is accumulated in float64 in ascending ``k`` order and rounded
    once to float32, so the result is bitwise reproducible.
    """
    a = as_dense(a, "A")
    b = as_dense(b, "B")
    check_inner(a.shape, b.shape)
    return kernels.ACTIVE.gemm_f32(a, b)


def max_inner_dim(bits):
    """Largest inner dimension for which an int32 accumulator cannot overflow."""
    return 2 ** (31 - 2 * bits - 1)


def gemm_int(aq, bq):
    """Exact integer product of two quantized matrices with int32 accumulation.

    Accepts ``QuantizedMatrix`` objects or raw int8 arrays (treated as 8-bit).
    """
    a, a_bits = _payload(aq)
    b, b_bits = _payload(bq)
    check_inner(a.shape, b.shape)
    k = a.shape[1]
    limit = max_inner_dim(max(a_bits, b_bits))
    if k > limit:
        raise OverflowError(f"inner dimension {k} exceeds {limit}; int32 accumulation may overflow")
    return kernels.ACTIVE.gemm_int(a, b)


def _payload(q):
    data = getattr(q, "data", q)
    bits = getattr(q, "bits", 8)
    data = np.ascontiguousarray(data, dtype=np.int8)
    if data.ndim != 2:
        raise ValueError(f"integer operand must be 2-D, got shape {data.shape}")
    return data, bits


def axpby_inplace(d, alpha, c, beta):
    """``d <- alpha * d + beta * c`` elementwise; returns ``d``."""
    if d.shape != c.shape:
        raise ValueError(f"shape mismatch: {d.shape} vs {c.shape}")
    d *= np.float32(alpha)
    if beta != 0:
        d += np.float32(beta) * c
    return d
