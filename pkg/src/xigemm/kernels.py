"""Inner loops: float reference GEMM, int GEMM and CSR SpMM.

Every kernel has a numba version and a pure-numpy version with the same
accumulation order, so the two produce bitwise-identical results. The active
set is picked at import time (see ``_jit``); ``get_kernels`` hands out either
set explicitly for benchmarks and cross-checks.
"""
from typing import Callable, NamedTuple, Optional

import numpy as np

from ._jit import HAVE_NUMBA, USE_NUMBA, njit


# --------------------------------------------------------------------------
# numba kernels

@njit
def _gemm_f32_loop(a, b):
    m, k = a.shape
    n = b.shape[1]
    out = np.empty((m, n), dtype=np.float32)
    acc = np.empty(n, dtype=np.float64)
    for i in range(m):
        acc[:] = 0.0
        for p in range(k):
            aip = np.float64(a[i, p])
            for j in range(n):
                acc[j] += aip * np.float64(b[p, j])
        for j in range(n):
            out[i, j] = np.float32(acc[j])
    return out


@njit
def _gemm_int_loop(a, b):
    m, k = a.shape
    n = b.shape[1]
    out = np.zeros((m, n), dtype=np.int32)
    for i in range(m):
        for p in range(k):
            aip = np.int32(a[i, p])
            if aip == 0:
                continue
            for j in range(n):
                out[i, j] += aip * np.int32(b[p, j])
    return out


@njit
def _spmm_f32_loop(row_ptr, col_idx, values, d):
    m = row_ptr.shape[0] - 1
    n = d.shape[1]
    out = np.empty((m, n), dtype=np.float32)
    acc = np.empty(n, dtype=np.float64)
    for i in range(m):
        acc[:] = 0.0
        for t in range(row_ptr[i], row_ptr[i + 1]):
            v = np.float64(values[t])
            c = col_idx[t]
            for j in range(n):
                acc[j] += v * np.float64(d[c, j])
        for j in range(n):
            out[i, j] = np.float32(acc[j])
    return out


@njit
def _spmm_int_loop(row_ptr, col_idx, values, d):
    m = row_ptr.shape[0] - 1
    n = d.shape[1]
    out = np.zeros((m, n), dtype=np.int32)
    for i in range(m):
        for t in range(row_ptr[i], row_ptr[i + 1]):
            v = np.int32(values[t])
            c = col_idx[t]
            for j in range(n):
                out[i, j] += v * np.int32(d[c, j])
    return out


# --------------------------------------------------------------------------
# numpy kernels

def _gemm_f32_numpy(a, b):
    # one rank-1 update per k keeps the per-element order k-ascending
    m, k = a.shape
    n = b.shape[1]
    a64 = a.astype(np.float64)
    b64 = b.astype(np.float64)
    acc = np.zeros((m, n), dtype=np.float64)
    tmp = np.empty((m, n), dtype=np.float64)
    for p in range(k):
        np.multiply(a64[:, p, None], b64[p], out=tmp)
        acc += tmp
    return acc.astype(np.float32)


def _gemm_int_numpy(a, b):
    # integer products stay far below 2**53, so float64 BLAS is exact here
    return (a.astype(np.float64) @ b.astype(np.float64)).astype(np.int32)


def _spmm_slots(row_ptr, col_idx, values, d, acc_dtype):
    # slot p holds the p-th stored entry of every row long enough to have one;
    # walking slots in order reproduces the row-wise ascending-column order
    m = row_ptr.shape[0] - 1
    lengths = np.diff(row_ptr)
    dd = d.astype(acc_dtype)
    acc = np.zeros((m, d.shape[1]), dtype=acc_dtype)
    for p in range(int(lengths.max(initial=0))):
        rows = np.flatnonzero(lengths > p)
        idx = row_ptr[rows] + p
        acc[rows] += values[idx].astype(acc_dtype)[:, None] * dd[col_idx[idx]]
    return acc


def _spmm_f32_numpy(row_ptr, col_idx, values, d):
    return _spmm_slots(row_ptr, col_idx, values, d, np.float64).astype(np.float32)


def _spmm_int_numpy(row_ptr, col_idx, values, d):
    return _spmm_slots(row_ptr, col_idx, values, d, np.int64).astype(np.int32)


class Kernels(NamedTuple):
    name: str
    gemm_f32: Callable
    gemm_int: Callable
    spmm_f32: Callable
    spmm_int: Callable


NUMPY = Kernels("numpy", _gemm_f32_numpy, _gemm_int_numpy, _spmm_f32_numpy, _spmm_int_numpy)
NUMBA: Optional[Kernels] = (
    Kernels("numba", _gemm_f32_loop, _gemm_int_loop, _spmm_f32_loop, _spmm_int_loop)
    if HAVE_NUMBA else None
)
ACTIVE = NUMBA if USE_NUMBA else NUMPY


def get_kernels(name: Optional[str] = None) -> Kernels:
    """Return the kernel set called ``name`` ("numba" / "numpy"), or the active one."""
    if name is None:
        return ACTIVE
    if name == "numpy":
        return NUMPY
    if name == "numba":
        if NUMBA is None:
            raise RuntimeError("numba is not installed")
        return NUMBA
    raise ValueError(f"unknown kernel backend {name!r}")


def available_backends():
    return [k.name for k in (NUMBA, NUMPY) if k is not None]
