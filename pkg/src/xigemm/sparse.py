"""CSR matrices, threshold reduction and sparse x dense products."""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .matrix import as_dense, check_inner, max_inner_dim


class ReductionPolicy(str, Enum):
    AVG = "avg"  # threshold M * mean|c|
    MIN = "min"  # threshold M * lam * min|c| / k


@dataclass(frozen=True, eq=False)
class CsrMatrix:
    rows: int
    cols: int
    row_ptr: np.ndarray  # int64, rows + 1
    col_idx: np.ndarray  # int64, nnz
    values: np.ndarray   # float32 or int8, nnz

    def __post_init__(self):
        rp, ci = self.row_ptr, self.col_idx
        if rp.shape != (self.rows + 1,) or rp[0] != 0 or rp[-1] != ci.size:
            raise ValueError("row_ptr must have rows+1 entries from 0 to nnz")
        if np.any(np.diff(rp) < 0):
            raise ValueError("row_ptr must be nondecreasing")
        if ci.size != self.values.size:
            raise ValueError("col_idx and values differ in length")
        if ci.size:
            if ci.min() < 0 or ci.max() >= self.cols:
                raise ValueError("column index out of range")
            r = np.repeat(np.arange(self.rows), np.diff(rp))
            if np.any((r[1:] == r[:-1]) & (np.diff(ci) <= 0)):
                raise ValueError("column indices must increase strictly within a row")

    @classmethod
    def from_dense(cls, x, keep=None):
        """CSR of the nonzero entries of ``x`` (restricted to ``keep`` when given)."""
        x = np.asarray(x)
        if x.ndim != 2:
            raise ValueError(f"expected a 2-D matrix, got shape {x.shape}")
        mask = x != 0
        if keep is not None:
            mask &= keep
        r, c = np.nonzero(mask)
        row_ptr = np.zeros(x.shape[0] + 1, dtype=np.int64)
        np.cumsum(np.bincount(r, minlength=x.shape[0]), out=row_ptr[1:])
        return cls(x.shape[0], x.shape[1], row_ptr, c.astype(np.int64), np.ascontiguousarray(x[r, c]))

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def nnz(self):
        return int(self.col_idx.size)

    def to_dense(self):
        out = np.zeros(self.shape, dtype=self.values.dtype)
        r = np.repeat(np.arange(self.rows), np.diff(self.row_ptr))
        out[r, self.col_idx] = self.values
        return out

    def __eq__(self, other):
        if not isinstance(other, CsrMatrix):
            return NotImplemented
        return (self.shape == other.shape
                and np.array_equal(self.row_ptr, other.row_ptr)
                and np.array_equal(self.col_idx, other.col_idx)
                and self.values.dtype == other.values.dtype
                and np.array_equal(self.values, other.values))


def density(s):
    """Fraction of stored entries, ``nnz / (rows * cols)``."""
    size = s.rows * s.cols
    return s.nnz / size if size else 0.0


def thresholds(stat, m, policy=ReductionPolicy.AVG, inner=1, lam=1.0):
    """Per-row (or per-column) magnitude below which entries are dropped.

    A zero statistic gives threshold 0, so nothing in that row/column is dropped.
    """
    if not m > 0:
        raise ValueError(f"threshold M must be > 0, got {m}")
    stat = np.asarray(stat, dtype=np.float64)
    policy = ReductionPolicy(policy)
    if policy is ReductionPolicy.AVG:
        scaled = stat
    else:
        scaled = np.asarray(lam, dtype=np.float64) * stat / inner
    with np.errstate(invalid="ignore"):
        thr = m * scaled
    return np.where(scaled == 0, 0.0, thr)


def retain_rows(a, c_row_stat, m, policy=ReductionPolicy.AVG, lambda_b=1.0):
    """Mask of entries of ``a`` kept by the row-wise rule: ``|a_ik| > thr_i``."""
    c_row_stat = np.asarray(c_row_stat)
    if c_row_stat.shape != (a.shape[0],):
        raise ValueError(f"need {a.shape[0]} row statistics, got shape {c_row_stat.shape}")
    thr = thresholds(c_row_stat, m, policy, a.shape[1], lambda_b)
    return np.abs(a) > thr[:, None]


def retain_cols(b, c_col_stat, m, policy=ReductionPolicy.AVG, lambda_a=1.0):
    """Mask of entries of ``b`` kept by the column-wise rule: ``|b_kj| > thr_j``."""
    c_col_stat = np.asarray(c_col_stat)
    if c_col_stat.shape != (b.shape[1],):
        raise ValueError(f"need {b.shape[1]} column statistics, got shape {c_col_stat.shape}")
    thr = thresholds(c_col_stat, m, policy, b.shape[0], lambda_a)
    return np.abs(b) > thr[None, :]


def reduce_a(a, c_row_stat, m, policy=ReductionPolicy.AVG, lambda_b=1.0):
    """Sparse copy of ``a`` holding only entries above their row threshold."""
    a = as_dense(a, "A")
    return CsrMatrix.from_dense(a, retain_rows(a, c_row_stat, m, policy, lambda_b))


def reduce_b(b, c_col_stat, m, policy=ReductionPolicy.AVG, lambda_a=1.0):
    """Sparse copy of ``b`` holding only entries above their column threshold."""
    b = as_dense(b, "B")
    return CsrMatrix.from_dense(b, retain_cols(b, c_col_stat, m, policy, lambda_a))


def spmm(s, d):
    """``densify(s) @ d`` for a float CSR and a dense float matrix.

    Same float64, k-ascending accumulation as ``gemm_f32``.
    """
    d = as_dense(d, "D")
    check_inner(s.shape, d.shape)
    return kernels.ACTIVE.spmm_f32(s.row_ptr, s.col_idx, s.values.astype(np.float32, copy=False), d)


def spmm_int(s, d, bits=8):
    """Exact int32 product of an int8 CSR with an int8 dense payload."""
    data = np.ascontiguousarray(getattr(d, "data", d), dtype=np.int8)
    bits = max(bits, getattr(d, "bits", bits))
    check_inner(s.shape, data.shape)
    if s.cols > max_inner_dim(bits):
        raise OverflowError(f"inner dimension {s.cols} exceeds {max_inner_dim(bits)}")
    return kernels.ACTIVE.spmm_int(s.row_ptr, s.col_idx, s.values.astype(np.int8, copy=False), data)
