"""Symmetric linear quantization to 4- or 8-bit integers.

A value ``a`` maps to ``round(lam * a)`` clamped to ``[-(2**(n-1) - 1), 2**(n-1) - 1]``
with ``lam = (2**(n-1) - 1) / max|a|``. The max-abs statistic is taken over the
whole tensor, each row, or each column.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .matrix import as_dense

SUPPORTED_BITS = (4, 8)


class Rounding(str, Enum):
    NEAREST = "nearest"          # ties away from zero
    FLOOR = "floor"              # toward -inf
    TOWARD_ZERO = "toward_zero"  # C-style cast


class Scheme(str, Enum):
    PER_TENSOR = "tensor"
    PER_ROW = "row"
    PER_COLUMN = "column"


def qmax(bits):
    """Largest integer magnitude used at ``bits`` bits."""
    if bits not in SUPPORTED_BITS:
        raise ValueError(f"bits must be one of {SUPPORTED_BITS}, got {bits}")
    return 2 ** (bits - 1) - 1


@dataclass(frozen=True)
class ScaleFactors:
    scheme: Scheme
    values: np.ndarray  # float64, length 1, rows or cols

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64).ravel()
        if v.size == 0 or not np.all(np.isfinite(v)) or not np.all(v > 0):
            raise ValueError("scale factors must be positive and finite")
        object.__setattr__(self, "values", v)

    def for_rows(self, rows):
        """Scales as a column vector broadcastable against ``rows`` rows."""
        if self.scheme is Scheme.PER_TENSOR:
            return self.values.reshape(1, 1)
        if self.scheme is not Scheme.PER_ROW or self.values.size != rows:
            raise ValueError(f"{self.scheme.value} scales cannot index {rows} rows")
        return self.values[:, None]

    def for_cols(self, cols):
        if self.scheme is Scheme.PER_TENSOR:
            return self.values.reshape(1, 1)
        if self.scheme is not Scheme.PER_COLUMN or self.values.size != cols:
            raise ValueError(f"{self.scheme.value} scales cannot index {cols} columns")
        return self.values[None, :]

    def broadcast(self, shape):
        """Scale for every element of a ``shape`` matrix."""
        rows, cols = shape
        if self.scheme is Scheme.PER_TENSOR:
            return self.values.reshape(1, 1)
        if self.scheme is Scheme.PER_ROW:
            return self.for_rows(rows)
        return self.for_cols(cols)


@dataclass(frozen=True)
class QuantizedMatrix:
    data: np.ndarray  # int8, values within +-qmax(bits)
    bits: int
    scales: ScaleFactors
    rounding: Rounding

    @property
    def shape(self):
        return self.data.shape

    @property
    def rows(self):
        return self.data.shape[0]

    @property
    def cols(self):
        return self.data.shape[1]


def compute_scale(max_abs, bits, levels=None):
    """Scale mapping ``max_abs`` onto ``levels`` (default ``2**(bits-1) - 1``).

    An all-zero input (``max_abs == 0``) gets scale 1.
    """
    if not np.isfinite(max_abs) or max_abs < 0:
        raise ValueError(f"max_abs must be finite and >= 0, got {max_abs}")
    top = qmax(bits) if levels is None else levels
    if max_abs == 0:
        return 1.0
    return top / float(max_abs)


def _round(t, rounding):
    if rounding is Rounding.NEAREST:
        return np.copysign(np.floor(np.abs(t) + 0.5), t)
    if rounding is Rounding.FLOOR:
        return np.floor(t)
    if rounding is Rounding.TOWARD_ZERO:
        return np.trunc(t)
    raise ValueError(f"unknown rounding mode {rounding!r}")


def _slice_max(a, scheme):
    absa = np.abs(a).astype(np.float64)
    if scheme is Scheme.PER_TENSOR:
        return np.array([absa.max(initial=0.0)])
    if scheme is Scheme.PER_ROW:
        return absa.max(axis=1, initial=0.0)
    return absa.max(axis=0, initial=0.0)


def quantize(a, bits=8, scheme=Scheme.PER_TENSOR, rounding=Rounding.NEAREST,
             levels=None, scales=None):
    """Quantize a dense matrix.

    ``levels`` replaces the integer that the slice maximum maps onto; ``scales``
    bypasses the max-abs statistic entirely with explicit scale values. Both
    exist to replay hand-worked examples that use other scale conventions.
    """
    a = as_dense(a, "A")
    scheme = Scheme(scheme)
    rounding = Rounding(rounding)
    top = qmax(bits)
    a64 = a.astype(np.float64)
    if scales is not None:
        sf = ScaleFactors(scheme, np.broadcast_to(np.asarray(scales, np.float64), _scale_len(a.shape, scheme)))
        t = a64 * sf.broadcast(a.shape)
    else:
        numer = top if levels is None else float(levels)
        amax = _slice_max(a, scheme)
        safe = np.where(amax > 0, amax, 1.0)
        sf = ScaleFactors(scheme, np.where(amax > 0, numer / safe, 1.0))
        # a * numer / amax rather than a * lam: the max element lands on numer exactly.
        # All-zero slices divide by 1 and stay zero.
        t = a64 * numer / ScaleFactors(scheme, safe).broadcast(a.shape)
    q = np.clip(_round(t, rounding), -top, top).astype(np.int8)
    return QuantizedMatrix(q, bits, sf, rounding)


def _scale_len(shape, scheme):
    if scheme is Scheme.PER_TENSOR:
        return (1,)
    return (shape[0],) if scheme is Scheme.PER_ROW else (shape[1],)


def dequantize(q):
    """Float32 matrix ``q.data / lam`` with the scale applicable to each entry."""
    lam = q.scales.broadcast(q.shape)
    return (q.data.astype(np.float64) / lam).astype(np.float32)


def residual(a, q):
    """``A - dequantize(q)``, the part of ``A`` the quantized grid cannot represent."""
    a = as_dense(a, "A")
    if a.shape != q.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {q.shape}")
    return a - dequantize(q)


def _product_scales(p_shape, scales_a, scales_b):
    rows, cols = p_shape
    if scales_a.scheme is Scheme.PER_COLUMN:
        raise ValueError("left operand scales must be per-tensor or per-row")
    if scales_b.scheme is Scheme.PER_ROW:
        raise ValueError("right operand scales must be per-tensor or per-column")
    return scales_a.for_rows(rows) * scales_b.for_cols(cols)


def dequant_product64(p, scales_a, scales_b):
    """``dequant_product`` without the final rounding to float32."""
    p = np.asarray(p)
    return p.astype(np.float64) / _product_scales(p.shape, scales_a, scales_b)


def dequant_product(p, scales_a, scales_b):
    """Bring an integer product back to float: ``P[i, j] / (lam_a[i] * lam_b[j])``."""
    return dequant_product64(p, scales_a, scales_b).astype(np.float32)
