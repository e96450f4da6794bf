"""Quantized GEMM pipelines.

Three ways to approximate ``A @ B`` with integer products:

* ``quantized_gemm_direct``: one int product, dequantized ("origin").
* ``quantized_gemm_full_residual``: adds ``A_int RB_int`` and ``RA_int B_int``
  compensation products ("full").
* ``xigemm``: same compensation but with ``A`` and ``B`` thinned to their
  large entries first, switching to sparse products when both thinned
  operands are sparse enough.
"""
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional

import numpy as np

from .matrix import as_dense, axpby_inplace, check_inner, gemm_f32, gemm_int
from .quant import Rounding, Scheme, dequant_product64, dequantize, qmax, quantize
from .sparse import CsrMatrix, ReductionPolicy, retain_cols, retain_rows, spmm_int

STAGES = ("quant", "xxmm", "reduce", "package")


class QuantScheme(str, Enum):
    TENSOR = "tensor"
    VECTOR = "vector"  # per-row scales for A, per-column scales for B


class Path(str, Enum):
    SPARSE_RESIDUAL = "sparse_residual"
    DENSE_RESIDUAL = "dense_residual"


@dataclass(frozen=True)
class XigemmConfig:
    bits: int = 8
    threshold: float = 0.5
    # density below which the sparse products are used; host dependent, see calibrate
    density_limit: float = 1.0
    scheme: QuantScheme = QuantScheme.TENSOR
    policy: ReductionPolicy = ReductionPolicy.AVG
    rounding: Rounding = Rounding.NEAREST
    # divide the mean-|C| statistics by the mean L1 norm of the other operand's
    # vectors, which puts them in the units of the matrix being thinned
    normalize_stats: bool = True
    levels: Optional[float] = None

    def __post_init__(self):
        qmax(self.bits)
        if not self.threshold > 0:
            raise ValueError(f"threshold must be > 0, got {self.threshold}")
        if not 0 < self.density_limit <= 1:
            raise ValueError(f"density_limit must be in (0, 1], got {self.density_limit}")
        object.__setattr__(self, "scheme", QuantScheme(self.scheme))
        object.__setattr__(self, "policy", ReductionPolicy(self.policy))
        object.__setattr__(self, "rounding", Rounding(self.rounding))


@dataclass
class GemmReport:
    result: np.ndarray
    density_a: float
    density_b: float
    path: Path
    timings: Dict[str, int] = field(default_factory=dict)  # stage -> ns

    def stage_shares(self):
        total = sum(self.timings.values())
        return {k: (v / total if total else 0.0) for k, v in self.timings.items()}


class _Clock:
    def __init__(self):
        self.ns = dict.fromkeys(STAGES, 0)

    @contextmanager
    def stage(self, name):
        t0 = time.perf_counter_ns()
        try:
            yield
        finally:
            self.ns[name] += time.perf_counter_ns() - t0


def _operand_schemes(cfg):
    if cfg.scheme is QuantScheme.VECTOR:
        return Scheme.PER_ROW, Scheme.PER_COLUMN
    return Scheme.PER_TENSOR, Scheme.PER_TENSOR


def _quantize_operands(a, b, cfg):
    sa, sb = _operand_schemes(cfg)
    aq = quantize(a, cfg.bits, sa, cfg.rounding, levels=cfg.levels)
    bq = quantize(b, cfg.bits, sb, cfg.rounding, levels=cfg.levels)
    return aq, bq


def _quantize_residuals(a, b, aq, bq, cfg):
    # residuals are range-homogeneous already; one scale each is enough
    ra = a - dequantize(aq)
    rb = b - dequantize(bq)
    raq = quantize(ra, cfg.bits, Scheme.PER_TENSOR, cfg.rounding, levels=cfg.levels)
    rbq = quantize(rb, cfg.bits, Scheme.PER_TENSOR, cfg.rounding, levels=cfg.levels)
    return ra, rb, raq, rbq


def _operands(a, b):
    a = as_dense(a, "A")
    b = as_dense(b, "B")
    check_inner(a.shape, b.shape)
    return a, b


def quantized_gemm_direct(a, b, cfg=XigemmConfig()):
    """Single quantized product, dequantized with the product of the scales."""
    a, b = _operands(a, b)
    aq, bq = _quantize_operands(a, b, cfg)
    return dequant_product64(gemm_int(aq, bq), aq.scales, bq.scales).astype(np.float32)


def quantized_gemm_full_residual(a, b, cfg=XigemmConfig()):
    """Direct product plus both first-order residual products; ``RA @ RB`` is dropped."""
    a, b = _operands(a, b)
    aq, bq = _quantize_operands(a, b, cfg)
    d = dequant_product64(gemm_int(aq, bq), aq.scales, bq.scales)
    _, _, raq, rbq = _quantize_residuals(a, b, aq, bq, cfg)
    p1 = gemm_int(aq, rbq)
    p2 = gemm_int(raq, bq)
    return _compensate(d, p1, p2, aq, bq, raq, rbq)


def _compensate(d, p1, p2, aq, bq, raq, rbq):
    d = d + dequant_product64(p1, aq.scales, rbq.scales)
    d = d + dequant_product64(p2, raq.scales, bq.scales)
    return d.astype(np.float32)


def get_avg_vectors(d):
    """Mean of ``|d|`` over each row and over each column."""
    d = np.asarray(d)
    if d.ndim != 2 or d.size == 0:
        raise ValueError("need a nonempty 2-D matrix")
    absd = np.abs(d.astype(np.float64))
    return absd.mean(axis=1), absd.mean(axis=0)


def reduction_stats(d_f, a, b, aq, bq, cfg):
    """Row statistics for thinning ``A`` and column statistics for ``B``.

    Min-rule statistics already carry the operand scales, so both are used
    with ``lam=1`` in the retention rule.
    """
    absd = np.abs(np.asarray(d_f, dtype=np.float64))
    if cfg.policy is ReductionPolicy.AVG:
        row, col = get_avg_vectors(d_f)
        if cfg.normalize_stats:
            b_l1 = np.abs(b).astype(np.float64).sum(axis=0).mean()
            a_l1 = np.abs(a).astype(np.float64).sum(axis=1).mean()
            row = row / (b_l1 if b_l1 > 0 else 1.0)
            col = col / (a_l1 if a_l1 > 0 else 1.0)
        return row, col
    # min rule: a_ik must stay below M * lam_b[j] * |c_ij| / k for every j
    lam_b = bq.scales.for_cols(absd.shape[1])
    lam_a = aq.scales.for_rows(absd.shape[0])
    row = (absd * lam_b).min(axis=1)
    col = (absd * lam_a).min(axis=0)
    return row, col


def xigemm(a, b, c=None, alpha=1.0, beta=0.0, cfg=XigemmConfig()):
    """``alpha * A @ B + beta * C`` by sparse residual compensation.

    Returns a ``GemmReport`` with the result, the densities of the thinned
    operands, the compensation path taken and per-stage wall times.
    """
    clock = _Clock()
    a, b = _operands(a, b)
    if c is not None:
        c = as_dense(c, "C")
        if c.shape != (a.shape[0], b.shape[1]):
            raise ValueError(f"C has shape {c.shape}, expected {(a.shape[0], b.shape[1])}")

    with clock.stage("quant"):
        aq, bq = _quantize_operands(a, b, cfg)
    with clock.stage("xxmm"):
        p0 = gemm_int(aq, bq)
    with clock.stage("quant"):
        d = dequant_product64(p0, aq.scales, bq.scales)
        _, _, raq, rbq = _quantize_residuals(a, b, aq, bq, cfg)

    with clock.stage("reduce"):
        row, col = reduction_stats(d, a, b, aq, bq, cfg)
        keep_a = retain_rows(a, row, cfg.threshold, cfg.policy)
        keep_b = retain_cols(b, col, cfg.threshold, cfg.policy)
        density_a = float(np.count_nonzero(keep_a)) / keep_a.size
        density_b = float(np.count_nonzero(keep_b)) / keep_b.size
        sparse_path = max(density_a, density_b) < cfg.density_limit
        if sparse_path:
            a_red = CsrMatrix.from_dense(aq.data, keep_a)
            # B' goes on the left as its transpose: RA B' = (B'^T RA^T)^T
            bt_red = CsrMatrix.from_dense(bq.data.T, keep_b.T)

    with clock.stage("xxmm"):
        if sparse_path:
            p1 = spmm_int(a_red, rbq, cfg.bits)
            p2 = np.ascontiguousarray(spmm_int(bt_red, np.ascontiguousarray(raq.data.T), cfg.bits).T)
        else:
            p1 = gemm_int(aq, rbq)
            p2 = gemm_int(raq, bq)

    with clock.stage("package"):
        out = _compensate(d, p1, p2, aq, bq, raq, rbq)
        if c is not None:
            axpby_inplace(out, alpha, c, beta)
        elif alpha != 1:
            out *= np.float32(alpha)

    path = Path.SPARSE_RESIDUAL if sparse_path else Path.DENSE_RESIDUAL
    return GemmReport(out, density_a, density_b, path, clock.ns)


def residual_terms(a, b, cfg=XigemmConfig()):
    """The four float products ``A'B', A'RB, RA B', RA RB`` of the residual split.

    ``A'`` and ``B'`` are the dequantized operands and ``RA``, ``RB`` the float
    residuals, so the four terms sum to ``A @ B`` up to float rounding.
    """
    a, b = _operands(a, b)
    aq, bq = _quantize_operands(a, b, cfg)
    a_deq, b_deq = dequantize(aq), dequantize(bq)
    ra, rb = a - a_deq, b - b_deq
    return gemm_f32(a_deq, b_deq), gemm_f32(a_deq, rb), gemm_f32(ra, b_deq), gemm_f32(ra, rb)
