"""Householder QR whose reflector applications go through a chosen multiply.

The reflectors themselves are built in float; only the two products per step
(``H @ R`` and ``Q @ H``) are routed through the backend, so the quantized
backends show how their product error accumulates over a factorization.
"""
from dataclasses import dataclass, field, replace
from typing import List

import numpy as np

from .distributions import NAMES, generate
from .gemm import XigemmConfig, quantized_gemm_direct, quantized_gemm_full_residual, xigemm
from .matrix import as_dense, gemm_f32
from .metrics import ErrorReport, frobenius_error

METHODS = ("float", "origin", "full", "xigemm")
_KIND_TO_NAME = {v: k for k, v in NAMES.items()}


@dataclass(frozen=True)
class MultiplyBackend:
    kind: str = "float"
    cfg: XigemmConfig = field(default_factory=XigemmConfig)

    def __post_init__(self):
        if self.kind not in METHODS:
            raise ValueError(f"unknown backend {self.kind!r}; choose from {METHODS}")

    def __call__(self, x, y):
        if self.kind == "float":
            return gemm_f32(x, y)
        if self.kind == "origin":
            return quantized_gemm_direct(x, y, self.cfg)
        if self.kind == "full":
            return quantized_gemm_full_residual(x, y, self.cfg)
        return xigemm(x, y, cfg=self.cfg).result


def householder_qr(a, backend=MultiplyBackend(), mode="reduced"):
    """Factor ``a`` (rows >= cols) as ``Q @ R``.

    ``mode="reduced"`` returns ``Q`` as rows x cols and ``R`` as cols x cols;
    ``mode="complete"`` returns the square ``Q`` and the rows x cols ``R``.
    The reflector for column ``k`` maps it to ``alpha * e_k`` with
    ``sign(alpha) = -sign(a_kk)``.
    """
    a = as_dense(a, "A")
    m, n = a.shape
    if m < n:
        raise ValueError(f"need rows >= cols, got {a.shape}")
    if mode not in ("reduced", "complete"):
        raise ValueError(f"mode must be 'reduced' or 'complete', got {mode!r}")
    r = a.copy()
    q = np.eye(m, dtype=np.float32)
    steps = n if m > n else n - 1
    for k in range(steps):
        x = r[k:, k].astype(np.float64)
        norm = np.linalg.norm(x)
        if norm == 0:
            continue
        alpha = -norm if x[0] >= 0 else norm
        v = x.copy()
        v[0] -= alpha
        h = np.eye(m)
        h[k:, k:] -= (2.0 / (v @ v)) * np.outer(v, v)
        h = h.astype(np.float32)
        r = np.array(backend(h, r), dtype=np.float32)
        q = np.array(backend(q, h), dtype=np.float32)
        r[k + 1:, k] = 0.0
    if mode == "reduced":
        return np.ascontiguousarray(q[:, :n]), np.ascontiguousarray(r[:n])
    return q, r


def reconstruction_error(a, q, r):
    """Relative Frobenius error of the float product ``Q @ R`` against ``a``."""
    return frobenius_error(a, gemm_f32(q, r))


@dataclass(frozen=True)
class QrCell:
    size: int
    dist: str
    bits: int
    method: str
    threshold: float
    error: ErrorReport


def qr_error_table(sizes, specs, bits=(4, 8), methods=("origin", "full", "xigemm"),
                   cfg=XigemmConfig(threshold=0.1)) -> List[QrCell]:
    """Reconstruction error of Householder QR for every (size, spec, bits, method)."""
    if not sizes or not specs or not bits or not methods:
        raise ValueError("sizes, specs, bits and methods must be nonempty")
    cells = []
    for size in sizes:
        for spec in specs:
            a = generate(spec, size, size)
            name = _KIND_TO_NAME.get(spec.kind, spec.kind)
            for nbits in bits:
                bcfg = replace(cfg, bits=nbits)
                for method in methods:
                    q, r = householder_qr(a, MultiplyBackend(method, bcfg))
                    cells.append(QrCell(size, name, nbits, method, bcfg.threshold,
                                        reconstruction_error(a, q, r)))
    return cells
