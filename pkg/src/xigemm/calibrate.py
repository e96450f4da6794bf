"""Find the density below which the sparse products beat the dense ones.

``calibrate_eta`` bisects over density for the point where SpMM wall time
equals GEMM wall time on this host. The result feeds
``XigemmConfig.density_limit``.
"""
import platform
import time
import warnings
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from . import kernels
from .matrix import gemm_int
from .quant import qmax
from .sparse import CsrMatrix, spmm_int

MIN_DENSITY = 1e-4


def machine_fingerprint():
    return {
        "machine": platform.machine(),
        "processor": platform.processor() or "unknown",
        "system": platform.system(),
        "python": platform.python_version(),
        "numpy": np.__version__,
        "kernels": kernels.ACTIVE.name,
    }


def time_call(fn, min_ns=2_000_000, max_reps=1 << 16):
    """Best-of-three mean time per call of ``fn`` in ns.

    Repetitions double until a batch lasts ``min_ns``; a batch that is short
    compared with the clock resolution triggers a warning first.
    """
    resolution_ns = time.get_clock_info("perf_counter").resolution * 1e9
    fn()  # warm-up (jit compile, caches)
    reps = 1
    warned = False
    while True:
        t0 = time.perf_counter_ns()
        for _ in range(reps):
            fn()
        elapsed = time.perf_counter_ns() - t0
        if elapsed < 100 * resolution_ns and not warned:
            warnings.warn("timer resolution too coarse for one call; widening repetitions",
                          RuntimeWarning, stacklevel=2)
            warned = True
        if elapsed >= min_ns or reps >= max_reps:
            break
        reps *= 2
    best = elapsed
    for _ in range(2):
        t0 = time.perf_counter_ns()
        for _ in range(reps):
            fn()
        best = min(best, time.perf_counter_ns() - t0)
    return best / reps


def random_csr(rows, cols, density, rng, bits=8):
    """Random int CSR with about ``density * rows * cols`` nonzeros."""
    top = qmax(bits)
    mask = rng.random((rows, cols)) < density
    vals = rng.integers(1, top + 1, size=(rows, cols)) * rng.choice(np.array([-1, 1]), size=(rows, cols))
    return CsrMatrix.from_dense(vals.astype(np.int8), mask)


@dataclass
class EtaCalibration:
    eta: float
    size: int
    gemm_ns: float
    samples: List[Tuple[float, float]] = field(default_factory=list)  # (density, spmm ns)
    fingerprint: Dict[str, str] = field(default_factory=machine_fingerprint)


def calibrate_eta(size=512, bits=8, seed=0,
                  time_gemm: Optional[Callable[[], float]] = None,
                  time_spmm: Optional[Callable[[float], float]] = None,
                  tol=1e-3, min_density=MIN_DENSITY, max_iter=40):
    """Density at which an int SpMM of a ``size`` square matrix costs as much as a GEMM.

    ``time_gemm()`` and ``time_spmm(density)`` return costs in ns; they
    default to measurements on this host and can be swapped for a cost model.
    The answer lies in ``[min_density, 1]``.
    """
    if time_gemm is None or time_spmm is None:
        rng = np.random.default_rng(seed)
        top = qmax(bits)
        a = rng.integers(-top, top + 1, size=(size, size)).astype(np.int8)
        b = rng.integers(-top, top + 1, size=(size, size)).astype(np.int8)
        if time_gemm is None:
            def time_gemm():
                return time_call(lambda: gemm_int(a, b))
        if time_spmm is None:
            def time_spmm(d):
                s = random_csr(size, size, d, rng, bits)
                return time_call(lambda: spmm_int(s, b, bits))

    gemm_ns = float(time_gemm())
    samples = []

    def faster(d):
        t = float(time_spmm(d))
        samples.append((d, t))
        return t <= gemm_ns

    if faster(1.0):
        return EtaCalibration(1.0, size, gemm_ns, samples)
    if not faster(min_density):
        return EtaCalibration(min_density, size, gemm_ns, samples)
    lo, hi = min_density, 1.0
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if faster(mid):
            lo = mid
        else:
            hi = mid
    return EtaCalibration(lo, size, gemm_ns, samples)
