"""Compare the numba kernels with the pure-numpy fallbacks.

    python benchmarks/bench_kernels.py --size 128 256 512 --density 0.05 0.3

Prints one line per (kernel, size) with the time of each backend and the
ratio numpy/numba. Both backends must agree bitwise; that is checked first.
"""
import argparse

import numpy as np

from xigemm import CsrMatrix, kernels
from xigemm.calibrate import time_call


def operands(size, density, rng):
    a = rng.standard_normal((size, size)).astype(np.float32)
    b = rng.standard_normal((size, size)).astype(np.float32)
    ai = rng.integers(-127, 128, (size, size)).astype(np.int8)
    bi = rng.integers(-127, 128, (size, size)).astype(np.int8)
    mask = rng.random((size, size)) < density
    s = CsrMatrix.from_dense(np.where(mask, a, 0).astype(np.float32))
    si = CsrMatrix.from_dense(np.where(mask, ai, 0).astype(np.int8))
    return {
        "gemm_f32": lambda k: k.gemm_f32(a, b),
        "gemm_int": lambda k: k.gemm_int(ai, bi),
        f"spmm_f32 d={density}": lambda k: k.spmm_f32(s.row_ptr, s.col_idx, s.values, b),
        f"spmm_int d={density}": lambda k: k.spmm_int(si.row_ptr, si.col_idx, si.values, bi),
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--size", type=int, nargs="+", default=[128, 256, 512])
    p.add_argument("--density", type=float, nargs="+", default=[0.05, 0.3])
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    backends = kernels.available_backends()
    if "numba" not in backends:
        print("numba is not installed; only the numpy backend is available")
    ks = [kernels.get_kernels(name) for name in backends]
    rng = np.random.default_rng(args.seed)

    print(f"{'kernel':<20} {'size':>5} " + " ".join(f"{k.name + ' ms':>11}" for k in ks) + "   numpy/numba")
    for size in args.size:
        for dens in args.density:
            for label, call in operands(size, dens, rng).items():
                if label.startswith("gemm") and dens != args.density[0]:
                    continue  # dense kernels do not depend on density
                outs = [call(k) for k in ks]
                assert all(np.array_equal(outs[0], o) for o in outs[1:]), f"{label}: backends disagree"
                ms = [time_call(lambda k=k: call(k)) / 1e6 for k in ks]
                by_name = dict(zip(backends, ms))
                ratio = f"{by_name['numpy'] / by_name['numba']:>10.2f}x" if "numba" in by_name else ""
                print(f"{label:<20} {size:>5} " + " ".join(f"{t:>11.3f}" for t in ms) + f"   {ratio}")


if __name__ == "__main__":
    main()
