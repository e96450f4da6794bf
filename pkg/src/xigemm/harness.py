"""Evaluation sweeps behind the CLI. Each returns rows keyed by ``COLUMNS``."""
import csv
import io
import time
from dataclasses import replace

import numpy as np

from .distributions import DistributionSpec, generate_pair
from .gemm import STAGES, XigemmConfig, quantized_gemm_direct, quantized_gemm_full_residual, xigemm
from .matrix import gemm_f32
from .metrics import frobenius_error
from .qr import qr_error_table

COLUMNS = ("method", "dist", "size", "bits", "threshold", "density_a", "density_b",
           "path", "e_r", "e_delta", "stage", "time_ns")

DEFAULT_DISTS = ("uniform", "normal", "esp", "poison", "kar")
PRECISION_THRESHOLDS = (1.0, 0.5, 0.2, 0.1)
DENSITY_THRESHOLDS = tuple(round(0.1 * i, 1) for i in range(1, 11))


def _row(**kw):
    row = dict.fromkeys(COLUMNS, "")
    row.update(kw)
    return row


def _timed(fn):
    t0 = time.perf_counter_ns()
    out = fn()
    return out, time.perf_counter_ns() - t0


def precision_sweep(sizes=(256,), bits=(8,), thresholds=PRECISION_THRESHOLDS, dists=DEFAULT_DISTS,
                    methods=("origin", "full", "xigemm"), seed=42, cfg=XigemmConfig()):
    """Error of each method against the float reference product."""
    rows = []
    for dist in dists:
        spec = DistributionSpec.from_name(dist, seed)
        for size in sizes:
            a, b = generate_pair(spec, size, size, size)
            ref = gemm_f32(a, b)
            for nbits in bits:
                bcfg = replace(cfg, bits=nbits)
                common = dict(dist=dist, size=size, bits=nbits, stage="total")
                for method in methods:
                    if method == "xigemm":
                        for th in thresholds:
                            rep = xigemm(a, b, cfg=replace(bcfg, threshold=th))
                            err = frobenius_error(ref, rep.result)
                            rows.append(_row(method=method, threshold=th, density_a=rep.density_a,
                                             density_b=rep.density_b, path=rep.path.value, e_r=err.e_r,
                                             e_delta=err.e_delta, time_ns=sum(rep.timings.values()),
                                             **common))
                        continue
                    fn, path = {
                        "origin": (lambda: quantized_gemm_direct(a, b, bcfg), "direct"),
                        "full": (lambda: quantized_gemm_full_residual(a, b, bcfg), "dense_residual"),
                        "float": (lambda: gemm_f32(a, b), "float"),
                    }[method]
                    out, ns = _timed(fn)
                    err = frobenius_error(ref, out)
                    rows.append(_row(method=method, path=path, e_r=err.e_r, e_delta=err.e_delta,
                                     time_ns=ns, **common))
    return rows


def density_sweep(sizes=(256,), bits=(8,), thresholds=DENSITY_THRESHOLDS, dists=DEFAULT_DISTS,
                  seed=42, cfg=XigemmConfig()):
    """Density of the thinned operands as the threshold grows."""
    rows = []
    for dist in dists:
        spec = DistributionSpec.from_name(dist, seed)
        for size in sizes:
            a, b = generate_pair(spec, size, size, size)
            ref = gemm_f32(a, b)
            for nbits in bits:
                for th in sorted(thresholds):
                    rep = xigemm(a, b, cfg=replace(cfg, bits=nbits, threshold=th))
                    err = frobenius_error(ref, rep.result)
                    rows.append(_row(method="xigemm", dist=dist, size=size, bits=nbits, threshold=th,
                                     density_a=rep.density_a, density_b=rep.density_b,
                                     path=rep.path.value, e_r=err.e_r, e_delta=err.e_delta))
    return rows


def stage_timing(sizes=(128, 512), bits=(8,), threshold=0.5, dists=("uniform",), seed=42,
                 cfg=XigemmConfig(), repeats=3):
    """Per-stage wall time of ``xigemm``; the fastest of ``repeats`` runs is kept."""
    rows = []
    for dist in dists:
        spec = DistributionSpec.from_name(dist, seed)
        for size in sizes:
            a, b = generate_pair(spec, size, size, size)
            for nbits in bits:
                bcfg = replace(cfg, bits=nbits, threshold=threshold)
                best = None
                for _ in range(max(1, repeats)):
                    rep = xigemm(a, b, cfg=bcfg)
                    if best is None or sum(rep.timings.values()) < sum(best.timings.values()):
                        best = rep
                for stage in STAGES:
                    rows.append(_row(method="xigemm", dist=dist, size=size, bits=nbits,
                                     threshold=threshold, density_a=best.density_a,
                                     density_b=best.density_b, path=best.path.value,
                                     stage=stage, time_ns=best.timings[stage]))
    return rows


def stage_shares(rows):
    """``{(dist, size, bits): {stage: share}}`` from ``stage_timing`` rows."""
    totals = {}
    for r in rows:
        totals.setdefault((r["dist"], r["size"], r["bits"]), {})[r["stage"]] = r["time_ns"]
    out = {}
    for key, stages in totals.items():
        total = sum(stages.values())
        out[key] = {s: (t / total if total else 0.0) for s, t in stages.items()}
    return out


def qr_rows(sizes=(64,), dists=("uniform", "normal", "esp", "kar"), bits=(4, 8),
            methods=("origin", "full", "xigemm"), seed=11, cfg=XigemmConfig(threshold=0.1)):
    specs = [DistributionSpec.from_name(d, seed) for d in dists]
    cells = qr_error_table(sizes, specs, bits, methods, cfg)
    return [_row(method=c.method, dist=c.dist, size=c.size, bits=c.bits,
                 threshold=c.threshold if c.method == "xigemm" else "",
                 e_r=c.error.e_r, e_delta=c.error.e_delta, stage="qr")
            for c in cells]


# --------------------------------------------------------------------------
# output

def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.6g}"
    return str(v)


def to_csv(rows):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _fmt(r[k]) for k in COLUMNS})
    return buf.getvalue()


def to_markdown(rows, columns=None):
    """Pipe table of ``rows``; columns that are empty in every row are left out."""
    if columns is None:
        columns = [c for c in COLUMNS if any(r[c] != "" for r in rows)]
    lines = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
    for r in rows:
        lines.append("| " + " | ".join(_fmt(r[c]) for c in columns) + " |")
    return "\n".join(lines) + "\n"


def qr_markdown(rows):
    """Matrix type / method rows with one relative-error column per bit width."""
    bit_list = sorted({r["bits"] for r in rows})
    lines = ["| matrix type | method | size | " + " | ".join(f"int{b} ER" for b in bit_list) + " |",
             "|---|---|---|" + "---|" * len(bit_list)]
    seen = []
    for r in rows:
        key = (r["dist"], r["method"], r["size"])
        if key not in seen:
            seen.append(key)
    for dist, method, size in seen:
        vals = {r["bits"]: r["e_delta"] for r in rows
                if (r["dist"], r["method"], r["size"]) == (dist, method, size)}
        cells = [_fmt(vals[b]) if b in vals else "" for b in bit_list]
        lines.append(f"| {dist} | {method} | {size} | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def shares_markdown(rows):
    shares = stage_shares(rows)
    lines = ["| dist | size | bits | " + " | ".join(STAGES) + " |", "|---|---|---|" + "---|" * len(STAGES)]
    for (dist, size, nbits), st in shares.items():
        lines.append(f"| {dist} | {size} | {nbits} | " + " | ".join(f"{st.get(s, 0.0):.3f}" for s in STAGES) + " |")
    return "\n".join(lines) + "\n"
