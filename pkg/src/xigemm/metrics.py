"""Frobenius error of a result against a reference matrix."""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ErrorReport:
    e_r: float            # ||X - X_ref||_F
    e_delta: float        # e_r / ||X_ref||_F; equals e_r when the reference is zero
    max_elem_rel: float   # max |x - x_ref| / |x_ref| over |x_ref| >= 1e-12
    zero_reference: bool = False


def frobenius_error(x_ref, x):
    """Absolute and relative Frobenius error of ``x`` against ``x_ref``, in float64."""
    ref = np.asarray(x_ref, dtype=np.float64)
    val = np.asarray(x, dtype=np.float64)
    if ref.shape != val.shape:
        raise ValueError(f"shape mismatch: {ref.shape} vs {val.shape}")
    diff = val - ref
    e_r = float(np.linalg.norm(diff))
    norm = float(np.linalg.norm(ref))
    big = np.abs(ref) >= 1e-12
    max_rel = float((np.abs(diff[big]) / np.abs(ref[big])).max(initial=0.0))
    if norm == 0:
        return ErrorReport(e_r, e_r, max_rel, zero_reference=True)
    return ErrorReport(e_r, e_r / norm, max_rel)
