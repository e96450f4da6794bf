"""Low-precision matrix multiplication with sparse residual compensation."""
from .distributions import DistributionSpec, generate, generate_pair
from .gemm import (GemmReport, Path, QuantScheme, XigemmConfig, get_avg_vectors,
                   quantized_gemm_direct, quantized_gemm_full_residual, residual_terms, xigemm)
from .matrix import as_dense, axpby_inplace, gemm_f32, gemm_int
from .metrics import ErrorReport, frobenius_error
from .qr import MultiplyBackend, householder_qr, qr_error_table
from .quant import (QuantizedMatrix, Rounding, ScaleFactors, Scheme, compute_scale, dequant_product,
                    dequantize, quantize, residual)
from .sparse import CsrMatrix, ReductionPolicy, density, reduce_a, reduce_b, spmm, spmm_int

__version__ = "0.1.0"

__all__ = [
    "CsrMatrix", "DistributionSpec", "ErrorReport", "GemmReport", "MultiplyBackend", "Path",
    "QuantScheme", "QuantizedMatrix", "ReductionPolicy", "Rounding", "ScaleFactors", "Scheme",
    "XigemmConfig", "as_dense", "axpby_inplace", "compute_scale", "density", "dequant_product",
    "dequantize", "frobenius_error", "gemm_f32", "gemm_int", "generate", "generate_pair",
    "get_avg_vectors", "householder_qr", "qr_error_table", "quantize", "quantized_gemm_direct",
    "quantized_gemm_full_residual", "reduce_a", "reduce_b", "residual", "residual_terms",
    "spmm", "spmm_int", "xigemm",
]
