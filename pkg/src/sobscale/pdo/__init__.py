"""Discrete pseudo-differential operators on the lattice."""

from .ascale import AScale, ascale_build, ascale_norm, exact_ratio_band, verify_theorem7
from .estimates import (
    EllipticityReport,
    SymbolEstimates,
    dyadic_slope,
    ellipticity_estimate,
    mapping_norm_scan,
    symbol_class_estimate,
)
from .fredholm import FredholmReport, fredholm_surrogate, parametrix_defect, range_decomposition
from .operators import (
    PdoMatrix,
    formal_adjoint,
    multiplier_matrix,
    pdo_apply,
    pdo_apply_with_leakage,
    pdo_matrix,
    read_matrix_bytes,
)
from .symbol import Symbol, Term, grid_for

__all__ = [
    "AScale",
    "EllipticityReport",
    "FredholmReport",
    "PdoMatrix",
    "Symbol",
    "SymbolEstimates",
    "Term",
    "ascale_build",
    "ascale_norm",
    "dyadic_slope",
    "ellipticity_estimate",
    "exact_ratio_band",
    "formal_adjoint",
    "fredholm_surrogate",
    "grid_for",
    "mapping_norm_scan",
    "multiplier_matrix",
    "parametrix_defect",
    "pdo_apply",
    "pdo_apply_with_leakage",
    "pdo_matrix",
    "range_decomposition",
    "read_matrix_bytes",
    "symbol_class_estimate",
    "verify_theorem7",
]
