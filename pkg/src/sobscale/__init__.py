"""Extended Sobolev scales on truncated integer lattices."""

from .errors import (
    CapabilityError,
    DegenerateInputError,
    DimensionError,
    DomainError,
    NumericError,
    NumericWarning,
    ParameterError,
    ResolutionError,
    ShapeError,
    SobscaleError,
    TruncationWarning,
)
from .lattice import LatticeBox, LatticeFunction, japanese_bracket, l2_inner, lp_norm
from .ro import InterpParameter, ROAnalysis, ROFunction
from .spaces import WeightFamily, h_phi_inner, h_phi_norm
from .torus import TorusGrid, TorusSamples, dft, idft

__version__ = "0.1.0"

__all__ = [
    "CapabilityError",
    "DegenerateInputError",
    "DimensionError",
    "DomainError",
    "InterpParameter",
    "LatticeBox",
    "LatticeFunction",
    "NumericError",
    "NumericWarning",
    "ParameterError",
    "ROAnalysis",
    "ROFunction",
    "ResolutionError",
    "ShapeError",
    "SobscaleError",
    "TorusGrid",
    "TorusSamples",
    "TruncationWarning",
    "WeightFamily",
    "dft",
    "h_phi_inner",
    "h_phi_norm",
    "idft",
    "japanese_bracket",
    "l2_inner",
    "lp_norm",
]
