"""Exact invariant star products on complex flag manifolds of SL(n)."""

__version__ = "0.1.0"

from .flag import FlagConfig, FlagModel, build_model
from .polynomials import PolyZ, PolyZP, poly_arith
from .quantization import QuantizationData, build_quantization
from .scalars import GaussianRational, Q, I
from .weyl import WeylOperator

__all__ = [
    "FlagConfig",
    "FlagModel",
    "GaussianRational",
    "I",
    "PolyZ",
    "PolyZP",
    "Q",
    "QuantizationData",
    "WeylOperator",
    "build_model",
    "build_quantization",
    "poly_arith",
]
