"""Verification toolkit for imaged factors in infinite binary words."""

__version__ = "0.1.0"

from .morphisms import Morphism, MorphismError, apply, verify_transfer
from .oracle import FactorOracle, SquareInventory
from .words import enumerate_free, find_repetition, is_free, parse_rational

__all__ = [
    "__version__", "Morphism", "MorphismError", "apply", "verify_transfer",
    "FactorOracle", "SquareInventory", "enumerate_free", "find_repetition",
    "is_free", "parse_rational",
]
