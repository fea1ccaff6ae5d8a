"""Exact, desk-scale constructions around Solovay functions and randomness."""

from .core import INF, NEG_INF, ONE, ZERO, Dyadic, OrderFn, StagedFunction, h_inverse, weight
from .errors import DomainError

__all__ = [
    "INF",
    "NEG_INF",
    "ONE",
    "ZERO",
    "Dyadic",
    "DomainError",
    "OrderFn",
    "StagedFunction",
    "h_inverse",
    "weight",
]

__version__ = "0.1.0"
