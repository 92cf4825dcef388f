"""Quadratic identities between spanning forest polynomials, checked exactly."""

from .forests import forest_poly, spanning_forests
from .graphs import ABPair, MarkedGraph, complete_graph, parse_partition, triangle
from .identities import FormalSum, gen_identity, verify_identity
from .polyring import Poly

__all__ = [
    "ABPair",
    "FormalSum",
    "MarkedGraph",
    "Poly",
    "complete_graph",
    "forest_poly",
    "gen_identity",
    "parse_partition",
    "spanning_forests",
    "triangle",
    "verify_identity",
]
__version__ = "0.1.0"
