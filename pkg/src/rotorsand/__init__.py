"""Exact engine for sandpile groups, rotor-routing torsors, and BBY actions."""

from .errors import InvariantViolation
from .multigraph import Multigraph, banana_graph, complete_graph, cycle_graph
from .ribbon import RibbonGraph, RibbonIsomorphism, classify_sides, is_automorphism
from .sandpile import Divisor, chip, group_structure, same_class

__version__ = "0.1.0"

__all__ = [
    "Divisor",
    "InvariantViolation",
    "Multigraph",
    "RibbonGraph",
    "RibbonIsomorphism",
    "banana_graph",
    "chip",
    "classify_sides",
    "complete_graph",
    "cycle_graph",
    "group_structure",
    "is_automorphism",
    "same_class",
    "__version__",
]
