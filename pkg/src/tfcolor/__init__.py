"""Exact coloring counts and checks of the counting proof for triangle-free graphs."""

__version__ = "0.1.0"

from .chromatic import (
    PartialColoring,
    available_colors,
    chromatic_polynomial,
    coloring_ratio,
    count_colorings,
    count_extensions,
)
from .graph import Graph, is_triangle_free, mycielski, parse_dimacs

__all__ = [
    "Graph",
    "PartialColoring",
    "available_colors",
    "chromatic_polynomial",
    "coloring_ratio",
    "count_colorings",
    "count_extensions",
    "is_triangle_free",
    "mycielski",
    "parse_dimacs",
]
