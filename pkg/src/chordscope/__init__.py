"""Wigner functions, chord functions and phase-space correlations for one
degree of freedom, with closed-form and semiclassical oracles."""

from chordscope.core import (
    ComplexField,
    DualGridPair,
    PhaseVector,
    PlanckContext,
    PositionGrid,
    make_dual_grids,
    skew_product,
)

__version__ = "0.1.0"

__all__ = [
    "ComplexField",
    "DualGridPair",
    "PhaseVector",
    "PlanckContext",
    "PositionGrid",
    "make_dual_grids",
    "skew_product",
]
