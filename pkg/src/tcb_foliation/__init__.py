"""
tcb-foliation

Exact arithmetic toolkit for measured foliations glued from tori with an
obstacle: streets, transversal canonical bases, broken isometries and their
coding semigroups.
"""

__version__ = "0.1.0"

from .core.exact_field import Scalar, parse_scalar
from .core.genus2_glue import broken_isometry_map, five_partition, glue
from .core.torus_flow import FlowTorus, street_set
from .errors import FoliationError

__all__ = [
    "FlowTorus",
    "FoliationError",
    "Scalar",
    "broken_isometry_map",
    "five_partition",
    "glue",
    "parse_scalar",
    "street_set",
]
