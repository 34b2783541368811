"""Exact core: field arithmetic, tori, words, gluing, coding and the oracle."""

from .exact_field import QuadraticField, Scalar, parse_scalar
from .torus_flow import FlowTorus, StreetSet, street_set

__all__ = ["FlowTorus", "QuadraticField", "Scalar", "StreetSet", "parse_scalar", "street_set"]
