"""Cubical isoperimetry on doubled rectangles: fillings, oracles, linked-tube constructions."""

from .chains import (
    NORTH,
    OFFSET,
    PRIMAL,
    SOUTH,
    Cell,
    Chain,
    DoubleGeometry,
    RectGeometry,
    boundary,
    double,
    fundamental_class,
    rectangle,
    volumes,
)
from .filler import FillCertificate, NotACycleError, fill_absolute, fill_double, fill_relative
from .generators import equator, linked_pair, random_cycle
from .oracle import intersection_number, linking_number, min_filling

__all__ = [
    "NORTH", "SOUTH", "PRIMAL", "OFFSET", "Cell", "Chain", "DoubleGeometry", "RectGeometry",
    "boundary", "double", "rectangle", "fundamental_class", "volumes",
    "FillCertificate", "NotACycleError", "fill_absolute", "fill_relative", "fill_double",
    "min_filling", "intersection_number", "linking_number",
    "equator", "linked_pair", "random_cycle",
]
__version__ = "0.1.0"
