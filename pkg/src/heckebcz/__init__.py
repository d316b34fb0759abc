"""Hecke triangle group orbits, BCZ maps and Farey statistics."""
from .algebra import AlgNum, approx, floor_ratio, sign
from .bcz import (BczStep, TrianglePoint, bcz_index, bcz_step, in_triangle, is_periodic,
                  make_point, orbit, region_index, roof)
from .hecke import HeckeContext, Mat2, PlaneVec, dot, make_context, qform, wedge
from .nextterm import NextTermState, advance, seed_custom, seed_identity, sweep, take_until_slope
from .sternbrocot import (StripSpec, UnimodularPair, children, dirichlet_descent,
                          enumerate_strip, iter_strip)

__version__ = "0.1.0"

__all__ = [
    "AlgNum", "approx", "floor_ratio", "sign",
    "BczStep", "TrianglePoint", "bcz_index", "bcz_step", "in_triangle", "is_periodic",
    "make_point", "orbit", "region_index", "roof",
    "HeckeContext", "Mat2", "PlaneVec", "dot", "make_context", "qform", "wedge",
    "NextTermState", "advance", "seed_custom", "seed_identity", "sweep", "take_until_slope",
    "StripSpec", "UnimodularPair", "children", "dirichlet_descent", "enumerate_strip", "iter_strip",
]
