"""Certified simultaneous piecewise-linear approximation of two plane algebraic curves."""

from .arith import Dyadic, IBox, Interval
from .kernels import BACKEND
from .oracle import CertifiedRoot, Inconclusive, certify_intersections, check_smooth_transversal
from .pipeline import Result, solve
from .poly import BivariatePolynomial, CurvePair, parse_polynomial
from .subdivision import MaxDepthExceeded

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BivariatePolynomial",
    "CertifiedRoot",
    "CurvePair",
    "Dyadic",
    "IBox",
    "Inconclusive",
    "Interval",
    "MaxDepthExceeded",
    "Result",
    "certify_intersections",
    "check_smooth_transversal",
    "parse_polynomial",
    "solve",
]
