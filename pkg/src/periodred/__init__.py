"""Reduce period integrals to volumes of compact semi-algebraic sets.

An integral of a rational function over a semi-algebraic set is rewritten,
one elementary step at a time (additivity in the domain or the integrand,
change of variables), until it is the volume of a single compact set.
"""

from .exactnum import AlgNum, sqrt_in_field
from .poly import Poly, RatFunc
from .semialg import BasicSet, Condition, IntegralPiece, SemiAlgSet
from .parsing import ParseError, parse_problem, parse_ratfunc, parse_set
from .projcharts import compactify_domain
from .blowup2 import resolve_poles, resolve_poles_2d
from .hypograph import assemble_disjoint, graph_set
from .diffvol import difference_set
from .pipeline import reduce_period
from .trace import ReductionTrace

__all__ = [
    "AlgNum",
    "sqrt_in_field",
    "Poly",
    "RatFunc",
    "Condition",
    "BasicSet",
    "SemiAlgSet",
    "IntegralPiece",
    "ParseError",
    "parse_problem",
    "parse_set",
    "parse_ratfunc",
    "compactify_domain",
    "resolve_poles",
    "resolve_poles_2d",
    "graph_set",
    "assemble_disjoint",
    "difference_set",
    "reduce_period",
    "ReductionTrace",
]

__version__ = "0.1.0"
