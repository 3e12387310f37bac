"""Smallest fixed points of monotone nonexpansive min-max-affine maps.

The core package computes the smallest fixed point of a
min-of-max-of-affine self-map of R^d by policy iteration over exact
rationals, certifying minimality through a spectral-radius test of the
map's directional linearization on the negative cone.  A frontend
compiles a small imperative language to interval bound equations of
this shape, and a FastAPI service plus thin CLI expose the pipeline.
"""

from .core import (
    AffineTerm,
    KleeneResult,
    MaxGroup,
    Policy,
    PwaSystem,
    Vec,
    evaluate,
    kleene_lfp,
    rat,
    restrict,
    validate_system,
    vec,
)
from .errors import (
    DimensionMismatch,
    InvalidPolicy,
    InvalidSystem,
    InvariantBroken,
    MinfixError,
    MonotonicityViolation,
    NoFiniteFixedPoint,
    NormalizationTooLarge,
    ParseError,
    UnboundedBelow,
    Undecidable,
)
from .lp import LinearProgram, build_lp, format_lp, simplex_solve, smallest_fixed_point_policy
from .semidiff import active_sets, directional_derivative, semidifferential
from .solver import SolveOptions, Solution, initial_policy, solve_smallest
from .spectral import (
    Inconclusive,
    RadiusLtOne,
    UnitRadius,
    collatz_wielandt_bound,
    is_unit_gradient,
    negative_cone_test,
)

__version__ = "0.1.0"

__all__ = [
    "AffineTerm", "KleeneResult", "MaxGroup", "Policy", "PwaSystem", "Vec",
    "evaluate", "kleene_lfp", "rat", "restrict", "validate_system", "vec",
    "DimensionMismatch", "InvalidPolicy", "InvalidSystem", "InvariantBroken",
    "MinfixError", "MonotonicityViolation", "NoFiniteFixedPoint",
    "NormalizationTooLarge", "ParseError", "UnboundedBelow", "Undecidable",
    "LinearProgram", "build_lp", "format_lp", "simplex_solve",
    "smallest_fixed_point_policy",
    "active_sets", "directional_derivative", "semidifferential",
    "SolveOptions", "Solution", "initial_policy", "solve_smallest",
    "Inconclusive", "RadiusLtOne", "UnitRadius",
    "collatz_wielandt_bound", "is_unit_gradient", "negative_cone_test",
    "__version__",
]
