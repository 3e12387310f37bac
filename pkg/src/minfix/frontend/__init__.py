"""Parsers and compilers feeding the fixed-point solver.

Three input formats produce named min-max-affine systems: a direct
equation format (.eqs), a toy imperative language compiled to interval
bound equations (.tc), and a state/action matrix format (.game).
"""

from .equations import NamedSystem, parse_equations, print_equations
from .expr import (
    Atom,
    Expr,
    Inf,
    MaxOf,
    MinOf,
    NEG_INF,
    POS_INF,
    Shift,
    eval_expr,
    normalize_expr,
    normalize_system,
)
from .game import parse_game
from .prepass import PrepassReport, eliminate_infinities
from .program import Program, generate_equations, parse_program

__all__ = [
    "Atom", "Expr", "Inf", "MaxOf", "MinOf", "NEG_INF", "POS_INF", "Shift",
    "NamedSystem", "PrepassReport", "Program",
    "eliminate_infinities", "eval_expr", "generate_equations",
    "normalize_expr", "normalize_system",
    "parse_equations", "parse_game", "parse_program", "print_equations",
]
