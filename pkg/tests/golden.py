"""The 12-coordinate nested-loop bound system used as the golden fixture.

`reference_map` is a deliberately independent oracle: a straight-line
transcription of the twelve coordinate formulas using Python min/max,
never touching the package's evaluator.
"""

from __future__ import annotations

from fractions import Fraction as F

from minfix.core import Policy, PwaSystem, const_term, group, system, unit_term, vec

DIM = 12
X2M, X2P, X7M, X7P, Y2M, Y2P, Y4M, Y4P, Y6M, Y6P, Y7M, Y7P = range(12)

VAR_NAMES = ("x2m", "x2p", "x7m", "x7p", "y2m", "y2p",
             "y4m", "y4p", "y6m", "y6p", "y7m", "y7p")

U0 = vec([0, 15, -1, 16, 0, 15, -5, 15, 0, 4, 0, 15])
U1 = vec([0, 15, -5, 16, -4, 15, -5, 15, -4, 4, -4, 15])
H0 = vec([0, 0, -1, 0, -1, 0, 0, 0, -1, 0, -1, 0])

# the initial policy marked in the fixture (second action where a min
# has two branches, except coordinate y2m which starts on the first)
PI0 = Policy((0, 1, 1, 0, 0, 0, 1, 0, 0, 1, 0, 1))


def golden_system() -> PwaSystem:
    def c(v):
        return const_term(DIM, v)

    def u(i, off=0):
        return unit_term(DIM, i, off)

    return system([
        (group(c(0), u(X2M, -1)),),
        (group(c(2), u(X2P, 1)), group(c(15), u(Y6P))),
        (group(c(0), u(X2M, -1)), group(c(-11), u(Y6M, -1))),
        (group(c(0), u(X2P, 1)),),
        (group(c(0), u(X2M, -1)), group(c(-10), u(Y6M))),
        (group(c(15), u(Y6P)),),
        (group(u(Y2M), u(Y4M, 1)), group(c(-5))),
        (group(u(Y2P), u(Y4P, -1)),),
        (group(u(Y2M), u(Y4M, 1)),),
        (group(u(Y2P), u(Y4P, -1)), group(c(4))),
        (group(c(-10), u(Y6M)),),
        (group(c(15), u(Y6P)), group(c(1), u(X2P))),
    ])


def reference_map(x):
    """Independent straight-line transcription of the twelve formulas."""
    x2m, x2p, x7m, x7p, y2m, y2p, y4m, y4p, y6m, y6p, y7m, y7p = x
    return (
        max(F(0), x2m - 1),
        min(max(F(2), x2p + 1), max(F(15), y6p)),
        min(max(F(0), x2m - 1), max(F(-10), y6m) - 1),
        max(F(0), x2p + 1),
        min(max(F(0), x2m - 1), max(F(-10), y6m)),
        max(F(15), y6p),
        min(max(y2m, y4m + 1), F(-5)),
        max(y2p, y4p - 1),
        max(y2m, y4m + 1),
        min(max(y2p, y4p - 1), F(4)),
        max(F(-10), y6m),
        min(max(F(15), y6p), max(F(2), x2p + 1) - 1),
    )
