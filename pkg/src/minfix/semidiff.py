"""Directional linearization of a min-max-affine map at a point.

At any point u the map behaves, for small enough displacements, like the
homogeneous min-max map built from the actions and terms that attain the
coordinate values at u (the active sets).  `semidifferential` constructs
that map by active-set selection; `directional_derivative` computes the
same quantity as a difference-quotient limit and exists purely as an
independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (
    AffineTerm,
    HomogeneousSystem,
    MaxGroup,
    PwaSystem,
    Vec,
    check_dim,
    evaluate,
)


@dataclass(frozen=True)
class ActiveChoice:
    """One active action and the indices of its value-attaining terms."""

    action: int
    terms: tuple[int, ...]


@dataclass(frozen=True)
class ActiveSets:
    """Per coordinate, the actions attaining the min and, within each,
    the terms attaining the group max, all under exact comparison."""

    per_coord: tuple[tuple[ActiveChoice, ...], ...]

    def actions(self, j: int) -> tuple[int, ...]:
        return tuple(c.action for c in self.per_coord[j])


def active_sets(sys: PwaSystem, u: Vec) -> ActiveSets:
    """Exact argmin/argmax sets at u; ties keep every attaining index."""
    check_dim(sys, u)
    per_coord = []
    for actions in sys.coords:
        group_values = []
        for grp in actions:
            values = [t.value_at(u) for t in grp.terms]
            best = max(values)
            attaining = tuple(b for b, v in enumerate(values) if v == best)
            group_values.append((best, attaining))
        coord_value = min(v for v, _ in group_values)
        per_coord.append(tuple(
            ActiveChoice(a, attaining)
            for a, (v, attaining) in enumerate(group_values)
            if v == coord_value
        ))
    return ActiveSets(tuple(per_coord))


def semidifferential(sys: PwaSystem, u: Vec) -> HomogeneousSystem:
    """Keep only active actions and terms and drop their constants.

    The result is a valid homogeneous system (monotone, nonexpansive)
    satisfying f(u + h) = f(u) + g(h) exactly for all small enough h.
    """
    act = active_sets(sys, u)
    coords = []
    for j, choices in enumerate(act.per_coord):
        groups = []
        for choice in choices:
            grp = sys.coords[j][choice.action]
            groups.append(MaxGroup(tuple(
                AffineTerm(grp.terms[b].grad, Fraction(0)) for b in choice.terms
            )))
        coords.append(tuple(groups))
    return PwaSystem(sys.dim, tuple(coords))


def directional_derivative(sys: PwaSystem, u: Vec, h: Vec) -> Vec:
    """Difference quotient (f(u + t*h) - f(u)) / t for t small enough
    to be t-independent.

    t is found by halving from 1 until two consecutive values agree;
    piecewise affinity guarantees an exact threshold, so this
    terminates.  Cross-check path only, independent of active sets.
    """
    check_dim(sys, u)
    check_dim(sys, h)
    fu = evaluate(sys, u)

    def quotient(t: Fraction) -> Vec:
        shifted = tuple(ui + t * hi for ui, hi in zip(u, h))
        fv = evaluate(sys, shifted)
        return tuple((a - b) / t for a, b in zip(fv, fu))

    t = Fraction(1)
    prev = quotient(t)
    while True:
        t /= 2
        cur = quotient(t)
        if cur == prev:
            return cur
        prev = cur
