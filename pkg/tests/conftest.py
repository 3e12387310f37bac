"""Shared fixtures and random-system generators.

Unit-gradient generators build systems where every max group carries a
constant term (so all fixed points are bounded below and the standard
from-below start is valid) and every coordinate has at least one
constant-only action (so ascending iteration is capped and always
stabilizes).  `random_general_system` produces arbitrary rational
gradients for the linearization tests.
"""

from __future__ import annotations

import random
import sys
from fractions import Fraction as F
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from minfix.core import (
    AffineTerm,
    MaxGroup,
    Policy,
    PwaSystem,
    const_term,
    kleene_lfp,
    restrict,
    system,
    validate_system,
)

FIXTURES = Path(__file__).parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def kleene_start(sys_: PwaSystem) -> tuple:
    """(min constant - 1) * (1, ..., 1): below every fixed point of the
    generated systems, whose groups all contain constants."""
    m = min(t.constant for actions in sys_.coords for g in actions for t in g.terms)
    return ((m - 1),) * sys_.dim


def random_unit_term(rng: random.Random, dim: int, lo: int, hi: int) -> AffineTerm:
    c = F(rng.randint(lo, hi))
    if rng.random() < 0.4:
        return const_term(dim, c)
    grad = [F(0)] * dim
    grad[rng.randrange(dim)] = F(1)
    return AffineTerm(tuple(grad), c)


def random_unit_system(rng: random.Random, max_dim: int = 6, max_actions: int = 3,
                       max_terms: int = 3, lo: int = -10, hi: int = 10) -> PwaSystem:
    """Random valid unit-gradient system with a guaranteed finite
    smallest fixed point (constant in every group, constant cap per
    coordinate)."""
    dim = rng.randint(1, max_dim)
    coords = []
    for _ in range(dim):
        n_actions = rng.randint(1, max_actions)
        cap_position = rng.randrange(n_actions)
        actions = []
        for a in range(n_actions):
            if a == cap_position:
                actions.append(MaxGroup((const_term(dim, F(rng.randint(lo, hi))),)))
                continue
            n_terms = rng.randint(1, max_terms)
            terms = [random_unit_term(rng, dim, lo, hi) for _ in range(n_terms - 1)]
            terms.append(const_term(dim, F(rng.randint(lo, hi))))
            rng.shuffle(terms)
            actions.append(MaxGroup(tuple(terms)))
        coords.append(tuple(actions))
    out = system(coords)
    assert validate_system(out).ok
    return out


def random_rational(rng: random.Random, lo: int = -20, hi: int = 20,
                    max_den: int = 4) -> F:
    return F(rng.randint(lo, hi), rng.randint(1, max_den))


def random_general_system(rng: random.Random, max_dim: int = 4, max_actions: int = 3,
                          max_terms: int = 3) -> PwaSystem:
    """Random valid system with general nonnegative rational gradients
    of row sum at most one."""
    dim = rng.randint(1, max_dim)
    coords = []
    for _ in range(dim):
        actions = []
        for _ in range(rng.randint(1, max_actions)):
            terms = []
            for _ in range(rng.randint(1, max_terms)):
                grad = [F(rng.randint(0, 2), rng.randint(2, 5)) for _ in range(dim)]
                total = sum(grad)
                if total > 1:
                    grad = [g / total for g in grad]
                terms.append(AffineTerm(tuple(grad), random_rational(rng)))
            actions.append(MaxGroup(tuple(terms)))
        coords.append(tuple(actions))
    out = system(coords)
    assert validate_system(out).ok
    return out


def random_point(rng: random.Random, dim: int, lo: int = -20, hi: int = 20) -> tuple:
    return tuple(random_rational(rng, lo, hi) for _ in range(dim))


def all_policies(sys_: PwaSystem) -> list[Policy]:
    policies = [()]
    for actions in sys_.coords:
        policies = [p + (a,) for p in policies for a in range(len(actions))]
    return [Policy(p) for p in policies]


def every_policy_converges(sys_: PwaSystem, max_iter: int = 300) -> bool:
    start = kleene_start(sys_)
    return all(
        kleene_lfp(restrict(sys_, pi), start, max_iter).converged
        for pi in all_policies(sys_)
    )
