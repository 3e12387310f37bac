"""Negative-cone radius test and the power upper bound."""

from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from minfix.core import (
    AffineTerm,
    const_term,
    const_vec,
    evaluate,
    group,
    system,
    unit_term,
    vec,
    vec_le,
)
from minfix.errors import InvalidSystem
from minfix.semidiff import semidifferential
from minfix.spectral import (
    Inconclusive,
    RadiusLtOne,
    UnitRadius,
    collatz_wielandt_bound,
    is_unit_gradient,
    negative_cone_test,
)

from conftest import random_unit_system
from golden import H0, U0, U1, golden_system


def unit_linearizations():
    f = golden_system()
    return semidifferential(f, U0), semidifferential(f, U1)


class TestIsUnitGradient:
    def test_golden_linearizations(self):
        g0, g1 = unit_linearizations()
        assert is_unit_gradient(g0)
        assert is_unit_gradient(g1)

    def test_half_coefficient(self):
        g = system([(group(AffineTerm((F(1, 2),), F(0))),)])
        assert not is_unit_gradient(g)

    def test_substochastic_row_not_unit(self):
        g = system([(group(AffineTerm((F(1, 3), F(1, 3)), F(0))),),
                    (group(unit_term(2, 0)),)])
        assert not is_unit_gradient(g)


class TestNegativeConeTest:
    def test_golden_u0_fixed_direction_in_three_steps(self):
        g0, _ = unit_linearizations()
        outcome = negative_cone_test(g0)
        assert isinstance(outcome, UnitRadius)
        assert outcome.h == H0
        assert outcome.iterations == 3

    def test_golden_u1_radius_lt_one(self):
        _, g1 = unit_linearizations()
        outcome = negative_cone_test(g1)
        assert isinstance(outcome, RadiusLtOne)
        assert outcome.iterations <= 12

    def test_projection_to_zero(self):
        g = system([(group(unit_term(1, 0), const_term(1, 0)),)])
        outcome = negative_cone_test(g)
        assert isinstance(outcome, RadiusLtOne)

    def test_identity_keeps_unit_radius(self):
        g = system([(group(unit_term(1, 0)),)])
        outcome = negative_cone_test(g)
        assert isinstance(outcome, UnitRadius)
        assert outcome.h == vec([-1])
        assert outcome.iterations == 1

    def test_constants_rejected(self):
        g = system([(group(const_term(1, 3)),)])
        with pytest.raises(InvalidSystem):
            negative_cone_test(g)

    def test_contraction_certified_by_power_bound(self):
        # g(h) = h/2 never stabilizes exactly but climbs strictly above e
        g = system([(group(AffineTerm((F(1, 2),), F(0))),)])
        outcome = negative_cone_test(g)
        assert isinstance(outcome, RadiusLtOne)
        assert outcome.certificate_k == 1

    def test_rotation_with_halving(self):
        # g(h) = (h2, h1/2): strict bound after two steps
        g = system([
            (group(unit_term(2, 1)),),
            (group(AffineTerm((F(1, 2), F(0)), F(0))),),
        ])
        outcome = negative_cone_test(g)
        assert isinstance(outcome, RadiusLtOne)
        assert outcome.certificate_k == 2

    def test_inconclusive_surfaced(self):
        # g = (h1, max(h2/2, h1)) has the eigenvector (-1, 0) on the
        # negative cone, but the orbit from e only approaches it: the
        # first coordinate stays -1 while the second climbs forever, so
        # neither stopping rule can fire and the cap must surface it
        g = system([
            (group(unit_term(2, 0)),),
            (group(AffineTerm((F(0), F(1, 2)), F(0)), unit_term(2, 0)),),
        ])
        outcome = negative_cone_test(g, cap=40)
        assert isinstance(outcome, Inconclusive)
        assert outcome.iterations == 40
        assert outcome.b_approx[0] == -1
        assert -1 < outcome.b_approx[1] < 0

    def test_unit_gradient_ignores_starving_cap(self):
        # the dichotomy may not depend on the caller's budget
        g0, _ = unit_linearizations()
        outcome = negative_cone_test(g0, cap=1)
        assert isinstance(outcome, UnitRadius)
        assert outcome.h == H0

    def test_monotone_staircase(self):
        rng = random.Random(21)
        for _ in range(40):
            sys_ = random_unit_system(rng, max_dim=4)
            u = tuple(F(rng.randint(-8, 8)) for _ in range(sys_.dim))
            g = semidifferential(sys_, u)
            e = const_vec(g.dim, -1)
            b, prev = evaluate(g, e), e
            for _ in range(g.dim + 2):
                assert vec_le(e, b) and vec_le(prev, b) and vec_le(b, const_vec(g.dim, 0))
                prev, b = b, evaluate(g, b)

    def test_unit_gradient_dichotomy_and_integrality(self):
        rng = random.Random(22)
        for _ in range(80):
            sys_ = random_unit_system(rng, max_dim=5)
            u = tuple(F(rng.randint(-8, 8)) for _ in range(sys_.dim))
            g = semidifferential(sys_, u)
            assert is_unit_gradient(g)
            outcome = negative_cone_test(g)
            assert not isinstance(outcome, Inconclusive)
            assert outcome.iterations <= g.dim + 1
            if isinstance(outcome, UnitRadius):
                assert all(x.denominator == 1 for x in outcome.h)

    def test_unit_radius_witness_is_sound(self):
        rng = random.Random(23)
        witnesses = 0
        for _ in range(120):
            sys_ = random_unit_system(rng, max_dim=5)
            u = tuple(F(rng.randint(-8, 8)) for _ in range(sys_.dim))
            g = semidifferential(sys_, u)
            outcome = negative_cone_test(g)
            if isinstance(outcome, UnitRadius):
                witnesses += 1
                h = outcome.h
                assert evaluate(g, h) == h
                assert vec_le(h, const_vec(g.dim, 0))
                assert any(x < 0 for x in h)
        assert witnesses > 0


class TestCollatzWielandtBound:
    def test_golden_u1_power_reaches_zero(self):
        _, g1 = unit_linearizations()
        assert collatz_wielandt_bound(g1, const_vec(12, -1), 3) == 0

    def test_identity_bound_is_one(self):
        g = system([(group(unit_term(1, 0)),)])
        for k in (1, 2, 5):
            assert collatz_wielandt_bound(g, vec([-1]), k) == 1

    def test_rotation_with_halving(self):
        g = system([
            (group(unit_term(2, 1)),),
            (group(AffineTerm((F(1, 2), F(0)), F(0))),),
        ])
        # two hand iterations: (-1,-1) -> (-1,-1/2) -> (-1/2,-1/2)
        assert collatz_wielandt_bound(g, vec([-1, -1]), 2) == F(1, 2)

    def test_requires_strictly_negative(self):
        g = system([(group(unit_term(1, 0)),)])
        with pytest.raises(ValueError):
            collatz_wielandt_bound(g, vec([0]), 1)

    def test_bound_below_one_matches_dichotomy(self):
        rng = random.Random(24)
        for _ in range(60):
            sys_ = random_unit_system(rng, max_dim=4)
            u = tuple(F(rng.randint(-8, 8)) for _ in range(sys_.dim))
            g = semidifferential(sys_, u)
            outcome = negative_cone_test(g)
            bound = collatz_wielandt_bound(g, const_vec(g.dim, -1), g.dim + 1)
            if bound < 1:
                assert isinstance(outcome, RadiusLtOne)
            else:
                assert isinstance(outcome, UnitRadius)
