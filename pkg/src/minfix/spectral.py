"""Spectral radius test on the negative cone for homogeneous systems.

Decides whether a monotone nonexpansive homogeneous map g has spectral
radius < 1 on the cone of componentwise-nonpositive vectors, or exhibits
a nonzero nonpositive fixed direction h with g(h) = h.  The test
iterates g from e = (-1, ..., -1): the orbit is nondecreasing and
bounded by 0, so it either climbs to 0 (radius < 1), stalls at some
b < 0 (unit radius, witness b), or keeps moving.  For maps whose
gradients are all zero or unit coordinate vectors the orbit is integer
and stabilizes within d steps, so the outcome is always decided.  For
general rational gradients a strict bound b_k > e certifies radius < 1
via the power bound rho <= (max_i b_k,i / e_i)^(1/k); if nothing fires
within the cap the result is Inconclusive, which callers must surface.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (
    HomogeneousSystem,
    Vec,
    const_vec,
    evaluate,
    validate_system,
)
from .errors import InvalidSystem


@dataclass(frozen=True)
class RadiusLtOne:
    """certificate_k is a k with g^k(e) strictly above e componentwise."""

    certificate_k: int
    iterations: int


@dataclass(frozen=True)
class UnitRadius:
    """h <= 0, h != 0 and g(h) = h exactly."""

    h: Vec
    iterations: int


@dataclass(frozen=True)
class Inconclusive:
    b_approx: Vec
    iterations: int


SpectralOutcome = RadiusLtOne | UnitRadius | Inconclusive


def is_unit_gradient(g: HomogeneousSystem) -> bool:
    """True iff every term gradient is the zero vector or a unit
    coordinate vector with coefficient exactly 1."""
    one = Fraction(1)
    for actions in g.coords:
        for grp in actions:
            for t in grp.terms:
                nonzero = [x for x in t.grad if x]
                if nonzero and nonzero != [one]:
                    return False
    return True


def default_cap(dim: int) -> int:
    return max(64, 8 * dim)


def _check_valid_homogeneous(g: HomogeneousSystem) -> None:
    report = validate_system(g)
    if not report.ok:
        raise InvalidSystem(f"invalid homogeneous system: {report.summary()}")
    if not g.is_homogeneous:
        raise InvalidSystem("system has nonzero constants; not homogeneous")


def negative_cone_test(g: HomogeneousSystem, cap: int | None = None) -> SpectralOutcome:
    """Iterate b <- g(b) from e = (-1, ..., -1) and classify the orbit.

    Returns RadiusLtOne as soon as the orbit stabilizes at 0 or climbs
    strictly above e, UnitRadius with the stabilized vector if it stalls
    below 0, and Inconclusive after `cap` steps otherwise.  `iterations`
    counts applications of g.
    """
    _check_valid_homogeneous(g)
    if cap is None:
        cap = default_cap(g.dim)
    if is_unit_gradient(g):
        # stabilization within dim steps is guaranteed (integer orbit,
        # at most one unit rise per coordinate), so no cap may force an
        # Inconclusive outcome here
        cap = max(cap, g.dim + 1)
    e = const_vec(g.dim, -1)
    prev = e
    for k in range(1, cap + 1):
        b = evaluate(g, prev)
        if b == prev:
            if all(x == 0 for x in b):
                return RadiusLtOne(certificate_k=k, iterations=k)
            return UnitRadius(h=b, iterations=k)
        if all(x > -1 for x in b):
            # rho <= (max_i b_i / -1)^(1/k) < 1; no root extraction needed
            return RadiusLtOne(certificate_k=k, iterations=k)
        prev = b
    return Inconclusive(b_approx=prev, iterations=cap)


def collatz_wielandt_bound(g: HomogeneousSystem, x: Vec, k: int) -> Fraction:
    """sup_i g_i^k(x) / x_i for strictly negative x.

    The 1/k-th root is left symbolic: callers compare against 1, which
    is equivalent since r < 1 iff r^(1/k) < 1.
    """
    _check_valid_homogeneous(g)
    if any(xi >= 0 for xi in x):
        raise ValueError("x must be strictly negative in every coordinate")
    if k < 1:
        raise ValueError("k must be >= 1")
    y = x
    for _ in range(k):
        y = evaluate(g, y)
    return max(yi / xi for yi, xi in zip(y, x))
