"""Min-of-max-of-affine self-maps of R^d over exact rationals.

A system assigns to every coordinate j a nonempty family of actions;
each action is a nonempty group of affine terms combined by max, and the
coordinate value is the min over the actions of the group maxima.  All
gradients are required to be nonnegative with row sum at most one, which
makes every system monotone and nonexpansive for the sup-norm.

Arithmetic is exact (`fractions.Fraction`) throughout: the solver's
branching on equalities and the termination arguments rely on exact
comparisons, so floating point is never used.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, InvalidPolicy

Rat = Fraction
Vec = tuple[Fraction, ...]


def rat(value) -> Fraction:
    """Exact conversion from int, string ('3/4', '0.25') or Fraction."""
    return Fraction(value)


def vec(values: Iterable) -> Vec:
    return tuple(Fraction(v) for v in values)


def zero_vec(dim: int) -> Vec:
    return (Fraction(0),) * dim


def const_vec(dim: int, value) -> Vec:
    return (Fraction(value),) * dim


def vec_le(x: Vec, y: Vec) -> bool:
    return all(a <= b for a, b in zip(x, y))


def vec_lt(x: Vec, y: Vec) -> bool:
    """Componentwise <= with at least one strict coordinate."""
    return vec_le(x, y) and x != y


def sup_norm(x: Vec) -> Fraction:
    return max(abs(a) for a in x)


@dataclass(frozen=True)
class AffineTerm:
    """An affine map x -> grad . x + constant."""

    grad: tuple[Fraction, ...]
    constant: Fraction

    def value_at(self, x: Sequence[Fraction]) -> Fraction:
        acc = self.constant
        for g, xi in zip(self.grad, x):
            if g:
                acc += g * xi
        return acc

    @property
    def is_constant(self) -> bool:
        return not any(self.grad)


def term(grad: Iterable, constant=0) -> AffineTerm:
    return AffineTerm(tuple(Fraction(g) for g in grad), Fraction(constant))


def const_term(dim: int, constant) -> AffineTerm:
    return AffineTerm((Fraction(0),) * dim, Fraction(constant))


def unit_term(dim: int, index: int, constant=0) -> AffineTerm:
    """x -> x[index] + constant."""
    grad = [Fraction(0)] * dim
    grad[index] = Fraction(1)
    return AffineTerm(tuple(grad), Fraction(constant))


@dataclass(frozen=True)
class MaxGroup:
    """A finite max of affine terms (one action of one coordinate)."""

    terms: tuple[AffineTerm, ...]

    def value_at(self, x: Sequence[Fraction]) -> Fraction:
        return max(t.value_at(x) for t in self.terms)


def group(*terms: AffineTerm) -> MaxGroup:
    return MaxGroup(tuple(terms))


@dataclass(frozen=True)
class PwaSystem:
    """A dimension-d map whose coordinate j is min over coords[j] of
    group maxima.  Valid systems are monotone and sup-norm nonexpansive."""

    dim: int
    coords: tuple[tuple[MaxGroup, ...], ...]

    @property
    def single_action(self) -> bool:
        return all(len(actions) == 1 for actions in self.coords)

    @property
    def is_homogeneous(self) -> bool:
        return all(
            t.constant == 0
            for actions in self.coords
            for g in actions
            for t in g.terms
        )

    def policy_count(self) -> int:
        n = 1
        for actions in self.coords:
            n *= len(actions)
        return n


# A PolicySystem is a PwaSystem whose every coordinate has exactly one
# action; a HomogeneousSystem is one whose constants are all zero.  Both
# are structural conventions rather than separate classes.
PolicySystem = PwaSystem
HomogeneousSystem = PwaSystem


def system(coords: Sequence[Sequence[MaxGroup]], dim: int | None = None) -> PwaSystem:
    if dim is None:
        dim = len(coords)
    return PwaSystem(dim, tuple(tuple(actions) for actions in coords))


@dataclass(frozen=True)
class Policy:
    """A per-coordinate choice of one action index."""

    choice: tuple[int, ...]


@dataclass(frozen=True)
class ValidationIssue:
    coord: int  # 0-based; rendered 1-based in the message
    action: int | None
    term: int | None
    message: str


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[ValidationIssue, ...]

    @property
    def ok(self) -> bool:
        return not self.issues

    def summary(self) -> str:
        return "; ".join(i.message for i in self.issues)


def validate_system(sys: PwaSystem) -> ValidationReport:
    """Collect every violated invariant; never raises.

    An empty report means the system is a well-formed monotone
    nonexpansive piecewise-affine map: dim >= 1, every coordinate has at
    least one action, every action at least one term, and every term has
    a length-d gradient with nonnegative entries summing to at most 1.
    """
    issues: list[ValidationIssue] = []
    if sys.dim < 1:
        issues.append(ValidationIssue(0, None, None, f"dimension {sys.dim} < 1"))
    if len(sys.coords) != sys.dim:
        issues.append(ValidationIssue(
            0, None, None,
            f"coordinate count {len(sys.coords)} != dimension {sys.dim}"))
    for j, actions in enumerate(sys.coords):
        if not actions:
            issues.append(ValidationIssue(j, None, None, f"empty action set at coord {j + 1}"))
        for a, grp in enumerate(actions):
            if not grp.terms:
                issues.append(ValidationIssue(
                    j, a, None, f"empty max group at coord {j + 1}, action {a + 1}"))
            for b, t in enumerate(grp.terms):
                if len(t.grad) != sys.dim:
                    issues.append(ValidationIssue(
                        j, a, b,
                        f"gradient length {len(t.grad)} != {sys.dim} at coord {j + 1}"))
                    continue
                for i, g in enumerate(t.grad):
                    if g < 0:
                        issues.append(ValidationIssue(
                            j, a, b,
                            f"negative gradient entry {g} (variable {i + 1}) at coord {j + 1}"))
                s = sum(t.grad)
                if s > 1:
                    issues.append(ValidationIssue(
                        j, a, b, f"gradient sum {s} > 1 at coord {j + 1}"))
    return ValidationReport(tuple(issues))


def check_dim(sys: PwaSystem, x: Sequence) -> None:
    if len(x) != sys.dim:
        raise DimensionMismatch(f"vector length {len(x)} != system dimension {sys.dim}")


def evaluate(sys: PwaSystem, x: Vec) -> Vec:
    """Apply the map: per coordinate, min over actions of the group max."""
    check_dim(sys, x)
    return tuple(
        min(grp.value_at(x) for grp in actions)
        for actions in sys.coords
    )


def check_policy(sys: PwaSystem, policy: Policy) -> None:
    if len(policy.choice) != sys.dim:
        raise InvalidPolicy(
            f"policy length {len(policy.choice)} != system dimension {sys.dim}")
    for j, a in enumerate(policy.choice):
        if not 0 <= a < len(sys.coords[j]):
            raise InvalidPolicy(
                f"action index {a} out of range at coord {j + 1} "
                f"(has {len(sys.coords[j])} actions)")


def restrict(sys: PwaSystem, policy: Policy) -> PolicySystem:
    """Select one action per coordinate, yielding the one-player map.

    The result dominates the original map pointwise: dropping min
    alternatives can only raise each coordinate.
    """
    check_policy(sys, policy)
    return PwaSystem(
        sys.dim,
        tuple((sys.coords[j][policy.choice[j]],) for j in range(sys.dim)),
    )


@dataclass(frozen=True)
class KleeneResult:
    point: Vec
    converged: bool
    iterations: int


def kleene_lfp(sys: PwaSystem, start: Vec, max_iter: int) -> KleeneResult:
    """Iterate x <- f(x) until exact stabilization or max_iter.

    From a start below every fixed point the stabilized point, when
    reached, is the smallest fixed point; this is the independent
    baseline the policy-iteration solver is checked against.
    """
    check_dim(sys, start)
    x = start
    for k in range(1, max_iter + 1):
        nxt = evaluate(sys, x)
        if nxt == x:
            return KleeneResult(x, True, k)
        x = nxt
    return KleeneResult(x, False, max_iter)
