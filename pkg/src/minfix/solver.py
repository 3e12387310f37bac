"""Policy iteration for the smallest fixed point of a min-max-affine map.

Each round determines the smallest fixed point u of the current
one-player map by exact linear programming, then improves the policy:
first by switching to the argmin actions wherever f(u) < u, and once u
is a fixed point of the full map, by testing whether the directional
linearization at u admits a nonzero nonpositive fixed direction h.  If
it does, h selects the next policy (a descent direction: u cannot be
the smallest fixed point); if not, radius < 1 on the negative cone
certifies that u is the smallest fixed point and the run stops.  The
value sequence decreases strictly at every policy change, which bounds
the number of rounds by the number of policies; that argument is
enforced at runtime rather than trusted silently.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    Policy,
    PwaSystem,
    Vec,
    check_dim,
    evaluate,
    kleene_lfp,
    restrict,
    validate_system,
    vec_le,
    vec_lt,
    zero_vec,
)
from .errors import (
    InvalidSystem,
    InvariantBroken,
    MonotonicityViolation,
    NoFiniteFixedPoint,
    UnboundedBelow,
    Undecidable,
)
from .lp import smallest_fixed_point_policy
from .semidiff import active_sets, semidifferential
from .spectral import (
    Inconclusive,
    RadiusLtOne,
    UnitRadius,
    negative_cone_test,
)


@dataclass(frozen=True)
class Strict:
    """Improvement because f(u) < u (argmin switch)."""


@dataclass(frozen=True)
class Descent:
    """Improvement along a nonpositive fixed direction of the
    linearization at u."""

    h: Vec


@dataclass(frozen=True)
class Terminal:
    """No improvement possible: u is the smallest fixed point."""


Improvement = Strict | Descent | Terminal


@dataclass(frozen=True)
class IterationRecord:
    policy: Policy
    value: Vec
    improvement: Improvement


@dataclass(frozen=True)
class Solution:
    u: Vec
    trace: tuple[IterationRecord, ...]
    certificate: RadiusLtOne


@dataclass(frozen=True)
class Minimal:
    certificate: RadiusLtOne


@dataclass(frozen=True)
class NewPolicy:
    policy: Policy
    h: Vec


@dataclass(frozen=True)
class Undecided:
    outcome: Inconclusive


MinimalityStep = Minimal | NewPolicy | Undecided


@dataclass(frozen=True)
class SolveOptions:
    oracle2_cap: int | None = None
    initial_policy: Policy | None = None
    max_rounds: int | None = None  # default: number of policies + 1


def _argmin_policy(sys: PwaSystem, x: Vec) -> Policy:
    """Lowest-index action attaining each coordinate minimum at x."""
    choice = []
    for actions in sys.coords:
        values = [grp.value_at(x) for grp in actions]
        best = min(values)
        choice.append(values.index(best))
    return Policy(tuple(choice))


def initial_policy(sys: PwaSystem) -> Policy:
    """Warm-start heuristic: argmin at the third ascending iterate from
    the origin.  Any valid policy preserves correctness."""
    w = kleene_lfp(sys, zero_vec(sys.dim), 3).point
    return _argmin_policy(sys, w)


def asymptotic_policy(sys: PwaSystem) -> Policy:
    """Argmin at M*(1, ..., 1) for symbolically large M.

    Each action compares as (max gradient sum, max constant among the
    steepest terms): the action of minimal asymptotic growth.  This
    avoids selecting a divergent action (for example max(c, x_j + 1) at
    coordinate j) whenever a bounded alternative exists, so it makes a
    robust fallback when the warm start lands on a policy without a
    finite smallest fixed point.
    """
    choice = []
    for actions in sys.coords:
        keys = []
        for grp in actions:
            slope = max(sum(t.grad) for t in grp.terms)
            offset = max(t.constant for t in grp.terms if sum(t.grad) == slope)
            keys.append((slope, offset))
        choice.append(keys.index(min(keys)))
    return Policy(tuple(choice))


def first_policy(sys: PwaSystem) -> Policy:
    return Policy((0,) * sys.dim)


def improve_strict(sys: PwaSystem, u: Vec) -> Policy | None:
    """Argmin policy at u when f(u) < u, None when f(u) = u.

    u must be the smallest fixed point of the current policy map, so
    f(u) <= u always holds here; anything else is an upstream bug.
    """
    check_dim(sys, u)
    fu = evaluate(sys, u)
    if fu == u:
        return None
    if not vec_le(fu, u):
        raise InvariantBroken(
            "f(u) is not componentwise <= u at a policy value; "
            "value determination returned a non-dominating point")
    return _argmin_policy(sys, u)


def improve_minimality(sys: PwaSystem, u: Vec, cap: int | None = None) -> MinimalityStep:
    """Decide minimality of a fixed point u of the full map.

    Runs the negative-cone radius test on the linearization at u.
    Radius < 1 means u is the smallest fixed point.  A fixed direction
    h < 0 selects, per coordinate, the active action attaining the
    minimal directional value at h (ties to the lowest index).
    """
    outcome = negative_cone_test(semidifferential(sys, u), cap)
    if isinstance(outcome, RadiusLtOne):
        return Minimal(outcome)
    if isinstance(outcome, Inconclusive):
        return Undecided(outcome)
    assert isinstance(outcome, UnitRadius)
    h = outcome.h
    act = active_sets(sys, u)
    choice = []
    for j, choices in enumerate(act.per_coord):
        best_action = None
        best_value = None
        for c in choices:
            grp = sys.coords[j][c.action]
            value = max(
                sum(g * hi for g, hi in zip(grp.terms[b].grad, h))
                for b in c.terms
            )
            if best_value is None or value < best_value:
                best_value = value
                best_action = c.action
        choice.append(best_action)
    return NewPolicy(Policy(tuple(choice)), h)


def solve_smallest(sys: PwaSystem, opts: SolveOptions = SolveOptions()) -> Solution:
    """Full policy-iteration loop; returns the smallest fixed point with
    its audit trace and the radius < 1 certificate."""
    report = validate_system(sys)
    if not report.ok:
        raise InvalidSystem(f"invalid system: {report.summary()}")

    policy = opts.initial_policy or initial_policy(sys)
    max_rounds = opts.max_rounds if opts.max_rounds is not None else sys.policy_count() + 1

    trace: list[IterationRecord] = []
    visited: set[tuple[int, ...]] = set()
    prev_u: Vec | None = None

    for round_index in range(max_rounds):
        if policy.choice in visited:
            raise MonotonicityViolation(
                f"policy {policy.choice} revisited; strict descent broken")
        visited.add(policy.choice)

        try:
            u = smallest_fixed_point_policy(restrict(sys, policy))
        except (NoFiniteFixedPoint, UnboundedBelow):
            # only the free initial selection can fail: improvement
            # policies always admit the current value as a post-fixed
            # point, so their programs are feasible and bounded
            fallback = asymptotic_policy(sys)
            if (round_index != 0 or opts.initial_policy is not None
                    or fallback.choice == policy.choice):
                raise
            policy = fallback
            visited.clear()
            visited.add(policy.choice)
            u = smallest_fixed_point_policy(restrict(sys, policy))
        if prev_u is not None and not vec_lt(u, prev_u):
            raise MonotonicityViolation(
                "value did not decrease strictly across a policy change")
        prev_u = u

        switched = improve_strict(sys, u)
        if switched is not None:
            trace.append(IterationRecord(policy, u, Strict()))
            policy = switched
            continue

        step = improve_minimality(sys, u, opts.oracle2_cap)
        if isinstance(step, Minimal):
            trace.append(IterationRecord(policy, u, Terminal()))
            return Solution(u, tuple(trace), step.certificate)
        if isinstance(step, Undecided):
            raise Undecidable(
                "negative-cone radius test inconclusive after "
                f"{step.outcome.iterations} iterations; cannot certify minimality")
        trace.append(IterationRecord(policy, u, Descent(step.h)))
        policy = step.policy

    raise MonotonicityViolation("round limit exceeded without a certificate")
