"""Infinity elimination and condensation of generated bound equations.

The solver works over R^d, but bound equations can have coordinates
whose least solution is infinite: a bound that no guard caps diverges to
+inf, and a bound never lifted above its unreachable start stays -inf.
This pass classifies those coordinates by ascending iteration over
extended rationals and substitutes them away:

  * iterate from all-(-inf); coordinates still strictly increasing after
    `widen_factor * d` in-place sweeps are pinned to +inf (a sound
    over-approximation, flagged in the report),
  * coordinates that never leave -inf are exactly -inf (lifting above
    -inf depends only on which inputs have lifted, and that set is
    stable once one full sweep adds nothing),
  * substitution uses min(+inf, t) = t, max(+inf, t) = +inf,
    max(-inf, t) = t, min(-inf, t) = -inf and repeats to closure.

The remaining finite system is then condensed: coordinates defined by a pure
constant or by a unit-coefficient copy/shift of a single other
coordinate are inlined into their consumers, leaving only coordinates
with genuine join/guard structure.  Inlined and eliminated coordinates
are reconstructed from the residual solution afterwards, so reports
still cover every control point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .expr import (
    Atom,
    Expr,
    Inf,
    eval_expr,
    free_vars,
    reindex,
    simplify,
    substitute_affine,
    substitute_inf,
)
from .ext import NEG_INF, POS_INF, ExtRat

DEFAULT_WIDEN_FACTOR = 3


@dataclass(frozen=True)
class PrepassReport:
    """Names eliminated as infinite (with sign), the subset forced by
    the widening threshold, and the names inlined as trivial."""

    eliminated: tuple[tuple[str, str], ...]
    widened: tuple[str, ...]
    inlined: tuple[str, ...]


@dataclass
class PrepassResult:
    names: tuple[str, ...]            # all original names
    kept: tuple[int, ...]             # original indices of residual coordinates
    residual: tuple[Expr, ...]        # over the kept subspace, finite
    report: PrepassReport
    _inf_signs: dict[int, int]
    _inline_defs: tuple[tuple[int, Expr], ...]  # record order, original space

    @property
    def kept_names(self) -> tuple[str, ...]:
        return tuple(self.names[i] for i in self.kept)

    def reconstruct(self, kept_values: Sequence[Fraction]) -> list[ExtRat]:
        """Extend residual solution values to every original coordinate."""
        env: list[ExtRat] = [None] * len(self.names)  # type: ignore[list-item]
        for i, v in zip(self.kept, kept_values):
            env[i] = Fraction(v)
        for i, sign in self._inf_signs.items():
            env[i] = POS_INF if sign > 0 else NEG_INF
        # a definition recorded at inline time references only coordinates
        # that were still present then, so reverse order is topological
        for i, definition in reversed(self._inline_defs):
            env[i] = eval_expr(definition, env)
        return env


def _is_trivial(e: Expr, self_index: int) -> Atom | None:
    """A pure constant or a unit-coefficient reference to one other
    coordinate (with any offset); those inline without loss."""
    if not isinstance(e, Atom):
        return None
    nonzero = [(i, c) for i, c in enumerate(e.coeffs) if c]
    if not nonzero:
        return e
    if len(nonzero) == 1 and nonzero[0][1] == 1 and nonzero[0][0] != self_index:
        return e
    return None


def eliminate_infinities(
    names: Sequence[str],
    exprs: Sequence[Expr],
    widen_factor: int = DEFAULT_WIDEN_FACTOR,
) -> PrepassResult:
    names = tuple(names)
    defs: dict[int, Expr] = {i: simplify(e) for i, e in enumerate(exprs)}
    inf_signs: dict[int, int] = {}
    widened: list[int] = []

    def eliminate(idx: int, sign: int) -> None:
        inf_signs[idx] = sign
        del defs[idx]
        for j in list(defs):
            defs[j] = substitute_inf(defs[j], idx, sign)

    def propagate_constants() -> None:
        changed = True
        while changed:
            changed = False
            for j, e in list(defs.items()):
                if isinstance(e, Inf):
                    eliminate(j, e.sign)
                    changed = True

    propagate_constants()

    # ascending chaotic iteration (in-place sweeps in coordinate order,
    # so constants propagate through a chain within one sweep); each
    # non-stabilizing pass widens the coordinates its last sweep moved,
    # so at most d passes run
    while defs:
        active = sorted(defs)
        sweeps = max(1, widen_factor * len(active))
        env: list[ExtRat] = [NEG_INF] * len(names)
        climbing: list[int] = []
        stabilized = False
        for _ in range(sweeps):
            climbing = []
            for i in active:
                value = eval_expr(defs[i], env)
                if value != env[i]:
                    env[i] = value
                    climbing.append(i)
            if not climbing:
                stabilized = True
                break
        if stabilized:
            for i in active:
                if env[i] == NEG_INF:
                    eliminate(i, -1)
            propagate_constants()
            break
        # some coordinates only climb because a divergent driver pushes
        # them (y = min(x, 100) with x unbounded): pin the climbers
        # tentatively and re-admit those whose equation collapses to a
        # finite expression under the others' +inf
        pinned = {i for i in climbing if i in defs}
        changed = True
        while changed:
            changed = False
            for i in sorted(pinned):
                e = defs[i]
                for j in pinned:
                    if j != i:
                        e = substitute_inf(e, j, 1)
                resolved = (not (isinstance(e, Inf) and e.sign > 0)
                            and not (free_vars(e) & pinned))
                if resolved:
                    # no remaining tie to the divergence: keep the
                    # original definition and let the next pass settle
                    # it; the final elimination substitutes +inf for
                    # exactly the coordinates that stay pinned
                    pinned.discard(i)
                    changed = True
                    break
        if not pinned:  # defensive: guarantee progress
            pinned = {i for i in climbing if i in defs}
        for i in sorted(pinned):
            widened.append(i)
            eliminate(i, 1)
        propagate_constants()

    # condense trivial definitions into their consumers
    inline_defs: list[tuple[int, Expr]] = []
    progress = True
    while progress:
        progress = False
        for i in sorted(defs):
            replacement = _is_trivial(defs[i], i)
            if replacement is None:
                continue
            inline_defs.append((i, replacement))
            del defs[i]
            for j in list(defs):
                defs[j] = substitute_affine(defs[j], i, replacement)
            progress = True

    kept = tuple(sorted(defs))
    mapping = {orig: new for new, orig in enumerate(kept)}
    residual = tuple(reindex(defs[i], mapping, len(kept)) for i in kept)

    report = PrepassReport(
        eliminated=tuple(
            (names[i], "+inf" if s > 0 else "-inf")
            for i, s in sorted(inf_signs.items())
        ),
        widened=tuple(names[i] for i in sorted(widened)),
        inlined=tuple(names[i] for i, _ in inline_defs),
    )
    return PrepassResult(names, kept, residual, report, inf_signs, tuple(inline_defs))
