"""Expression trees over min, max, affine atoms and rational shifts.

Trees are what the parsers and the equation generator produce; the
solver consumes the canonical min-of-max-of-affine form obtained by
`normalize_system`.  Normalization distributes max over min (worst-case
exponential, acceptable at desk scale and guarded by a term budget) and
pushes shifts into atom constants; it is semantics-preserving, which
tests check by comparing against direct tree evaluation at random
points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from ..core import AffineTerm, MaxGroup, PwaSystem
from ..errors import NormalizationTooLarge
from .ext import NEG_INF, POS_INF, ExtRat, Infinity

DEFAULT_TERM_BUDGET = 10_000


@dataclass(frozen=True)
class Atom:
    """Finite affine form coeffs . x + constant."""

    coeffs: tuple[Fraction, ...]
    constant: Fraction


@dataclass(frozen=True)
class Inf:
    """An infinite constant; eliminated by the pre-pass."""

    sign: int


@dataclass(frozen=True)
class Shift:
    child: "Expr"
    offset: Fraction


@dataclass(frozen=True)
class MinOf:
    children: tuple["Expr", ...]


@dataclass(frozen=True)
class MaxOf:
    children: tuple["Expr", ...]


Expr = Atom | Inf | Shift | MinOf | MaxOf


def const_atom(dim: int, value) -> Atom:
    return Atom((Fraction(0),) * dim, Fraction(value))


def var_atom(dim: int, index: int, offset=0) -> Atom:
    coeffs = [Fraction(0)] * dim
    coeffs[index] = Fraction(1)
    return Atom(tuple(coeffs), Fraction(offset))


def eval_expr(e: Expr, env: Sequence[ExtRat]) -> ExtRat:
    """Direct tree evaluation over extended rationals.

    Zero coefficients never touch the environment, so infinite entries
    only propagate through variables the atom actually reads.
    """
    if isinstance(e, Atom):
        acc: ExtRat = e.constant
        for c, v in zip(e.coeffs, env):
            if c:
                if isinstance(v, Infinity):
                    acc = acc + (v if c > 0 else -v)
                else:
                    acc = acc + c * v
        return acc
    if isinstance(e, Inf):
        return POS_INF if e.sign > 0 else NEG_INF
    if isinstance(e, Shift):
        return eval_expr(e.child, env) + e.offset
    if isinstance(e, MinOf):
        return min(eval_expr(c, env) for c in e.children)
    if isinstance(e, MaxOf):
        return max(eval_expr(c, env) for c in e.children)
    raise TypeError(f"not an expression: {e!r}")


def free_vars(e: Expr) -> set[int]:
    if isinstance(e, Atom):
        return {i for i, c in enumerate(e.coeffs) if c}
    if isinstance(e, Inf):
        return set()
    if isinstance(e, Shift):
        return free_vars(e.child)
    return set().union(*(free_vars(c) for c in e.children))


def simplify(e: Expr) -> Expr:
    """Fold infinite constants: min(+inf, t) = t, max(+inf, t) = +inf,
    max(-inf, t) = t, min(-inf, t) = -inf; shifts of infinities stay
    infinite.  Result is either an Inf or an Inf-free tree."""
    if isinstance(e, (Atom, Inf)):
        return e
    if isinstance(e, Shift):
        child = simplify(e.child)
        if isinstance(child, Inf):
            return child
        if isinstance(child, Atom):
            return Atom(child.coeffs, child.constant + e.offset)
        return Shift(child, e.offset)
    children = [simplify(c) for c in e.children]
    if isinstance(e, MaxOf):
        if any(isinstance(c, Inf) and c.sign > 0 for c in children):
            return Inf(1)
        kept = [c for c in children if not isinstance(c, Inf)]
        if not kept:
            return Inf(-1)
        return kept[0] if len(kept) == 1 else MaxOf(tuple(kept))
    if any(isinstance(c, Inf) and c.sign < 0 for c in children):
        return Inf(-1)
    kept = [c for c in children if not isinstance(c, Inf)]
    if not kept:
        return Inf(1)
    return kept[0] if len(kept) == 1 else MinOf(tuple(kept))


def substitute_inf(e: Expr, index: int, sign: int) -> Expr:
    """Pin variable `index` to an infinity and fold the consequences."""
    def walk(node: Expr) -> Expr:
        if isinstance(node, Atom):
            c = node.coeffs[index]
            if not c:
                return node
            # gradients are nonnegative, so the atom inherits the sign
            return Inf(sign)
        if isinstance(node, Inf):
            return node
        if isinstance(node, Shift):
            return Shift(walk(node.child), node.offset)
        if isinstance(node, MinOf):
            return MinOf(tuple(walk(c) for c in node.children))
        return MaxOf(tuple(walk(c) for c in node.children))

    return simplify(walk(e))


def substitute_affine(e: Expr, index: int, replacement: Atom) -> Expr:
    """Replace variable `index` by an affine form (inlining of copies,
    shifts and constants)."""
    if replacement.coeffs[index]:
        raise ValueError("replacement must not reference the substituted variable")

    def walk(node: Expr) -> Expr:
        if isinstance(node, Atom):
            c = node.coeffs[index]
            if not c:
                return node
            coeffs = [a + c * b for a, b in zip(node.coeffs, replacement.coeffs)]
            coeffs[index] = Fraction(0)
            return Atom(tuple(coeffs), node.constant + c * replacement.constant)
        if isinstance(node, Inf):
            return node
        if isinstance(node, Shift):
            return Shift(walk(node.child), node.offset)
        if isinstance(node, MinOf):
            return MinOf(tuple(walk(c) for c in node.children))
        return MaxOf(tuple(walk(c) for c in node.children))

    return walk(e)


def reindex(e: Expr, mapping: dict[int, int], new_dim: int) -> Expr:
    """Rewrite atoms onto a smaller variable space."""
    if isinstance(e, Atom):
        coeffs = [Fraction(0)] * new_dim
        for i, c in enumerate(e.coeffs):
            if c:
                coeffs[mapping[i]] = c
        return Atom(tuple(coeffs), e.constant)
    if isinstance(e, Inf):
        return e
    if isinstance(e, Shift):
        return Shift(reindex(e.child, mapping, new_dim), e.offset)
    if isinstance(e, MinOf):
        return MinOf(tuple(reindex(c, mapping, new_dim) for c in e.children))
    return MaxOf(tuple(reindex(c, mapping, new_dim) for c in e.children))


# -- normalization ----------------------------------------------------------

_Groups = tuple[tuple[AffineTerm, ...], ...]  # min over groups of max over terms


def _dedup_group(terms: tuple[AffineTerm, ...]) -> tuple[AffineTerm, ...]:
    # identical terms collapse; a term with the same gradient and a
    # smaller constant is dominated inside a max
    best: dict[tuple, AffineTerm] = {}
    order: list[tuple] = []
    for t in terms:
        key = t.grad
        if key not in best:
            best[key] = t
            order.append(key)
        elif t.constant > best[key].constant:
            best[key] = t
    return tuple(best[k] for k in order)


def _dedup_groups(groups: _Groups) -> _Groups:
    # inside a min, a group whose term set contains another group's is
    # dominated (its max is at least as large)
    sets = [frozenset(g) for g in groups]
    kept: list[int] = []
    for i, si in enumerate(sets):
        dominated = False
        for j, sj in enumerate(sets):
            if i == j:
                continue
            if sj < si or (sj == si and j < i):
                dominated = True
                break
        if not dominated:
            kept.append(i)
    return tuple(groups[i] for i in kept)


def _normalize(e: Expr, dim: int, budget: int) -> _Groups:
    if isinstance(e, Atom):
        return ((AffineTerm(e.coeffs, e.constant),),)
    if isinstance(e, Inf):
        raise ValueError("infinite constant reached normalization; "
                         "run the infinity pre-pass first")
    if isinstance(e, Shift):
        inner = _normalize(e.child, dim, budget)
        return tuple(
            tuple(AffineTerm(t.grad, t.constant + e.offset) for t in g)
            for g in inner
        )
    if isinstance(e, MinOf):
        groups: list[tuple[AffineTerm, ...]] = []
        for child in e.children:
            groups.extend(_normalize(child, dim, budget))
        out = _dedup_groups(tuple(groups))
        _check_budget(out, budget)
        return out
    # max over min-of-max children distributes into a product of choices
    parts = [_normalize(c, dim, budget) for c in e.children]
    size = 1
    for p in parts:
        size *= len(p)
        if size > budget:
            raise NormalizationTooLarge(
                f"canonical form needs more than {budget} groups")
    groups = []
    for combo in product(*parts):
        merged: list[AffineTerm] = []
        for g in combo:
            merged.extend(g)
        groups.append(_dedup_group(tuple(merged)))
    out = _dedup_groups(tuple(groups))
    _check_budget(out, budget)
    return out


def _check_budget(groups: _Groups, budget: int) -> None:
    total = sum(len(g) for g in groups)
    if total > budget:
        raise NormalizationTooLarge(
            f"canonical form has {total} terms, budget is {budget}")


def normalize_expr(e: Expr, dim: int, budget: int = DEFAULT_TERM_BUDGET) -> tuple[MaxGroup, ...]:
    """Canonical min-of-max form of one coordinate."""
    return tuple(MaxGroup(g) for g in _normalize(simplify(e), dim, budget))


def normalize_system(exprs: Sequence[Expr], dim: int,
                     budget: int = DEFAULT_TERM_BUDGET) -> PwaSystem:
    return PwaSystem(dim, tuple(normalize_expr(e, dim, budget) for e in exprs))
