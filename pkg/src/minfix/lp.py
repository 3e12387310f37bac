"""Exact-rational linear programming for value determination.

The smallest fixed point of a single-action (max-of-affine) system g is
the unique optimum of  min sum_i x_i  subject to  g(x) <= x,  which
transcribes to one linear row per affine term.  The solver is a dense
two-phase simplex over `Fraction` with Bland's anti-cycling rule: exact
termination, deterministic output, no degeneracy hazards at desk scale.
Variables are free; the split into nonnegative parts is internal and
results are reported in original coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import PolicySystem, Vec, evaluate, validate_system
from .errors import InvalidSystem, InvariantBroken, NoFiniteFixedPoint, UnboundedBelow

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class Constraint:
    """coeffs . x >= rhs"""

    coeffs: tuple[Fraction, ...]
    rhs: Fraction


@dataclass(frozen=True)
class LinearProgram:
    """Minimize objective . x over free x subject to >= constraints."""

    num_vars: int
    constraints: tuple[Constraint, ...]
    objective: tuple[Fraction, ...]


@dataclass(frozen=True)
class Optimal:
    x: Vec


@dataclass(frozen=True)
class Infeasible:
    pass


@dataclass(frozen=True)
class Unbounded:
    """ray is a feasible direction strictly decreasing the objective."""

    ray: Vec


LpOutcome = Optimal | Infeasible | Unbounded


def build_lp(ps: PolicySystem) -> LinearProgram:
    """Transcribe g(x) <= x: term (w, c) at coordinate j gives the row
    (e_j - w) . x >= c.  A point is feasible iff eval(ps, x) <= x."""
    if not ps.single_action:
        raise InvalidSystem("value determination requires a single-action system")
    rows = []
    for j, (grp,) in enumerate(ps.coords):
        for t in grp.terms:
            coeffs = list(-g for g in t.grad)
            coeffs[j] += _ONE
            rows.append(Constraint(tuple(coeffs), t.constant))
    return LinearProgram(ps.dim, tuple(rows), (_ONE,) * ps.dim)


def format_lp(lp: LinearProgram, var_names: list[str] | None = None) -> str:
    """Plain-text rendering, one constraint per line, exact fractions."""
    names = var_names or [f"x{i + 1}" for i in range(lp.num_vars)]

    def side(coeffs) -> str:
        parts = []
        for c, name in zip(coeffs, names):
            if c == 0:
                continue
            if c == 1:
                parts.append(f"+ {name}")
            elif c == -1:
                parts.append(f"- {name}")
            elif c > 0:
                parts.append(f"+ {c}*{name}")
            else:
                parts.append(f"- {-c}*{name}")
        if not parts:
            return "0"
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else text

    lines = [f"min {side(lp.objective)}"]
    lines.extend(f"{side(row.coeffs)} >= {row.rhs}" for row in lp.constraints)
    return "\n".join(lines)


class _Tableau:
    """Dense simplex tableau with an explicit reduced-cost row."""

    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction]):
        self.rows = rows
        self.rhs = rhs
        self.basis: list[int] = []
        self.obj: list[Fraction] = []
        self.obj_value = _ZERO

    def set_objective(self, cost: list[Fraction]) -> None:
        # reduced costs c_j - c_B . B^-1 A_j for the current basis
        self.obj = list(cost)
        self.obj_value = _ZERO
        for i, bi in enumerate(self.basis):
            cb = cost[bi]
            if cb == 0:
                continue
            row = self.rows[i]
            for j in range(len(self.obj)):
                if row[j]:
                    self.obj[j] -= cb * row[j]
            self.obj_value -= cb * self.rhs[i]

    def pivot(self, row: int, col: int) -> None:
        piv = self.rows[row][col]
        inv = _ONE / piv
        self.rows[row] = [v * inv for v in self.rows[row]]
        self.rhs[row] *= inv
        prow = self.rows[row]
        prhs = self.rhs[row]
        for i, r in enumerate(self.rows):
            if i == row or not r[col]:
                continue
            factor = r[col]
            self.rows[i] = [v - factor * p for v, p in zip(r, prow)]
            self.rhs[i] -= factor * prhs
        if self.obj[col]:
            factor = self.obj[col]
            self.obj = [v - factor * p for v, p in zip(self.obj, prow)]
            self.obj_value -= factor * prhs
        self.basis[row] = col

    def run(self, allowed: list[bool]) -> int | None:
        """Bland's rule loop.  Returns None at optimum, or the entering
        column index when the problem is unbounded in that direction."""
        while True:
            enter = None
            for j, a in enumerate(allowed):
                if a and self.obj[j] < 0:
                    enter = j
                    break
            if enter is None:
                return None
            leave = None
            best: Fraction | None = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if best is None or ratio < best or (
                        ratio == best and self.basis[i] < self.basis[leave]
                    ):
                        best = ratio
                        leave = i
            if leave is None:
                return enter
            self.pivot(leave, enter)


def simplex_solve(lp: LinearProgram) -> LpOutcome:
    """Two-phase simplex; exact optimum over the rationals."""
    n = lp.num_vars
    m = len(lp.constraints)
    # columns: positive parts, negative parts, surplus, then artificials
    n_struct = 2 * n + m
    total = n_struct + m
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for i, con in enumerate(lp.constraints):
        row = [_ZERO] * total
        sign = _ONE if con.rhs >= 0 else -_ONE
        for j, c in enumerate(con.coeffs):
            if c:
                row[j] = sign * c
                row[n + j] = -sign * c
        row[2 * n + i] = -sign  # surplus
        row[n_struct + i] = _ONE  # artificial
        rows.append(row)
        rhs.append(sign * con.rhs)

    tab = _Tableau(rows, rhs)
    tab.basis = [n_struct + i for i in range(m)]

    # phase 1: drive the artificial variables to zero
    phase1_cost = [_ZERO] * n_struct + [_ONE] * m
    tab.set_objective(phase1_cost)
    allowed = [True] * n_struct + [False] * m
    enter = tab.run(allowed)
    assert enter is None  # phase 1 objective is bounded below by 0
    if tab.obj_value != 0:
        return Infeasible()

    # remove artificials that are still basic (degenerate rows)
    for i in range(m - 1, -1, -1):
        if tab.basis[i] < n_struct:
            continue
        col = next((j for j in range(n_struct) if tab.rows[i][j] != 0), None)
        if col is None:
            del tab.rows[i], tab.rhs[i], tab.basis[i]
        else:
            tab.pivot(i, col)

    # phase 2 over structural columns only
    for r in tab.rows:
        del r[n_struct:]
    phase2_cost = [_ZERO] * n_struct
    for j, c in enumerate(lp.objective):
        phase2_cost[j] = c
        phase2_cost[n + j] = -c
    tab.set_objective(phase2_cost)
    enter = tab.run([True] * n_struct)
    if enter is not None:
        # direction: entering column moves up, basics compensate
        w = [_ZERO] * n_struct
        w[enter] = _ONE
        for i, bi in enumerate(tab.basis):
            w[bi] = -tab.rows[i][enter]
        ray = tuple(w[j] - w[n + j] for j in range(n))
        return Unbounded(ray)

    z = [_ZERO] * n_struct
    for i, bi in enumerate(tab.basis):
        z[bi] = tab.rhs[i]
    return Optimal(tuple(z[j] - z[n + j] for j in range(n)))


def smallest_fixed_point_policy(ps: PolicySystem) -> Vec:
    """Smallest fixed point of a single-action system, or a diagnosis.

    Raises NoFiniteFixedPoint when the feasibility system g(x) <= x is
    empty (no fixed point in R^d) and UnboundedBelow when no smallest
    finite fixed point exists.  Both classifications complete the
    optimality statement, which presumes a smallest fixed point.
    """
    report = validate_system(ps)
    if not report.ok:
        raise InvalidSystem(f"invalid system: {report.summary()}")
    outcome = simplex_solve(build_lp(ps))
    if isinstance(outcome, Infeasible):
        raise NoFiniteFixedPoint(
            "the selected one-player map has no fixed point in R^d "
            "(feasibility system g(x) <= x is empty)")
    if isinstance(outcome, Unbounded):
        raise UnboundedBelow(
            "the selected one-player map has no smallest finite fixed point "
            f"(objective decreases along ray {outcome.ray})")
    u = outcome.x
    if evaluate(ps, u) != u:
        raise InvariantBroken("LP optimum is not a fixed point")  # pragma: no cover
    return u
