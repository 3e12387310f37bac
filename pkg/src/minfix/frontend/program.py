"""The .tc toy imperative language and its compilation to bound equations.

    int x, int y,
    x=[0,2]; y=[10,15]      //1
    while (x<=y) {          //2
      x=x+1;                //3
      while (5<=y) {        //4
        y=y-1;              //5
      }                     //6
    }                       //7

Statements are interval assignments v=[a,b], increments v=v+c / v=v-c
with a nonnegative integer c, and while loops guarded by v<=w, v<=c or
c<=v over integer variables.  Semicolons are optional separators.

Control points carry invariants: point 1 is the state after the leading
run of interval assignments, each later statement gets a point after it,
a while loop gets a body-entry point (guard true, join of the path
before the loop and the body end) and an exit point (guard negated over
integers); a trailing point mirrors the final state when the program
does not end in a loop.  Every variable's interval at point p is encoded
as two bound coordinates (negated lower bound, upper bound), which makes
all transfer functions monotone: joins become max, guard intersections
become min, and increments become shifts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import ParseError
from .expr import Expr, MaxOf, MinOf, Shift, const_atom, var_atom
from .lexer import TokenStream, tokenize


@dataclass(frozen=True)
class IntervalAssign:
    var: str
    lo: Fraction
    hi: Fraction
    line: int
    point: int | None = None  # None for preamble assignments


@dataclass(frozen=True)
class Increment:
    var: str
    delta: Fraction  # +c or -c
    line: int
    point: int = 0


@dataclass(frozen=True)
class Condition:
    kind: str  # "var_le_var", "var_le_const", "const_le_var"
    left: str | Fraction
    right: str | Fraction


@dataclass(frozen=True)
class While:
    cond: Condition
    body: tuple["Stmt", ...]
    line: int
    head_point: int = 0
    exit_point: int = 0


Stmt = IntervalAssign | Increment | While


@dataclass(frozen=True)
class Program:
    variables: tuple[str, ...]
    preamble: tuple[IntervalAssign, ...]
    body: tuple[Stmt, ...]
    num_points: int
    final_point: int


class _ProgramParser:
    def __init__(self, text: str):
        self.ts = TokenStream(tokenize(text, comment="//"))
        self.variables: list[str] = []
        self.defined: set[str] = set()
        self.next_point = 1

    def parse(self) -> Program:
        self.parse_declarations()
        # the initialization run shares control point 1; it ends at the
        # first non-assignment or at a reassignment of the same variable
        preamble = []
        while self.is_interval_assign():
            nxt = self.ts.peek()
            if any(a.var == nxt.text for a in preamble):
                break
            preamble.append(self.parse_interval_assign(point=None))
        if not preamble:
            tok = self.ts.peek()
            raise ParseError("program must start with interval assignments",
                             tok.line, tok.col)
        self.next_point = 2  # point 1 is the post-preamble state
        body = self.parse_statements(until_brace=False)
        if body and isinstance(body[-1], While):
            final_point = body[-1].exit_point
        else:
            final_point = self.next_point
            self.next_point += 1
        return Program(tuple(self.variables), tuple(preamble), tuple(body),
                       self.next_point - 1, final_point)

    def parse_declarations(self) -> None:
        while self.ts.at("int"):
            self.ts.next()
            name = self.ts.expect_name("variable name")
            if name.text in self.variables:
                raise ParseError(f"duplicate declaration of {name.text!r}",
                                 name.line, name.col)
            self.variables.append(name.text)
            self.ts.accept(",")
            self.ts.accept(";")
        if not self.variables:
            tok = self.ts.peek()
            raise ParseError("expected 'int' declarations", tok.line, tok.col)

    def is_interval_assign(self) -> bool:
        tok = self.ts.peek()
        if tok.kind != "name" or tok.text == "while":
            return False
        nxt = self.ts.tokens[self.ts.pos + 1: self.ts.pos + 3]
        return len(nxt) == 2 and nxt[0].text == "=" and nxt[1].text == "["

    def check_declared(self, tok) -> str:
        if tok.text not in self.variables:
            raise ParseError(f"undeclared variable {tok.text!r}", tok.line, tok.col)
        return tok.text

    def check_defined(self, tok) -> str:
        name = self.check_declared(tok)
        if name not in self.defined:
            raise ParseError(f"variable {tok.text!r} used before interval assignment",
                             tok.line, tok.col)
        return name

    def parse_int(self) -> Fraction:
        sign = Fraction(-1) if self.ts.accept("-") else Fraction(1)
        tok = self.ts.expect_number("integer")
        value = tok.value
        if value.denominator != 1:
            raise ParseError("interval endpoints must be integers", tok.line, tok.col)
        return sign * value

    def parse_interval_assign(self, point: int | None) -> IntervalAssign:
        tok = self.ts.expect_name()
        name = self.check_declared(tok)
        self.ts.expect("=")
        self.ts.expect("[")
        lo = self.parse_int()
        self.ts.expect(",")
        hi = self.parse_int()
        self.ts.expect("]")
        self.ts.accept(";")
        if lo > hi:
            raise ParseError(f"empty interval [{lo},{hi}]", tok.line, tok.col)
        self.defined.add(name)
        return IntervalAssign(name, lo, hi, tok.line, point)

    def parse_statements(self, until_brace: bool) -> tuple[Stmt, ...]:
        stmts: list[Stmt] = []
        while True:
            if until_brace and self.ts.at("}"):
                return tuple(stmts)
            if self.ts.eof:
                if until_brace:
                    tok = self.ts.peek()
                    raise ParseError("expected '}'", tok.line, tok.col)
                return tuple(stmts)
            stmts.append(self.parse_statement())

    def parse_statement(self) -> Stmt:
        tok = self.ts.peek()
        if tok.text == "while":
            return self.parse_while()
        if tok.kind != "name":
            raise ParseError(f"expected statement, found {tok.text!r}",
                             tok.line, tok.col)
        if self.is_interval_assign():
            point = self.next_point
            self.next_point += 1
            return self.parse_interval_assign(point)
        name_tok = self.ts.next()
        name = self.check_defined(name_tok)
        self.ts.expect("=")
        rhs = self.ts.expect_name("the assigned variable on the right-hand side")
        if rhs.text != name:
            raise ParseError(
                f"unsupported construct: assignment {name} = {rhs.text} "
                "(only v = v + c and v = v - c are supported)",
                rhs.line, rhs.col)
        if self.ts.accept("+"):
            sign = Fraction(1)
        elif self.ts.accept("-"):
            sign = Fraction(-1)
        else:
            t = self.ts.peek()
            raise ParseError("expected '+' or '-' in increment", t.line, t.col)
        amount_tok = self.ts.expect_number("nonnegative integer")
        amount = amount_tok.value
        if amount.denominator != 1 or amount < 0:
            raise ParseError("increment amount must be a nonnegative integer",
                             amount_tok.line, amount_tok.col)
        self.ts.accept(";")
        point = self.next_point
        self.next_point += 1
        return Increment(name, sign * amount, name_tok.line, point)

    def parse_while(self) -> While:
        tok = self.ts.expect("while")
        self.ts.expect("(")
        cond = self.parse_condition()
        self.ts.expect(")")
        head = self.next_point
        self.next_point += 1
        self.ts.expect("{")
        # definitions inside the body do not escape: the loop may run
        # zero times, so they are not available after the loop
        outer_defined = set(self.defined)
        body = self.parse_statements(until_brace=True)
        self.defined = outer_defined
        self.ts.expect("}")
        self.ts.accept(";")
        exit_point = self.next_point
        self.next_point += 1
        return While(cond, body, tok.line, head, exit_point)

    def parse_condition(self) -> Condition:
        left = self.ts.peek()
        if left.kind == "number" or left.text == "-":
            c = self.parse_int()
            op = self.ts.peek()
            if not self.ts.accept("<="):
                raise ParseError(
                    f"unsupported comparison {op.text!r}: only '<=' is supported",
                    op.line, op.col)
            var = self.check_defined(self.ts.expect_name())
            return Condition("const_le_var", c, var)
        var_tok = self.ts.expect_name("variable or integer")
        var = self.check_defined(var_tok)
        op = self.ts.peek()
        if not self.ts.accept("<="):
            raise ParseError(
                f"unsupported comparison {op.text!r}: only '<=' is supported",
                op.line, op.col)
        right = self.ts.peek()
        if right.kind == "number" or right.text == "-":
            return Condition("var_le_const", var, self.parse_int())
        other = self.check_defined(self.ts.expect_name())
        return Condition("var_le_var", var, other)


def parse_program(text: str) -> Program:
    return _ProgramParser(text).parse()


# -- equation generation -----------------------------------------------------


@dataclass(frozen=True)
class ExprSystem:
    """Pre-normalization equation system: one expression per bound
    coordinate, plus the control-point provenance of every name."""

    names: tuple[str, ...]
    exprs: tuple[Expr, ...]
    # point -> var -> (negated-lower coordinate name, upper coordinate name)
    provenance: dict[int, dict[str, tuple[str, str]]]


# equations are first written as small recipe tuples over coordinate
# indices, then turned into Expr atoms once the full dimension is known:
#   ("const", c) | ("copy", i) | ("shift", i, off)
#   ("join", recipes) | ("meet", recipes) | ("offset", recipe, off)


class _Generator:
    def __init__(self, program: Program):
        self.program = program
        self.names: list[str] = []
        self.index: dict[str, int] = {}
        self.provenance: dict[int, dict[str, tuple[str, str]]] = {}
        self.defs: dict[int, tuple] = {}

    def allocate(self, point: int, variables) -> dict[str, tuple[int, int]]:
        """Create the two bound coordinates of every variable at a point."""
        slots = {}
        self.provenance[point] = {}
        pair = []
        for var in variables:
            pair.clear()
            for side in ("m", "p"):
                name = f"{var}{point}{side}"
                while name in self.index:
                    name += "_"
                self.index[name] = len(self.names)
                self.names.append(name)
                pair.append(name)
            slots[var] = (self.index[pair[0]], self.index[pair[1]])
            self.provenance[point][var] = (pair[0], pair[1])
        return slots

    def run(self) -> ExprSystem:
        program = self.program
        seen: list[str] = []
        for a in program.preamble:
            if a.var not in seen:
                seen.append(a.var)
        state = self.allocate(1, seen)
        last = {a.var: a for a in program.preamble}
        for var, assign in last.items():
            m, p = state[var]
            self.defs[m] = ("const", -assign.lo)
            self.defs[p] = ("const", assign.hi)
        state = self.generate_block(program.body, state)
        if program.final_point not in self.provenance:
            final = self.allocate(program.final_point, list(state))
            for var, (m, p) in final.items():
                sm, sp = state[var]
                self.defs[m] = ("copy", sm)
                self.defs[p] = ("copy", sp)
        dim = len(self.names)
        exprs = [self.to_expr(self.defs[i], dim) for i in range(dim)]
        return ExprSystem(tuple(self.names), tuple(exprs), self.provenance)

    def to_expr(self, recipe: tuple, dim: int) -> Expr:
        kind = recipe[0]
        if kind == "const":
            return const_atom(dim, recipe[1])
        if kind == "copy":
            return var_atom(dim, recipe[1])
        if kind == "shift":
            return var_atom(dim, recipe[1], recipe[2])
        if kind == "offset":
            return Shift(self.to_expr(recipe[1], dim), Fraction(recipe[2]))
        children = tuple(self.to_expr(s, dim) for s in recipe[1])
        return MaxOf(children) if kind == "join" else MinOf(children)

    def generate_block(self, stmts, state):
        for stmt in stmts:
            if isinstance(stmt, IntervalAssign):
                variables = list(state)
                if stmt.var not in variables:
                    variables.append(stmt.var)
                new_state = self.allocate(stmt.point, variables)
                for var, (m, p) in new_state.items():
                    if var == stmt.var:
                        self.defs[m] = ("const", -stmt.lo)
                        self.defs[p] = ("const", stmt.hi)
                    else:
                        sm, sp = state[var]
                        self.defs[m] = ("copy", sm)
                        self.defs[p] = ("copy", sp)
                state = new_state
            elif isinstance(stmt, Increment):
                new_state = self.allocate(stmt.point, list(state))
                for var, (m, p) in new_state.items():
                    sm, sp = state[var]
                    if var == stmt.var:
                        self.defs[m] = ("shift", sm, -stmt.delta)
                        self.defs[p] = ("shift", sp, stmt.delta)
                    else:
                        self.defs[m] = ("copy", sm)
                        self.defs[p] = ("copy", sp)
                state = new_state
            else:
                state = self.generate_while(stmt, state)
        return state

    def generate_while(self, stmt: While, state):
        head = self.allocate(stmt.head_point, list(state))
        body_state = self.generate_block(stmt.body, head)
        exit_state = self.allocate(stmt.exit_point, list(state))
        modified = _assigned_vars(stmt.body)

        def join(var: str, side: int) -> tuple:
            # variables the body never assigns need no join: the back
            # edge carries their entry value unchanged (the head copies
            # the entry state, the exit copies the body end)
            if var not in modified:
                return ("copy", state[var][side])
            # an empty body makes the back edge the head itself, which is
            # still correct for the least solution
            return ("join", (("copy", state[var][side]),
                             ("copy", body_state[var][side])))

        def exit_base(var: str, side: int) -> tuple:
            if var not in modified:
                return ("copy", body_state[var][side])
            return join(var, side)

        for var, (m, p) in head.items():
            self.defs[m] = join(var, 0)
            self.defs[p] = join(var, 1)
        for var, (m, p) in exit_state.items():
            self.defs[m] = exit_base(var, 0)
            self.defs[p] = exit_base(var, 1)

        cond = stmt.cond
        if cond.kind == "var_le_var":
            v, w = cond.left, cond.right
            self.defs[head[v][1]] = ("meet", (join(v, 1), join(w, 1)))
            self.defs[head[w][0]] = ("meet", (join(w, 0), join(v, 0)))
            self.defs[exit_state[v][0]] = ("meet", (exit_base(v, 0),
                                                    ("offset", exit_base(w, 0), -1)))
            self.defs[exit_state[w][1]] = ("meet", (exit_base(w, 1),
                                                    ("offset", exit_base(v, 1), -1)))
        elif cond.kind == "var_le_const":
            v, c = cond.left, cond.right
            self.defs[head[v][1]] = ("meet", (join(v, 1), ("const", c)))
            self.defs[exit_state[v][0]] = ("meet", (exit_base(v, 0), ("const", -(c + 1))))
        else:
            c, v = cond.left, cond.right
            self.defs[head[v][0]] = ("meet", (join(v, 0), ("const", -c)))
            self.defs[exit_state[v][1]] = ("meet", (exit_base(v, 1), ("const", c - 1)))
        return exit_state


def _assigned_vars(stmts) -> set[str]:
    out: set[str] = set()
    for stmt in stmts:
        if isinstance(stmt, (IntervalAssign, Increment)):
            out.add(stmt.var)
        else:
            out |= _assigned_vars(stmt.body)
    return out


def generate_equations(program: Program) -> ExprSystem:
    return _Generator(program).run()
