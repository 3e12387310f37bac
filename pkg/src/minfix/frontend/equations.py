"""The .eqs equation format: declarations then one equation per variable.

    var x; var y;
    x = max(0, x - 1);
    y = min(max(2, x + 1), max(15, y));

Expressions are min/max combinations of affine terms; only rational
offsets may be added to or subtracted from a min/max subexpression.
Printing a parsed system and reparsing yields an identical system.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..core import PwaSystem, validate_system
from ..errors import NormalizationTooLarge, ParseError
from .expr import Atom, Expr, MaxOf, MinOf, Shift, normalize_expr
from .lexer import Token, TokenStream, tokenize


@dataclass(frozen=True)
class NamedSystem:
    """A validated system plus its variable names and, for compiled
    programs, the control-point provenance of each bound variable."""

    system: PwaSystem
    var_names: tuple[str, ...]
    provenance: dict | None = None

    def index_of(self, name: str) -> int:
        return self.var_names.index(name)


class _EquationParser:
    def __init__(self, text: str):
        self.ts = TokenStream(tokenize(text, comment="#"))
        self.names: list[str] = []
        self.index: dict[str, int] = {}
        self.equations: dict[str, tuple[Expr, Token]] = {}

    def parse(self) -> NamedSystem:
        saw_equation = False
        while not self.ts.eof:
            if self.ts.at("var"):
                if saw_equation:
                    tok = self.ts.peek()
                    raise ParseError("declarations must precede equations",
                                     tok.line, tok.col)
                self.ts.next()
                name = self.ts.expect_name("variable name")
                if name.text in self.index:
                    raise ParseError(f"duplicate declaration of {name.text!r}",
                                     name.line, name.col)
                self.index[name.text] = len(self.names)
                self.names.append(name.text)
                self.ts.expect(";")
                continue
            saw_equation = True
            name = self.ts.expect_name("variable name")
            if name.text not in self.index:
                raise ParseError(f"unknown identifier {name.text!r}", name.line, name.col)
            if name.text in self.equations:
                raise ParseError(f"duplicate equation for {name.text!r}",
                                 name.line, name.col)
            self.ts.expect("=")
            expr = self.parse_expr()
            self.ts.expect(";")
            self.equations[name.text] = (expr, name)
        if not self.names:
            raise ParseError("no variables declared", 1, 1)
        missing = [n for n in self.names if n not in self.equations]
        if missing:
            raise ParseError(f"missing equation for {missing[0]!r}", 1, 1)
        return self.build()

    # expression := operand { ('+' | '-') continuation }, where an affine
    # operand may absorb further affine addends and a min/max operand may
    # only be shifted by rationals
    def parse_expr(self) -> Expr:
        expr, affine = self.parse_operand(first=True)
        while True:
            if self.ts.accept("+"):
                sign = Fraction(1)
            elif self.ts.accept("-"):
                sign = Fraction(-1)
            else:
                return expr
            tok = self.ts.peek()
            piece, piece_affine = self.parse_operand(first=False, sign=sign)
            if affine and piece_affine:
                expr = _add_atoms(expr, piece)
            elif piece_affine and isinstance(piece, Atom) and not any(piece.coeffs):
                expr = Shift(expr, piece.constant) if not isinstance(expr, Shift) \
                    else Shift(expr.child, expr.offset + piece.constant)
            else:
                raise ParseError(
                    "only a rational offset may be added to a min/max expression",
                    tok.line, tok.col)
            affine = affine and piece_affine

    def parse_operand(self, first: bool, sign: Fraction = Fraction(1)) -> tuple[Expr, bool]:
        """Returns (expr, is_affine_atom)."""
        dim = len(self.names)
        tok = self.ts.peek()
        if tok.kind == "name" and tok.text in ("min", "max"):
            if sign < 0:
                raise ParseError("cannot negate a min/max expression", tok.line, tok.col)
            if not first:
                raise ParseError(
                    "min/max may only start an operand; "
                    "use min(...) + rational instead", tok.line, tok.col)
            self.ts.next()
            self.ts.expect("(")
            children = [self.parse_expr()]
            while self.ts.accept(","):
                children.append(self.parse_expr())
            self.ts.expect(")")
            if len(children) == 1:
                return children[0], False
            node = MinOf(tuple(children)) if tok.text == "min" else MaxOf(tuple(children))
            return node, False
        if tok.kind == "name":
            self.ts.next()
            if tok.text not in self.index:
                raise ParseError(f"unknown identifier {tok.text!r}", tok.line, tok.col)
            coeffs = [Fraction(0)] * dim
            coeffs[self.index[tok.text]] = sign
            return Atom(tuple(coeffs), Fraction(0)), True
        if tok.kind == "number":
            self.ts.next()
            value = sign * tok.value
            if self.ts.accept("*"):
                name = self.ts.expect_name("variable name")
                if name.text not in self.index:
                    raise ParseError(f"unknown identifier {name.text!r}",
                                     name.line, name.col)
                coeffs = [Fraction(0)] * dim
                coeffs[self.index[name.text]] = value
                return Atom(tuple(coeffs), Fraction(0)), True
            return Atom((Fraction(0),) * dim, value), True
        if tok.text == "-":
            self.ts.next()
            inner, affine = self.parse_operand(first=False, sign=-sign)
            return inner, affine
        raise ParseError(f"expected expression, found {tok.text!r}", tok.line, tok.col)

    def build(self) -> NamedSystem:
        dim = len(self.names)
        coords = []
        for name in self.names:
            expr, tok = self.equations[name]
            try:
                groups = normalize_expr(expr, dim)
            except NormalizationTooLarge as exc:
                raise ParseError(str(exc), tok.line, tok.col) from exc
            coords.append(groups)
        system = PwaSystem(dim, tuple(coords))
        report = validate_system(system)
        if not report.ok:
            issue = report.issues[0]
            _, tok = self.equations[self.names[issue.coord]]
            raise ParseError(issue.message, tok.line, tok.col)
        return NamedSystem(system, tuple(self.names))


def _add_atoms(a: Atom, b: Atom) -> Atom:
    return Atom(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)), a.constant + b.constant)


def parse_equations(text: str) -> NamedSystem:
    return _EquationParser(text).parse()


def _format_fraction(value: Fraction) -> str:
    return str(value)


def _format_term(grad, constant, names) -> str:
    parts = []
    for coeff, name in zip(grad, names):
        if coeff == 0:
            continue
        parts.append(name if coeff == 1 else f"{_format_fraction(coeff)}*{name}")
    if not parts:
        return _format_fraction(constant)
    text = " + ".join(parts)
    if constant > 0:
        text += f" + {_format_fraction(constant)}"
    elif constant < 0:
        text += f" - {_format_fraction(-constant)}"
    return text


def print_equations(ns: NamedSystem) -> str:
    """Canonical text form; parse_equations(print_equations(ns)) == ns."""
    names = ns.var_names
    lines = [f"var {name};" for name in names]
    for name, actions in zip(names, ns.system.coords):
        rendered_groups = []
        for grp in actions:
            terms = [_format_term(t.grad, t.constant, names) for t in grp.terms]
            rendered_groups.append(terms[0] if len(terms) == 1
                                   else "max(" + ", ".join(terms) + ")")
        body = rendered_groups[0] if len(rendered_groups) == 1 \
            else "min(" + ", ".join(rendered_groups) + ")"
        lines.append(f"{name} = {body};")
    return "\n".join(lines) + "\n"
