"""The .game format: states, actions and counter-actions with
substochastic transition rows and payments.

    state 1 {
      action stay {
        b 1: P = [1/2], r = 1;
      }
    }

State i becomes coordinate i: the min over the first player's actions of
the max over the second player's counter-actions of P . x + r.  Rows
must be nonnegative with sum at most 1 (the slack is the stopping
probability); anything else is rejected with its location, since it
would break monotonicity or nonexpansiveness.
"""

from __future__ import annotations

from fractions import Fraction

from ..core import AffineTerm, MaxGroup, PwaSystem
from ..errors import ParseError
from .equations import NamedSystem
from .lexer import TokenStream, tokenize


def _label(ts: TokenStream) -> str:
    tok = ts.peek()
    if tok.kind not in ("name", "number"):
        raise ParseError(f"expected a label, found {tok.text!r}", tok.line, tok.col)
    ts.next()
    return tok.text


def parse_game(text: str) -> NamedSystem:
    ts = TokenStream(tokenize(text, comment="#"))
    states: list[str] = []
    # per state: list of (action_label, [(b_label, row, payment, line, col)])
    parsed: list[tuple[str, list]] = []

    while not ts.eof:
        ts.expect("state")
        name = _label(ts)
        if name in states:
            tok = ts.tokens[ts.pos - 1]
            raise ParseError(f"duplicate state {name!r}", tok.line, tok.col)
        states.append(name)
        ts.expect("{")
        actions = []
        while not ts.at("}"):
            ts.expect("action")
            action_label = _label(ts)
            ts.expect("{")
            entries = []
            while not ts.at("}"):
                ts.expect("b")
                b_label = _label(ts)
                ts.expect(":")
                ts.expect("P")
                ts.expect("=")
                open_tok = ts.expect("[")
                row: list[Fraction] = []
                if not ts.at("]"):
                    row.append(_signed_number(ts))
                    while ts.accept(","):
                        row.append(_signed_number(ts))
                ts.expect("]")
                ts.expect(",")
                ts.expect("r")
                ts.expect("=")
                payment = _signed_number(ts)
                ts.accept(";")
                entries.append((b_label, row, payment, open_tok.line, open_tok.col))
            ts.expect("}")
            if not entries:
                tok = ts.tokens[ts.pos - 1]
                raise ParseError(f"action {action_label!r} has no counter-actions",
                                 tok.line, tok.col)
            actions.append((action_label, entries))
        ts.expect("}")
        if not actions:
            tok = ts.tokens[ts.pos - 1]
            raise ParseError(f"state {name!r} has no actions", tok.line, tok.col)
        parsed.append((name, actions))

    if not parsed:
        raise ParseError("no states defined", 1, 1)

    dim = len(states)
    coords = []
    action_labels: list[tuple[str, ...]] = []
    for state_name, actions in parsed:
        groups = []
        for action_label, entries in actions:
            terms = []
            for b_label, row, payment, line, col in entries:
                if len(row) != dim:
                    raise ParseError(
                        f"transition row has {len(row)} entries, expected {dim} "
                        f"(one per state)", line, col)
                for q in row:
                    if q < 0:
                        raise ParseError(f"negative probability {q}", line, col)
                total = sum(row)
                if total > 1:
                    raise ParseError(
                        f"transition row sums to {total} > 1: the implied "
                        "discount rate would break nonexpansiveness", line, col)
                terms.append(AffineTerm(tuple(row), payment))
            groups.append(MaxGroup(tuple(terms)))
        coords.append(tuple(groups))
        action_labels.append(tuple(label for label, _ in actions))
    return NamedSystem(PwaSystem(dim, tuple(coords)), tuple(states),
                       provenance={"action_labels": tuple(action_labels)})


def _signed_number(ts: TokenStream) -> Fraction:
    sign = Fraction(-1) if ts.accept("-") else Fraction(1)
    tok = ts.expect_number()
    return sign * tok.value
