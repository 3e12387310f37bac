"""Rationals extended with two infinities, for the pre-pass only.

Infinite values exist so that interval bound equations can be iterated
from an all-(-inf) start and so that diverging bounds can be pinned to
+inf; they never reach a PwaSystem.
"""

from __future__ import annotations

from fractions import Fraction


class Infinity:
    """Signed infinity comparable with Fraction; +inf + (-inf) is an error."""

    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = sign

    def __repr__(self):
        return "+inf" if self.sign > 0 else "-inf"

    def __eq__(self, other):
        return isinstance(other, Infinity) and other.sign == self.sign

    def __hash__(self):
        return hash(("inf", self.sign))

    def __lt__(self, other):
        if isinstance(other, Infinity):
            return self.sign < other.sign
        return self.sign < 0

    def __le__(self, other):
        return self == other or self < other

    def __gt__(self, other):
        if isinstance(other, Infinity):
            return self.sign > other.sign
        return self.sign > 0

    def __ge__(self, other):
        return self == other or self > other

    def __add__(self, other):
        if isinstance(other, Infinity):
            if other.sign != self.sign:
                raise ArithmeticError("+inf + -inf is undefined")
            return self
        return self

    __radd__ = __add__

    def __neg__(self):
        return POS_INF if self.sign < 0 else NEG_INF


POS_INF = Infinity(1)
NEG_INF = Infinity(-1)

ExtRat = Fraction | Infinity


def is_finite(value: ExtRat) -> bool:
    return not isinstance(value, Infinity)


def ext_str(value: ExtRat) -> str:
    if isinstance(value, Infinity):
        return repr(value)
    return str(value)
