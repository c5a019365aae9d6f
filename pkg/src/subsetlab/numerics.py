"""Exact integer and rational arithmetic.

Python's ``int`` is already arbitrary precision and ``fractions.Fraction``
keeps a normalized ``num/den`` pair with ``den > 0``, so both are used
directly. The helpers here only pin down the error contract and the
unit-interval test used when scanning contribution tables.
"""

from fractions import Fraction
import operator

from .errors import DivisionByZero

ExactInt = int
ExactRational = Fraction

_OPS = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def rat_make(num: int, den: int = 1) -> Fraction:
    if den == 0:
        raise DivisionByZero(f"zero denominator in {num}/{den}")
    return Fraction(num, den)


def rat_arith(kind: str, a, b) -> Fraction:
    try:
        op = _OPS[kind]
    except KeyError:
        raise ValueError(f"unknown operation {kind!r}") from None
    a, b = Fraction(a), Fraction(b)
    if kind == "div" and b == 0:
        raise DivisionByZero(f"{a} / 0")
    return op(a, b)


def rat_in_unit_interval(x, lower_inclusive: bool = True) -> bool:
    """True iff ``0 < x < 1`` (``0 <= x < 1`` when *lower_inclusive*)."""
    if lower_inclusive:
        return 0 <= x < 1
    return 0 < x < 1
