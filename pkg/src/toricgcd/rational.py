"""Exact rationals (``fractions.Fraction``) and their string form ``"p/q"``."""

from fractions import Fraction


def as_fraction(x):
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: nothing in this package may silently go inexact.
    """
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_rational(q):
    q = as_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s):
    return as_fraction(s)
