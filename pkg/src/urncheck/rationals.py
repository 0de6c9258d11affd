"""Parsing and formatting of exact rationals for the JSON interchange files.

Rationals travel as strings "p/q" (bare integers also accepted on input).
Floats are rejected: every quantity in this library is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def parse_rational(value) -> Fraction:
    """Parse an int, "p", or "p/q" into a Fraction.  Floats are rejected."""
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    raise ValueError(f"not a rational: {value!r} (floats are not accepted)")


def format_rational(q: Fraction) -> str:
    """Canonical string form: "p/q", or "p" when the denominator is 1."""
    return str(Fraction(q))


def common_integerization(values):
    """Scale Fractions to integers over their lcm denominator.

    Returns (ints, scale) with value[i] == ints[i] / scale exactly.  Used to
    run inequality sweeps in integer arithmetic.
    """
    values = [Fraction(v) for v in values]
    scale = 1
    for v in values:
        d = v.denominator
        scale = scale // gcd(scale, d) * d
    return [int(v * scale) for v in values], scale
