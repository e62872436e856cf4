"""Scalar handling for the two arithmetic modes.

Exact mode works in ``fractions.Fraction`` (ints and 'p/q' strings coerce);
float mode works in machine doubles and every zero test carries an explicit
tolerance. Mixed arithmetic silently degrades to float, so containers track
an ``exact`` flag and coerce their entries up front.
"""

from __future__ import annotations

from fractions import Fraction

DEFAULT_TOL = 1e-10

RATIONALIZE_MAX_DENOMINATOR = 10**6


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def coerce(x, exact: bool):
    """Return x as Fraction (exact) or float; strings parse as rationals."""
    if exact:
        if isinstance(x, str):
            return Fraction(x)
        if is_exact(x):
            return Fraction(x)
        raise TypeError(f"float value {x!r} not allowed in exact mode")
    if isinstance(x, str):
        return float(Fraction(x))
    return float(x)


def all_exact(values) -> bool:
    return all(is_exact(x) or isinstance(x, str) for x in values)


def scalar_str(x) -> str:
    """Serialize for JSON: exact values as 'p' or 'p/q', floats via repr."""
    if is_exact(x):
        f = Fraction(x)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return repr(float(x))


def rationalize(x: float, max_denominator: int = RATIONALIZE_MAX_DENOMINATOR) -> Fraction:
    """Nearest rational with a bounded denominator (continued fractions)."""
    return Fraction(x).limit_denominator(max_denominator)
