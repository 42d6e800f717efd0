"""Exact rational scalars.

All geometric and solver arithmetic in this package runs on gmpy2.mpq,
aliased here as Rat.  mpq keeps numerator and denominator in lowest terms
with a positive denominator, so equality and hashing behave like
mathematical rationals.  Floating point appears only in Monte-Carlo
estimation and in human-readable output.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

import gmpy2
from gmpy2 import mpq

from .errors import InstanceFormatError

Rat = mpq

RatLike = Union[mpq, int, str, Fraction]

ZERO = mpq(0)
ONE = mpq(1)


def rat(value: RatLike, den: int | None = None) -> Rat:
    """Build an exact rational.

    Accepts ints, Fractions, other mpq values, and strings in either
    fraction form ("3/4", "-7/2") or decimal form ("0.125", "1e-3").
    Decimal strings are parsed exactly, never through binary floating
    point.
    """
    if den is not None:
        return mpq(value, den)
    if isinstance(value, float):
        raise InstanceFormatError(
            f"refusing to build an exact rational from float {value!r}; "
            "pass a string or Fraction instead"
        )
    if isinstance(value, str):
        text = value.strip()
        try:
            if "e" in text.lower() and "/" not in text:
                return mpq(Fraction(text))
            return mpq(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise InstanceFormatError(f"cannot parse rational from {value!r}") from exc
    try:
        return mpq(value)
    except (TypeError, ValueError) as exc:
        raise InstanceFormatError(f"cannot build rational from {value!r}") from exc


def rat_str(value: Rat) -> str:
    """Render as "p/q" (or "p" when the denominator is 1)."""
    return str(value)


def rat_decimal(value: Rat, sig: int = 12) -> str:
    """Decimal rendering with the requested number of significant digits.

    Goes through a 128-bit mpfr so that rationals with huge numerators or
    denominators cannot overflow the way a double would.
    """
    if value == 0:
        return "0"
    return format(gmpy2.mpfr(value, 128), f".{sig}g")


def ceil_isqrt(n: int) -> int:
    """Smallest integer s with s*s >= n, for n >= 0."""
    if n < 0:
        raise ValueError("ceil_isqrt of a negative number")
    s = math.isqrt(n)
    return s if s * s == n else s + 1


def ceil_rat(value: Rat) -> int:
    """Ceiling of an exact rational as a Python int."""
    num, den = value.numerator, value.denominator
    return -((-num) // den)


def floor_rat(value: Rat) -> int:
    return value.numerator // value.denominator


def snap_to_grid(value: Rat, denominator: int) -> Rat:
    """Nearest multiple of 1/denominator (ties round up).

    Used to keep iterated exact arithmetic from growing unbounded
    coefficient sizes; the introduced error is at most 1/(2*denominator).
    """
    if denominator <= 0:
        raise ValueError("grid denominator must be positive")
    scaled = value * denominator
    return Rat(floor_rat(scaled + Rat(1, 2)), denominator)


def rat_min(*values: Rat) -> Rat:
    return min(values)


def rat_max(*values: Rat) -> Rat:
    return max(values)
