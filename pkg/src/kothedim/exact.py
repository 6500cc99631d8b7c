"""Exact rational scalars and symbolic log-domain values.

Every comparison made anywhere in this package reduces to exact rational
arithmetic: either a plain coefficient (a :class:`fractions.Fraction`) or a
value of the form ``e^(coeff * alpha_n)`` compared through big-integer cross
multiplication.  Floats appear only in display/export paths and are flagged
as non-authoritative there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

if TYPE_CHECKING:  # pragma: no cover
    from .sequences import ExponentSequence

# Rational values are stdlib Fractions: arbitrary precision, stored in lowest
# terms with a positive denominator, exact ordering.  The alias keeps call
# sites honest about which quantities are part of the exact domain.
Rational = Fraction

LESS = -1
EQUAL = 0
GREATER = 1

# exp() saturation thresholds for display conversion (double precision)
_EXP_OVERFLOW = 710
_EXP_UNDERFLOW = -746


def rational_cmp(a: Rational, b: Rational) -> int:
    """Exact three-way comparison; returns LESS, EQUAL or GREATER."""
    if a < b:
        return LESS
    if a > b:
        return GREATER
    return EQUAL


def parse_rational(text: str) -> Rational:
    """Parse ``"p/q"`` or a plain integer/decimal string into a Fraction."""
    return Fraction(text.strip())


def format_rational(x: Rational) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class LogTerm:
    """The real number ``e^(coeff * alpha_index)``, kept symbolic.

    ``coeff`` is dimensionless and exact; ``alpha_index`` indexes into an
    exponent sequence.  The denoted value is only ever materialized as a
    float for display.
    """

    coeff: Rational
    alpha_index: int

    def log_value(self, seq: "ExponentSequence") -> Rational:
        """Exact exponent ``coeff * alpha_{alpha_index}``."""
        return self.coeff * seq.value(self.alpha_index)

    def to_json(self, seq: "ExponentSequence") -> dict:
        value, clamped = logterm_to_float(self, seq)
        payload = {
            "coeff": format_rational(self.coeff),
            "index": self.alpha_index,
            "approx": value,
        }
        if clamped:
            payload["approx_clamped"] = True
        return payload


@dataclass(frozen=True)
class LogExponent:
    """An exact exponent ``coeff * alpha_index`` (not exponentiated)."""

    coeff: Rational
    alpha_index: int

    def value(self, seq: "ExponentSequence") -> Rational:
        return self.coeff * seq.value(self.alpha_index)


def logterm_cmp(x: LogTerm, y: LogTerm, seq: "ExponentSequence") -> int:
    """Exact order of the denoted reals.

    ``e^a < e^b`` iff ``a < b``, so comparing the exact exponents (cross
    multiplied inside Fraction) decides the order; ties, which genuinely
    occur (e.g. ``e^(-3/2*a_1) = e^(-1/2*a_3)`` for linear alpha), are
    detected exactly.
    """
    return rational_cmp(x.log_value(seq), y.log_value(seq))


def exp_to_float(exponent: Rational) -> tuple[float, bool]:
    """Best-effort ``e^exponent`` as a double; flag set when clamped."""
    if exponent >= _EXP_OVERFLOW:
        return math.inf, True
    if exponent <= _EXP_UNDERFLOW:
        return 0.0, True
    return math.exp(exponent), False


def fraction_to_float(x: Rational) -> tuple[float, bool]:
    """Double conversion with overflow clamped to +-inf; flag set when clamped."""
    try:
        return float(x), False
    except OverflowError:
        return math.copysign(math.inf, x.numerator), True


def logterm_to_float(x: LogTerm, seq: "ExponentSequence") -> tuple[float, bool]:
    """Display-only double for a LogTerm; never used in comparisons."""
    return exp_to_float(x.log_value(seq))
