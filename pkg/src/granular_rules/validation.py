"""Input validation helpers shared by the estimators, miner and CLI."""
from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from numbers import Rational

from .exceptions import ParameterError


def as_fraction(value, name="value"):
    """Exact rational for a threshold.

    Floats go through their shortest repr so ``0.95`` becomes ``19/20`` rather
    than the binary approximation.
    """
    if isinstance(value, bool):
        raise ParameterError(f"{name} must be a number, got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ParameterError(f"{name} must be finite, got {value!r}")
        return Fraction(repr(value))
    if isinstance(value, (str, Decimal)):
        try:
            return Fraction(str(value).strip())
        except (ValueError, ZeroDivisionError):
            raise ParameterError(f"{name}: cannot parse {value!r} as a number") from None
    raise ParameterError(f"{name} must be a number, got {type(value).__name__}")


def check_threshold(value, name="threshold"):
    """Validate a threshold in (0, 1] and return it as a Fraction."""
    frac = as_fraction(value, name)
    if not 0 < frac <= 1:
        raise ParameterError(f"{name} must lie in (0, 1], got {value!r}")
    return frac


def check_max_length(value, name="max_length"):
    if value is None:
        return None
    if isinstance(value, bool) or int(value) != value or value < 0:
        raise ParameterError(f"{name} must be a non-negative integer or None, got {value!r}")
    return int(value)


def ceil_times(threshold: Fraction, n: int) -> int:
    """Smallest integer c with c >= threshold * n."""
    return -((-threshold.numerator * n) // threshold.denominator)
