"""Exact rational helpers built on :class:`fractions.Fraction`."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Union

ExactRational = Fraction
RationalLike = Union[int, Fraction, str]


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings to a Fraction.

    Floats are rejected on purpose: nothing in this package is inexact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction("".join(value.split()))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(value: Fraction) -> str:
    """Serialize as ``"num/den"``, always with an explicit denominator."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def binomial(a: int, k: int) -> Fraction:
    """Generalized binomial coefficient C(a, k) = a(a-1)...(a-k+1)/k!.

    Valid for any integer ``a`` (including negative); zero for ``k < 0``.
    """
    if k < 0:
        return Fraction(0)
    num = 1
    den = 1
    for j in range(k):
        num *= a - j
        den *= j + 1
    return Fraction(num, den)


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with the convention B_1 = -1/2."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return Fraction(1)
    if n > 1 and n % 2 == 1:
        return Fraction(0)
    # sum_{k<=n} C(n+1, k) B_k = 0
    total = Fraction(0)
    for k in range(n):
        total += binomial(n + 1, k) * bernoulli(k)
    return -total / (n + 1)


def factorial_inverse(n: int) -> Fraction:
    out = 1
    for j in range(2, n + 1):
        out *= j
    return Fraction(1, out)
