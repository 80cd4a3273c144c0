"""Integer parameters derived from real-valued expressions.

Every place where a proof writes a fractional power (sqrt(k), (n/k)^(1/3),
d^(1/4)) the toolkit takes the floor, computed exactly on integers so that
perfect powers never fall one short through rounding.
"""

from __future__ import annotations

import math
from fractions import Fraction


def iroot(x, m: int) -> int:
    """floor(x ** (1/m)) for a non-negative int or Fraction x."""
    if x < 0:
        raise ValueError("root of a negative number")
    # floor(x^(1/m)) = floor(floor(x)^(1/m)), so work with the integer part
    x = math.floor(Fraction(x))
    guess = 1 << -(-x.bit_length() // m) if x else 0
    while guess > 0 and guess**m > x:
        guess = ((m - 1) * guess + x // guess ** (m - 1)) // m
    while guess > 0 and guess**m > x:
        guess -= 1
    while (guess + 1) ** m <= x:
        guess += 1
    return guess


def isqrt(k: int) -> int:
    return math.isqrt(k)


def star_width(n: int, k: int) -> int:
    """d = floor((n/k)^(1/3)), the layer width of the dense-regime star."""
    return iroot(Fraction(n, k), 3)


def disjoint_target(n: int, k: int) -> int:
    """t = min(k, floor(d^(1/4))) for d = star_width(n, k)."""
    return min(k, iroot(star_width(n, k), 4))


def ceil_pow(k: int, num: int, den: int) -> int:
    """ceil(k^(num/den)) computed exactly."""
    x = Fraction(k) ** num
    root = iroot(x, den)
    return root if root**den == x else root + 1
