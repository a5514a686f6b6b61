"""Big-integer backend: gmpy2 when importable, Python ints otherwise."""

from __future__ import annotations

import math
from fractions import Fraction

try:
    import gmpy2

    HAVE_GMPY2 = True
    big = gmpy2.mpz
    divexact = gmpy2.divexact
except ImportError:  # pragma: no cover - exercised only without gmpy2
    gmpy2 = None
    HAVE_GMPY2 = False
    big = int

    def divexact(x, d):
        return x // d


def log2(x) -> float:
    """log2 of a positive big integer, without overflowing a float.

    Only the leading 60 bits are read, so the cost does not grow with x;
    the relative error stays near 2**-53.
    """
    extra = x.bit_length() - 60
    if extra <= 0:
        return math.log2(int(x))
    return math.log2(int(x >> extra)) + extra


def fraction(num, den) -> Fraction:
    """Build a reduced Fraction from possibly huge integers."""
    if HAVE_GMPY2:
        g = gmpy2.gcd(num, den)
        if g != 1:
            num = divexact(num, g)
            den = divexact(den, g)
    return Fraction(int(num), int(den))
