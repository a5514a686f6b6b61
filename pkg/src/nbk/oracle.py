"""Brute-force PMF from the closed-form multinomial sum.

P_n = p**n * sum C(n_1 + ... + n_k + r - 1; n_1, ..., n_k, r - 1) (q/p)**(n_1 + ... + n_k)

over all k-tuples of non-negative integers with n_1 + 2 n_2 + ... + k n_k = n - kr.
This shares no code with the recurrence engine and exists to certify it
on small instances.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .core import Params
from .errors import InfeasibleEnumeration

ENUMERATION_CAP = 10**7


@dataclass(frozen=True)
class CompositionCounts:
    counts: tuple[int, ...]

    @property
    def weighted_sum(self) -> int:
        return sum(j * c for j, c in enumerate(self.counts, start=1))

    @property
    def plain_sum(self) -> int:
        return sum(self.counts)


def enumerate_solutions(s: int, k: int) -> Iterator[CompositionCounts]:
    """Yield every (n_1, ..., n_k) >= 0 with sum j*n_j == s, exactly once.

    Recursive descent from part size k down to 1; larger n_k comes first,
    then larger n_{k-1}, and so on.  n_1 takes whatever budget is left.
    """
    if s < 0 or k < 1:
        raise ValueError("need s >= 0 and k >= 1")
    counts = [0] * k

    def descend(part: int, budget: int):
        if part == 1:
            counts[0] = budget
            yield CompositionCounts(tuple(counts))
            return
        for c in range(budget // part, -1, -1):
            counts[part - 1] = c
            yield from descend(part - 1, budget - c * part)
        counts[part - 1] = 0

    yield from descend(k, s)


def count_solutions(s: int, k: int) -> int:
    """Number of partitions of s into parts of size at most k."""
    ways = [1] + [0] * s
    for part in range(1, k + 1):
        for total in range(part, s + 1):
            ways[total] += ways[total - part]
    return ways[s]


@lru_cache(maxsize=None)
def _factorial(n: int) -> int:
    # iterative fill keeps recursion depth flat for large first calls
    result = 1
    for i in range(2, n + 1):
        result *= i
    return result


def multinomial_coeff(counts: CompositionCounts | tuple[int, ...], r: int) -> int:
    """(sum n_j + r - 1)! / (n_1! ... n_k! (r - 1)!)."""
    parts = counts.counts if isinstance(counts, CompositionCounts) else tuple(counts)
    if r < 1 or any(c < 0 for c in parts):
        raise ValueError("need r >= 1 and non-negative counts")
    den = _factorial(r - 1)
    for c in parts:
        den *= _factorial(c)
    num = _factorial(sum(parts) + r - 1)
    assert num % den == 0
    return num // den


def pmf_direct(params: Params, n: int, *, cap: int = ENUMERATION_CAP) -> Fraction:
    """Exact P_n by enumerating the multinomial sum."""
    k, r, kr = params.k, params.r, params.kr
    if n < kr:
        return Fraction(0)
    s = n - kr
    size = count_solutions(s, k)
    if size > cap:
        raise InfeasibleEnumeration(
            f"{size} tuples for n={n} exceed the oracle cap of {cap}"
        )
    # group coefficients by plain sum m; term is p^(n-m) q^m
    by_plain = defaultdict(int)
    for sol in enumerate_solutions(s, k):
        by_plain[sol.plain_sum] += multinomial_coeff(sol, r)
    a, b = params.p.numerator, params.p.denominator
    c = b - a
    num = sum(coef * a ** (n - m) * c**m for m, coef in by_plain.items())
    return Fraction(num, b**n)
