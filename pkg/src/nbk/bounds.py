"""Closed-form bounds on the mode, all evaluated in exact arithmetic."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import Params
from .errors import NotApplicable


@dataclass(frozen=True)
class QuadraticF:
    """f(v) = a v**2 + b v + c, whose largest root drives the lower bound."""

    a: Fraction
    b: Fraction
    c: Fraction

    def __call__(self, v) -> Fraction:
        v = Fraction(v)
        return (self.a * v + self.b) * v + self.c


@dataclass(frozen=True)
class BoundsResult:
    kr: int
    upper: int
    lower: int | None
    lower_reason: str | None = None
    rho_floor: int | None = None
    quadratic: QuadraticF | None = None
    special_branch: bool = False

    @property
    def lower_applicable(self) -> bool:
        return self.lower is not None

    @property
    def effective_lower(self) -> int:
        """The lower bound where one exists, kr otherwise."""
        return self.lower if self.lower is not None else self.kr

    @property
    def branch(self) -> str:
        if self.lower is None:
            return "none"
        return "qr=1 closed form" if self.special_branch else "quadratic root"


def upper_bound(params: Params) -> int:
    """kr + floor((r-1)[1 - p^k(1+kq)] / (q p^k)); valid for every k, r, p."""
    k, r, p, q = params.k, params.r, params.p, params.q
    pk = p**k
    return params.kr + math.floor((r - 1) * (1 - pk * (1 + k * q)) / (q * pk))


def f_coefficients(params: Params) -> QuadraticF:
    k, r, p, q = params.k, params.r, params.p, params.q
    if k < 2 or r < 2:
        raise NotApplicable(f"the quadratic needs k, r >= 2; got {params}")
    pk = p**k
    a = -q * pk
    b = pk * (q - (k * q + q + 1) * (r - 1)) + (r - 1)
    c = (r - 1) * ((r - 1) * (1 - pk * (1 + k * q)) + pk * (k + q) - (1 - pk) / q)
    return QuadraticF(a, b, c)


def f_at_one_closed_form(params: Params) -> Fraction:
    """(qr - 1)(r - 1)[1 - p^k(1+kq)] / q, the value f(1) must take."""
    k, r, p, q = params.k, params.r, params.p, params.q
    return (q * r - 1) * (r - 1) * (1 - p**k * (1 + k * q)) / q


def special_rho(params: Params) -> Fraction:
    """Exact rho when qr == 1: r(r-1)(r/(r-1))^k - (r-1)(k+r+1)."""
    k, r = params.k, params.r
    return r * (r - 1) * Fraction(r, r - 1) ** k - (r - 1) * (k + r + 1)


def floor_largest_root(f: QuadraticF, start: int) -> int | None:
    """Largest integer t >= start with f(t) >= 0, or None if f(start) < 0.

    Assumes f is concave with f >= 0 on [1, v2] and f < 0 beyond v2, so
    f(t) >= 0 is monotone in t over t >= 1: gallop, then bisect, using
    exact signs only.
    """
    if f(start) < 0:
        return None
    lo, step = start, 1
    hi = lo + step
    while f(hi) >= 0:
        lo = hi
        step *= 2
        hi = lo + step
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if f(mid) >= 0:
            lo = mid
        else:
            hi = mid
    return lo


def mode_bounds(params: Params) -> BoundsResult:
    """Upper bound plus the lower bound (when stated) and how it was found."""
    k, r, q = params.k, params.r, params.q
    upper = upper_bound(params)
    if k < 2 or r < 2:
        return BoundsResult(params.kr, upper, None, "needs k >= 2 and r >= 2")
    if q * r < 1:
        return BoundsResult(
            params.kr, upper, None, f"needs p <= (r-1)/r = {Fraction(r - 1, r)}"
        )
    if q * r == 1:
        rho = special_rho(params)
        rho_floor = max(math.floor(rho), k)
        return BoundsResult(
            params.kr, upper, params.kr + rho_floor, None, rho_floor, None, True
        )
    f = f_coefficients(params)
    t = floor_largest_root(f, k)
    # f(k) < 0 means v2 < k; f(k) == 0 with f(k+1) < 0 means v2 == k
    rho_floor = k if t is None else t
    return BoundsResult(params.kr, upper, params.kr + rho_floor, None, rho_floor, f, False)


def lower_bound(params: Params) -> int | None:
    """kr + floor(rho), or None where no lower bound is stated."""
    return mode_bounds(params).lower


def poisson_limit_bounds(k: int, lam) -> tuple[int | None, int]:
    """Limits of (lower - kr, upper - kr) as r -> oo with rq -> lam.

    The lower component exists only for lam > 1.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    lam = Fraction(lam) if not isinstance(lam, str) else Fraction(lam.strip())
    if lam <= 0:
        raise ValueError("lambda must be positive")
    upper = math.floor(Fraction(k * (k + 1), 2) * lam)
    lower = math.floor(Fraction(k * (k + 1), 2) * (lam - 1)) + 1 if lam > 1 else None
    return lower, upper
