"""Parameters, probability values and the recurrence PMF engine.

The exact engine works on scaled integers.  Writing p = a/b, every
probability has the form P_n = U_n / b**n with U_n a non-negative
integer, and the recurrence

    (n - kr) P_n = q * sum_{j=1..k} (n - kr + j(r-1)) p**(j-1) P_{n-j}

becomes

    (n - kr) U_n = (b - a) * sum_{j=1..k} (n - kr + j(r-1)) a**(j-1) U_{n-j},

where the division by n - kr is always exact.  Two running sums make each
step cost a constant number of big-integer operations regardless of k.
"""

from __future__ import annotations

import math
import numbers
import operator
import os
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence, Union

import numpy as np

from . import _bigint, _kernels
from .errors import InvalidK, InvalidP, InvalidR, RangeTooSmall, TableTooLarge

DEFAULT_TABLE_CAP = 10**6
LOG_TIE_TOL = 1e-9


def table_cap() -> int:
    """Largest table length allowed; ``NBK_TABLE_CAP`` overrides the default."""
    raw = os.environ.get("NBK_TABLE_CAP")
    if raw:
        try:
            cap = int(raw)
        except ValueError:
            raise ValueError(f"NBK_TABLE_CAP must be an integer, got {raw!r}") from None
        if cap < 1:
            raise ValueError("NBK_TABLE_CAP must be positive")
        return cap
    return DEFAULT_TABLE_CAP


def parse_probability(p) -> Fraction:
    """Parse a probability literal into an exact Fraction.

    Accepts ``"a/b"`` ratios, decimal strings (``"0.95"`` -> 19/20),
    ints, Fractions and other rationals.  Floats go through their shortest
    repr, so ``0.1`` means 1/10 rather than the nearest binary double.
    """
    if isinstance(p, bool):
        raise InvalidP(f"p must be a probability, got {p!r}")
    try:
        if isinstance(p, str):
            value = Fraction(p.strip())
        elif isinstance(p, float):
            if not math.isfinite(p):
                raise ValueError
            value = Fraction(repr(p))
        elif isinstance(p, numbers.Rational):
            value = Fraction(p.numerator, p.denominator)
        elif isinstance(p, numbers.Real):
            value = Fraction(repr(float(p)))
        else:
            raise TypeError
    except (ValueError, TypeError, ZeroDivisionError):
        raise InvalidP(f"cannot parse p={p!r} as a probability") from None
    if not 0 < value < 1:
        raise InvalidP(f"p must satisfy 0 < p < 1, got {value}")
    return value


@dataclass(frozen=True)
class Params:
    k: int
    r: int
    p: Fraction

    @property
    def q(self) -> Fraction:
        return 1 - self.p

    @property
    def kr(self) -> int:
        """Smallest point of the support."""
        return self.k * self.r

    def __str__(self) -> str:
        return f"(k={self.k}, r={self.r}, p={self.p})"


def _positive_int(value, name, exc):
    if isinstance(value, bool):
        raise exc(f"{name} must be a positive integer, got {value!r}")
    try:
        n = operator.index(value)
    except TypeError:
        if isinstance(value, str) and value.strip().lstrip("+").isdigit():
            n = int(value)
        else:
            raise exc(f"{name} must be a positive integer, got {value!r}") from None
    if n < 1:
        raise exc(f"{name} must be >= 1, got {n}")
    return n


def validate_params(k, r, p) -> Params:
    """Check (k, r, p) and return them as :class:`Params` with p exact."""
    return Params(
        _positive_int(k, "k", InvalidK),
        _positive_int(r, "r", InvalidR),
        parse_probability(p),
    )


@dataclass(frozen=True)
class LogProb:
    """A non-negative real stored as ``mantissa * 2**exponent``.

    This is the approximate, wide-range representation used by the float
    engine.  ``mantissa`` is 0 or lies in [0.5, 1); zero is always stored
    as ``LogProb(0.0, 0)``.  Ordering goes through :attr:`log`.
    """

    mantissa: float
    exponent: int

    @classmethod
    def from_fraction(cls, x: Fraction) -> "LogProb":
        if x < 0:
            raise ValueError("probabilities are non-negative")
        if x == 0:
            return cls(0.0, 0)
        num, den = x.numerator, x.denominator
        shift = num.bit_length() - den.bit_length()
        if shift >= 0:
            m = num / (den << shift)
        else:
            m = (num << -shift) / den
        fm, fe = math.frexp(m)
        return cls(fm, shift + fe)

    @classmethod
    def from_float(cls, x: float) -> "LogProb":
        if x < 0:
            raise ValueError("probabilities are non-negative")
        m, e = math.frexp(x)
        return cls(m, e if m else 0)

    @property
    def log(self) -> float:
        """Natural logarithm; ``-inf`` for zero."""
        if self.mantissa == 0:
            return -math.inf
        return math.log(self.mantissa) + self.exponent * math.log(2)

    def __float__(self) -> float:
        return math.ldexp(self.mantissa, self.exponent)

    def isclose(self, other: "LogProb", tol: float = LOG_TIE_TOL) -> bool:
        a, b = self.log, other.log
        if a == b:
            return True
        return abs(a - b) <= tol

    def __lt__(self, other):
        return self.log < _as_log(other)

    def __le__(self, other):
        return self.log <= _as_log(other)

    def __gt__(self, other):
        return self.log > _as_log(other)

    def __ge__(self, other):
        return self.log >= _as_log(other)


def _as_log(x) -> float:
    if isinstance(x, LogProb):
        return x.log
    return LogProb.from_fraction(Fraction(x)).log


ProbValue = Union[Fraction, LogProb]


# -- exact engine ------------------------------------------------------------


def iter_scaled(params: Params) -> Iterator[tuple]:
    """Yield ``(n, U_n)`` for n = kr, kr+1, ... with P_n = U_n / b**n.

    ``b`` is ``params.p.denominator``.  The stream is infinite.
    """
    k, r, kr = params.k, params.r, params.kr
    a = _bigint.big(params.p.numerator)
    c = _bigint.big(params.p.denominator) - a
    ak = a**k
    ak1 = (k + 1) * ak
    divexact = _bigint.divexact

    u = a**kr
    yield kr, u
    # window holds U_{n-k}, ..., U_{n-1} for the next n
    window = deque([_bigint.big(0)] * (k - 1) + [u], maxlen=k)
    # A = sum_j a^(j-1) U_{n-j},  B = sum_j j a^(j-1) U_{n-j}
    A = u
    B = u
    rm1 = r - 1
    n = kr
    while True:
        n += 1
        s = n - kr
        u = divexact(c * (s * A + rm1 * B), s)
        yield n, u
        old = window[0]
        window.append(u)
        if a == 1:
            A, B = u + A - old, u + A + B - ak1 * old
        else:
            A, B = u + a * A - ak * old, u + a * (A + B) - ak1 * old


def _check_range(params: Params, n_max: int, cap: int | None) -> int:
    if n_max < params.kr:
        raise RangeTooSmall(f"n_max={n_max} is below the support minimum kr={params.kr}")
    length = n_max - params.kr + 1
    cap = table_cap() if cap is None else cap
    if length > cap:
        raise TableTooLarge(f"table of {length} entries exceeds the cap of {cap}")
    return length


@dataclass(eq=False)
class PmfTable:
    """P_n for n = kr .. n_max.

    Exact tables keep the scaled integers U_n (P_n = U_n / b**n) and hand
    out Fractions; float tables keep mantissa/exponent arrays and hand out
    :class:`LogProb` values.
    """

    params: Params
    n_max: int
    scaled: Sequence | None = None
    mantissas: np.ndarray | None = None
    exponents: np.ndarray | None = None

    @property
    def offset(self) -> int:
        return self.params.kr

    @property
    def exact(self) -> bool:
        return self.scaled is not None

    def __len__(self) -> int:
        return self.n_max - self.offset + 1

    def __getitem__(self, n: int) -> ProbValue:
        """P_n at absolute index n; zero outside the support start."""
        if n > self.n_max:
            raise IndexError(f"n={n} beyond table end {self.n_max}")
        if n < self.offset:
            return Fraction(0) if self.exact else LogProb(0.0, 0)
        return self.probs[n - self.offset]

    def __iter__(self):
        return iter(self.probs)

    @cached_property
    def probs(self) -> list:
        if self.exact:
            b = self.params.p.denominator
            return [
                _bigint.fraction(u, _bigint.big(b) ** n)
                for n, u in enumerate(self.scaled, start=self.offset)
            ]
        return [LogProb(float(m), int(e)) for m, e in zip(self.mantissas, self.exponents)]

    def floats(self) -> np.ndarray:
        """Values as float64 (entries below ~1e-308 underflow to 0)."""
        if self.exact:
            return np.array([float(x) for x in self.probs])
        return np.ldexp(self.mantissas, self.exponents)

    def log_values(self) -> np.ndarray:
        """Natural logs of the entries, without underflow."""
        if self.exact:
            return np.array([LogProb.from_fraction(x).log for x in self.probs])
        with np.errstate(divide="ignore"):
            return np.log(self.mantissas) + self.exponents * math.log(2)


def pmf_table(
    params: Params, n_max: int, *, method: str = "exact", cap: int | None = None
) -> PmfTable:
    """Tabulate P_n for kr <= n <= n_max by the recurrence.

    ``method="exact"`` (default) gives rational values; ``method="float"``
    runs the scaled-float kernel instead.
    """
    length = _check_range(params, n_max, cap)
    if method == "exact":
        stream = iter_scaled(params)
        scaled = [next(stream)[1] for _ in range(length)]
        return PmfTable(params, n_max, scaled=scaled)
    if method == "float":
        mant, expo = float_recurrence(params, length)
        return PmfTable(params, n_max, mantissas=mant, exponents=expo)
    raise ValueError(f"unknown method {method!r}; expected 'exact' or 'float'")


def float_recurrence(params: Params, length: int):
    k, r, p = params.k, params.r, params.p
    pows = np.array([float(p ** (j - 1)) for j in range(1, k + 1)])
    start = LogProb.from_fraction(p**params.kr)
    return _kernels.scaled_recurrence(
        k, r, pows, float(params.q), start.mantissa, start.exponent, length
    )


def tail_mass(table: PmfTable) -> ProbValue:
    """Probability mass beyond the end of the table, 1 - sum(table)."""
    if table.exact:
        b = _bigint.big(table.params.p.denominator)
        top = table.n_max
        total = _bigint.big(0)
        # sum U_n / b^n  ==  (sum U_n b^(top-n)) / b^top, Horner style
        for u in table.scaled:
            total = total * b + u
        den = b**top
        return _bigint.fraction(den - total, den)
    rest = 1.0 - math.fsum(table.floats())
    return LogProb.from_float(max(rest, 0.0))


def classic_nb_mode(r, p) -> tuple[int, ...]:
    """Mode set of the ordinary negative binomial (k = 1) on {r, r+1, ...}.

    Returns the pair ((r-1)/p, (r-1)/p + 1) when (r-1)/p is an integer and
    floor((r-1)/p) + 1 otherwise.  For r = 1 the formula would also list
    0, which lies outside the support, so the result is (1,).
    """
    params = validate_params(1, r, p)
    x = (params.r - 1) / params.p
    if params.r == 1:
        return (1,)
    if x.denominator == 1:
        return (int(x), int(x) + 1)
    return (math.floor(x) + 1,)
