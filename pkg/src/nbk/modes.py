"""Mode sets: certified exhaustive search, the p = 1/2 closed form, and
the adjacent-difference diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _bigint
from .bounds import f_coefficients, upper_bound
from .core import (
    LOG_TIE_TOL,
    LogProb,
    Params,
    ProbValue,
    float_recurrence,
    iter_scaled,
    pmf_table,
    table_cap,
)
from .errors import IdentityViolation, NotApplicable, TableTooLarge

# log2-domain gap above which float screening decides a comparison outright
_SCREEN_GAP = 1e-6


@dataclass(frozen=True)
class ModeResult:
    modes: tuple[int, ...]
    max_prob: ProbValue
    search_ceiling: int
    exact: bool

    @property
    def exactness(self) -> str:
        return "exact" if self.exact else "tolerance"


def _search_exact(params: Params, ceiling: int) -> ModeResult:
    b = params.p.denominator
    lg_b = math.log2(b)
    best_n = None
    best_u = None
    best_lg = -math.inf
    modes: list[int] = []
    for n, u in iter_scaled(params):
        if n > ceiling:
            break
        if u == 0:
            continue
        lg = _bigint.log2(u) - n * lg_b
        if best_n is None:
            cmp = 1
        elif lg - best_lg > _SCREEN_GAP:
            cmp = 1
        elif best_lg - lg > _SCREEN_GAP:
            cmp = -1
        else:
            # P_n vs P_best  <=>  U_n vs U_best * b^(n - best_n)
            rhs = best_u * _bigint.big(b) ** (n - best_n)
            cmp = (u > rhs) - (u < rhs)
        if cmp > 0:
            best_n, best_u, best_lg = n, u, lg
            modes = [n]
        elif cmp == 0:
            modes.append(n)
    max_prob = _bigint.fraction(best_u, _bigint.big(b) ** best_n)
    return ModeResult(tuple(modes), max_prob, ceiling, True)


def _search_float(params: Params, ceiling: int, tol: float) -> ModeResult:
    mant, expo = float_recurrence(params, ceiling - params.kr + 1)
    with np.errstate(divide="ignore"):
        logs = np.log(mant) + expo * math.log(2)
    top = int(np.argmax(logs))
    near = np.flatnonzero(logs >= logs[top] - tol)
    modes = tuple(int(i) + params.kr for i in near)
    return ModeResult(modes, LogProb(float(mant[top]), int(expo[top])), ceiling, False)


def mode_search(
    params: Params,
    *,
    ceiling: int | None = None,
    method: str = "exact",
    cap: int | None = None,
    tol: float = LOG_TIE_TOL,
) -> ModeResult:
    """All maximisers of P_n over kr <= n <= ceiling (default: the upper bound).

    Since the mode never exceeds the upper bound, the default ceiling makes
    the search exhaustive.  The exact method reports true ties; the float
    method reports every n whose log-probability lies within `tol` of the
    maximum and marks the result as tolerance-based.
    """
    ceiling = upper_bound(params) if ceiling is None else ceiling
    if ceiling < params.kr:
        raise ValueError(f"ceiling {ceiling} is below kr={params.kr}")
    length = ceiling - params.kr + 1
    cap = table_cap() if cap is None else cap
    if length > cap:
        raise TableTooLarge(f"search over {length} entries exceeds the cap of {cap}")
    if method == "exact":
        return _search_exact(params, ceiling)
    if method == "float":
        return _search_float(params, ceiling, tol)
    raise ValueError(f"unknown method {method!r}; expected 'exact' or 'float'")


def half_p_mode_formula(k: int, r: int) -> tuple[int, ...]:
    """Closed-form mode set at p = 1/2 for k, r >= 2.

    kr + (r-1)(2^(k+1) - k - 2) - 1, except at k = r = 2 where the three
    points 6, 7, 8 tie.
    """
    if k < 2 or r < 2:
        raise NotApplicable(f"closed form needs k, r >= 2; got k={k}, r={r}")
    m = k * r + (r - 1) * (2 ** (k + 1) - k - 2) - 1
    if (k, r) == (2, 2):
        return (m - 1, m, m + 1)
    return (m,)


@dataclass(frozen=True)
class DeltaSequence:
    params: Params
    deltas: tuple[Fraction, ...]

    def __getitem__(self, v: int) -> Fraction:
        return self.deltas[v]

    def __len__(self) -> int:
        return len(self.deltas)


def delta_sequence(params: Params, v_max: int | None = None) -> DeltaSequence:
    """Delta_v = P_{kr+v} - P_{kr+v-1} for v = 0 .. v_max, with identity checks.

    Every v >= 2 is checked against the first-order difference identity
    and, when k, r >= 2, against the second-order identity involving the
    quadratic f.  A failure raises :class:`IdentityViolation`.
    """
    k, r, p, q, kr = params.k, params.r, params.p, params.q, params.kr
    if v_max is None:
        v_max = upper_bound(params) - kr + k
    if v_max < 0:
        raise ValueError("v_max must be >= 0")
    table = pmf_table(params, kr + v_max)

    def P(n):
        return table[n] if n >= kr else Fraction(0)

    deltas = [P(kr + v) - P(kr + v - 1) for v in range(v_max + 1)]

    def D(v):
        return deltas[v] if v >= 0 else Fraction(0)

    f = f_coefficients(params) if k >= 2 and r >= 2 else None
    for v in range(2, v_max + 1):
        lhs = v * D(v)
        rhs = (-p * v + q * (r - 1)) * P(kr + v - 1) + q * sum(
            (v + j * (r - 1)) * p ** (j - 1) * P(kr + v - j) for j in range(2, k + 1)
        )
        if lhs != rhs:
            raise IdentityViolation(f"first-order identity fails at v={v} for {params}")
        if f is None:
            continue
        inner = Fraction(0)
        tail = Fraction(0)
        for j in range(1, k):
            inner += (v - 1 + j * (q * r - 1)) * p ** (j - 1)
            tail += inner * D(v - 1 - j)
        rhs2 = f(v) * P(kr + v - 1 - k) + q * (r - 1) * tail
        if v * (v - 1) * D(v) != rhs2:
            raise IdentityViolation(f"second-order identity fails at v={v} for {params}")
    return DeltaSequence(params, tuple(deltas))
