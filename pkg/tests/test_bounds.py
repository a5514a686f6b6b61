import math
from fractions import Fraction

import pytest

from nbk.bounds import (
    f_at_one_closed_form,
    f_coefficients,
    floor_largest_root,
    lower_bound,
    mode_bounds,
    poisson_limit_bounds,
    special_rho,
    upper_bound,
)
from nbk.core import Params, validate_params
from nbk.errors import NotApplicable
from nbk.modes import mode_search


def tenths_up_to(limit):
    return [Fraction(t, 10) for t in range(1, 10) if Fraction(t, 10) <= limit]


def largest_root_by_scan(f, start):
    """Walk t = start, start+1, ... while f(t) >= 0."""
    if f(start) < 0:
        return None
    t = start
    while f(t + 1) >= 0:
        t += 1
    return t


class TestUpperBound:
    def test_tie_case(self):
        assert upper_bound(validate_params(2, 2, "1/2")) == 8

    def test_geometric_case(self):
        assert upper_bound(validate_params(5, 1, "0.3")) == 5

    def test_k_equal_one(self):
        params = validate_params(1, 3, "2/5")
        assert upper_bound(params) == 1 + math.floor(Fraction(2) / Fraction(2, 5)) == 6


class TestQuadratic:
    def test_tie_case_signs(self):
        f = f_coefficients(validate_params(2, 2, "1/2"))
        assert f(3) >= 0
        assert f(4) < 0

    def test_root_at_integer(self):
        params = validate_params(3, 2, "1/2")
        f = f_coefficients(params)
        assert f(upper_bound(params) - params.kr - 1) == 0

    @pytest.mark.parametrize("k", range(2, 7))
    @pytest.mark.parametrize("r", range(2, 7))
    def test_value_at_one(self, k, r):
        for p in tenths_up_to(Fraction(r - 1, r)):
            params = Params(k, r, p)
            f = f_coefficients(params)
            assert f.a < 0
            assert f(1) == f_at_one_closed_form(params)

    def test_not_applicable(self):
        with pytest.raises(NotApplicable):
            f_coefficients(validate_params(1, 3, "1/2"))
        with pytest.raises(NotApplicable):
            f_coefficients(validate_params(3, 1, "1/2"))


class TestLowerBound:
    def test_tie_case_special_branch(self):
        b = mode_bounds(validate_params(2, 2, "1/2"))
        assert b.special_branch
        assert special_rho(validate_params(2, 2, "1/2")) == 3
        assert b.lower == 7
        assert b.upper == 8

    def test_not_applicable_above_threshold(self):
        assert lower_bound(validate_params(2, 2, "3/5")) is None
        b = mode_bounds(validate_params(2, 2, "3/5"))
        assert b.lower_reason and b.effective_lower == 4

    def test_half_three_three(self):
        params = validate_params(3, 3, "1/2")
        b = mode_bounds(params)
        assert b.rho_floor == upper_bound(params) - params.kr - 1 == 21
        assert b.lower == 30

    @pytest.mark.parametrize("k", range(2, 6))
    @pytest.mark.parametrize("r", range(2, 6))
    def test_bisection_matches_linear_scan(self, k, r):
        for p in tenths_up_to(Fraction(r - 1, r)):
            params = Params(k, r, p)
            if params.q * r == 1:
                continue
            f = f_coefficients(params)
            t = floor_largest_root(f, k)
            assert t == largest_root_by_scan(f, k)
            if t is not None:
                assert f(t) >= 0 > f(t + 1)
            b = mode_bounds(params)
            assert params.kr <= b.lower <= b.upper

    @pytest.mark.parametrize("k", range(2, 7))
    @pytest.mark.parametrize("r", range(2, 7))
    def test_gap_of_one_at_half(self, k, r):
        if (k, r) == (2, 2):
            pytest.skip("triple tie case has gap 1 only through the special branch")
        b = mode_bounds(Params(k, r, Fraction(1, 2)))
        assert b.upper - b.lower == 1

    @pytest.mark.parametrize("k,r", [(2, 3), (2, 5), (3, 7), (4, 9)])
    def test_special_branch_never_below_k(self, k, r):
        # here the closed-form rho falls below k; the bound still starts at kr + k
        params = Params(k, r, Fraction(r - 1, r))
        assert math.floor(special_rho(params)) < k
        b = mode_bounds(params)
        assert b.lower == params.kr + k
        assert b.lower <= min(mode_search(params).modes)


class TestPoissonLimit:
    def test_values(self):
        assert poisson_limit_bounds(2, 2) == (4, 6)
        assert poisson_limit_bounds(3, 1) == (None, 6)
        assert poisson_limit_bounds(2, "3/2") == (2, 4)

    @pytest.mark.parametrize("k", [2, 3])
    def test_finite_r_is_close(self, k):
        r = 10**4
        params = Params(k, r, 1 - Fraction(2, r))
        low, up = poisson_limit_bounds(k, 2)
        assert abs(upper_bound(params) - params.kr - up) <= 1
        assert abs(lower_bound(params) - params.kr - low) <= 1
