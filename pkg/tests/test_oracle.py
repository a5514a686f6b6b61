import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nbk.core import Params, pmf_table, validate_params
from nbk.errors import InfeasibleEnumeration
from nbk.oracle import (
    CompositionCounts,
    count_solutions,
    enumerate_solutions,
    multinomial_coeff,
    pmf_direct,
)


def product_enumeration(s, k):
    """Every k-tuple in the box [0, s//j] filtered by the weighted sum."""
    ranges = [range(s // j + 1) for j in range(1, k + 1)]
    return {t for t in itertools.product(*ranges) if sum(j * c for j, c in enumerate(t, 1)) == s}


def multinomial_by_binomials(counts, r):
    # build the multinomial as a product of binomials, one group at a time
    total, result = r - 1, 1
    for c in counts:
        total += c
        result *= math.comb(total, c)
    return result


class TestEnumerate:
    def test_empty_sum(self):
        assert [c.counts for c in enumerate_solutions(0, 3)] == [(0, 0, 0)]

    def test_small_case(self):
        got = [c.counts for c in enumerate_solutions(4, 2)]
        assert set(got) == {(4, 0), (2, 1), (0, 2)}
        # larger n_k first
        assert got == [(0, 2), (2, 1), (4, 0)]

    def test_partitions_of_six(self):
        assert len(list(enumerate_solutions(6, 6))) == 11

    @pytest.mark.parametrize("s", range(0, 16))
    @pytest.mark.parametrize("k", range(1, 5))
    def test_against_product_enumeration(self, s, k):
        got = [c.counts for c in enumerate_solutions(s, k)]
        assert len(got) == len(set(got))
        assert set(got) == product_enumeration(s, k)
        assert len(got) == count_solutions(s, k)
        for c in enumerate_solutions(s, k):
            assert c.weighted_sum == s

    def test_bad_input(self):
        with pytest.raises(ValueError):
            list(enumerate_solutions(-1, 2))


class TestMultinomial:
    def test_values(self):
        assert multinomial_coeff((0, 0, 0), 5) == 1
        assert multinomial_coeff((2, 1), 1) == 3
        assert multinomial_coeff(CompositionCounts((1, 1)), 2) == 6

    @given(st.lists(st.integers(0, 12), min_size=1, max_size=5), st.integers(1, 8))
    def test_matches_binomial_product(self, counts, r):
        assert multinomial_coeff(tuple(counts), r) == multinomial_by_binomials(counts, r)


class TestPmfDirect:
    def test_examples(self):
        params = validate_params(2, 2, "1/2")
        assert pmf_direct(params, 4) == Fraction(1, 16)
        assert pmf_direct(params, 3) == 0
        assert pmf_direct(params, 6) == Fraction(5, 64)

    def test_cap(self):
        with pytest.raises(InfeasibleEnumeration):
            pmf_direct(validate_params(4, 2, "1/2"), 8 + 60, cap=100)

    @settings(max_examples=40, deadline=None)
    @given(
        st.integers(1, 4),
        st.integers(1, 4),
        st.sampled_from([Fraction(1, 2), Fraction(3, 5), Fraction(7, 10), Fraction(1, 3), Fraction(2, 7)]),
    )
    def test_equals_recurrence(self, k, r, p):
        params = Params(k, r, p)
        table = pmf_table(params, params.kr + 25)
        for n in range(params.kr, params.kr + 26):
            assert pmf_direct(params, n) == table[n]

    def test_partial_sums_monotone_and_bounded(self):
        params = validate_params(3, 2, "3/5")
        total = Fraction(0)
        for n in range(0, 40):
            term = pmf_direct(params, n)
            assert term >= 0
            total += term
            assert total <= 1
