from fractions import Fraction

import pytest

from nbk.bounds import mode_bounds, upper_bound
from nbk.core import Params, classic_nb_mode, pmf_table, validate_params
from nbk.errors import IdentityViolation, NotApplicable, TableTooLarge
from nbk.modes import delta_sequence, half_p_mode_formula, mode_search


def argmax_all(params, n_max):
    """Maximisers by plain max() over a stored exact table."""
    t = pmf_table(params, n_max)
    best = max(t.probs)
    return tuple(n for n, x in enumerate(t.probs, start=t.offset) if x == best), best


class TestModeSearch:
    @pytest.mark.parametrize(
        "args,modes",
        [
            ((2, 2, "1/2"), (6, 7, 8)),
            ((3, 2, "1/2"), (16,)),
            ((2, 3, "1/2"), (13,)),
            ((4, 1, "7/10"), (4,)),
            ((3, 4, "9/10"), (12,)),
        ],
    )
    def test_known_modes(self, args, modes):
        assert mode_search(validate_params(*args)).modes == modes

    def test_tie_probability(self):
        res = mode_search(validate_params(2, 2, "1/2"))
        assert res.max_prob == Fraction(5, 64)
        assert res.exact and res.exactness == "exact"
        assert res.search_ceiling == 8

    @pytest.mark.parametrize("k", range(1, 5))
    @pytest.mark.parametrize("r", range(1, 5))
    @pytest.mark.parametrize("p", ["1/3", "1/2", "3/5", "4/5"])
    def test_streaming_matches_stored_table(self, k, r, p):
        params = validate_params(k, r, p)
        ceiling = upper_bound(params) + k
        res = mode_search(params, ceiling=ceiling)
        modes, best = argmax_all(params, ceiling)
        assert res.modes == modes
        assert res.max_prob == best
        assert max(res.modes) <= upper_bound(params)

    def test_float_method_flags_tolerance(self):
        res = mode_search(validate_params(2, 2, "1/2"), method="float")
        assert res.modes == (6, 7, 8)
        assert not res.exact
        assert float(res.max_prob) == pytest.approx(5 / 64)

    def test_float_near_ties_contain_exact_mode(self):
        params = validate_params(4, 3, "1/5")
        exact = mode_search(params)
        approx = mode_search(params, method="float")
        assert set(exact.modes) <= set(approx.modes)

    def test_cap(self):
        with pytest.raises(TableTooLarge):
            mode_search(validate_params(5, 5, "1/10"), cap=1000)

    def test_bad_method(self):
        with pytest.raises(ValueError):
            mode_search(validate_params(2, 2, "1/2"), method="nope")


class TestHalfFormula:
    def test_examples(self):
        assert half_p_mode_formula(2, 2) == (6, 7, 8)
        assert half_p_mode_formula(4, 3) == (63,)
        assert half_p_mode_formula(5, 5) == (252,)

    def test_not_applicable(self):
        with pytest.raises(NotApplicable):
            half_p_mode_formula(1, 3)

    def test_last_step_decreases(self):
        for k in range(2, 6):
            for r in range(2, 6):
                if (k, r) == (2, 2):
                    continue
                params = Params(k, r, Fraction(1, 2))
                mbar = upper_bound(params)
                t = pmf_table(params, mbar)
                assert t[mbar] < t[mbar - 1]


class TestDeltaSequence:
    def test_tie_case(self):
        d = delta_sequence(validate_params(2, 2, "1/2"), 4)
        assert d[0] == Fraction(1, 16)
        assert d[1] == 0
        assert d[3] == 0 and d[4] == 0

    def test_increasing_start(self):
        d = delta_sequence(validate_params(3, 2, "1/3"), 3)
        assert all(x > 0 for x in d.deltas)

    @pytest.mark.parametrize("args", [(2, 3, "1/3"), (3, 2, "3/5"), (4, 3, "1/2"), (1, 4, "2/5"), (3, 1, "1/2")])
    def test_identities_over_default_range(self, args):
        params = validate_params(*args)
        d = delta_sequence(params)
        assert len(d) == upper_bound(params) - params.kr + params.k + 1
        t = pmf_table(params, params.kr + len(d) - 1)
        assert d[1] == (params.q * params.r - 1) * params.p ** params.kr
        assert all(d[v] == t[params.kr + v] - t[params.kr + v - 1] for v in range(1, len(d)))

    def test_violation_is_reported(self, monkeypatch):
        import nbk.modes as modes_mod

        real = modes_mod.pmf_table

        class Corrupt:
            def __init__(self, table):
                self.table = table

            def __getitem__(self, n):
                x = self.table[n]
                return x * 2 if n == self.table.offset + 3 else x

        monkeypatch.setattr(modes_mod, "pmf_table", lambda *a, **kw: Corrupt(real(*a, **kw)))
        with pytest.raises(IdentityViolation):
            delta_sequence(validate_params(2, 2, "1/2"), 6)


class TestKEqualsOne:
    @pytest.mark.parametrize("r", range(1, 11))
    def test_classic_formula(self, r):
        for p in ["1/10", "1/4", "1/3", "1/2", "2/3", "3/4", "9/10"]:
            assert mode_search(validate_params(1, r, p)).modes == classic_nb_mode(r, p)


def test_bounds_bracket_modes_on_small_grid():
    # the lower bound guarantees one mode at or above it; tied modes may sit lower
    for k in range(2, 5):
        for r in range(2, 5):
            for t in range(3, 10):
                params = Params(k, r, Fraction(t, 10))
                b = mode_bounds(params)
                modes = mode_search(params).modes
                assert b.effective_lower <= max(modes) <= b.upper
                if len(modes) == 1:
                    assert b.effective_lower <= modes[0]


def test_tied_mode_below_lower_bound():
    params = validate_params(2, 2, "1/2")
    assert mode_bounds(params).lower == 7
    assert min(mode_search(params).modes) == 6
