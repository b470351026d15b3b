from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from conftest import random_game
from routeclubs import (
    EquilibriumTag,
    IncompleteMatrixError,
    PayoffMatrix,
    PreconditionError,
    action_from_string,
    action_to_string,
    classify_all,
    find_clubs,
    improving_coalitions,
    is_nash,
    is_strong,
)
from routeclubs.game import deviate_bits


def make_matrix(payoffs_by_string, n_players=None, av_ids=None):
    entries = {action_from_string(s): tuple(float(v) for v in row)
               for s, row in payoffs_by_string.items()}
    n = n_players or len(next(iter(payoffs_by_string.values())))
    return PayoffMatrix(n_players=n, av_ids=av_ids or tuple(range(n)), entries=entries)


class TestActionEncoding:
    def test_player_zero_is_leftmost(self):
        assert action_to_string(action_from_string("0100011000"), 10) == "0100011000"
        assert action_from_string("1000000000") == 1

    def test_round_trip(self):
        for a in range(32):
            assert action_from_string(action_to_string(a, 5)) == a

    def test_rejects_malformed(self):
        with pytest.raises(ValueError, match="malformed"):
            action_from_string("01x0")
        with pytest.raises(ValueError, match="out of range"):
            action_to_string(32, 5)


class TestDeviate:
    def test_flips_exactly_the_members(self):
        x = action_from_string("0000000000")
        assert deviate_bits(x, {1, 5, 6}, 10) == action_from_string("0100011000")

    def test_involution(self):
        y = deviate_bits(action_from_string("0100011000"), {1, 5, 6}, 10)
        assert y == 0

    def test_single_flip_from_all_ones(self):
        x = action_from_string("1111111111")
        assert deviate_bits(x, {0}, 10) == action_from_string("0111111111")

    def test_out_of_range_member(self):
        with pytest.raises(ValueError, match="out of range"):
            deviate_bits(0, {10}, 10)

    def test_matrix_deviate_maps_player_ids(self, fixture_partial):
        g = fixture_partial
        assert g.deviate(0, {1, 5, 6}) == g.parse_action("01110")
        with pytest.raises(ValueError, match="not a strategic player"):
            g.deviate(0, {3})

    @given(st.integers(0, 1023), st.sets(st.integers(0, 9)))
    def test_involution_property(self, action, members):
        assert deviate_bits(deviate_bits(action, members, 10), members, 10) == action


class TestImprovingCoalitions:
    def test_constant_payoffs_have_none(self):
        g = make_matrix({"00": [-10, -10], "10": [-10, -10],
                         "01": [-10, -10], "11": [-10, -10]})
        assert improving_coalitions(g, 0) == frozenset()

    def test_fixture_club_is_the_only_improving_group(self, fixture_complete):
        improving = improving_coalitions(fixture_complete, 0)
        groups = {c for c in improving if len(c) >= 2}
        assert groups == {frozenset({1, 5, 6})}

    def test_matches_oracle_on_random_games(self):
        rng = random.Random(42)
        for _ in range(25):
            g = random_game(rng, n_av=4)
            for x in range(16):
                assert improving_coalitions(g, x) == oracle.improving(g, x)

    def test_missing_target_is_named(self, fixture_partial):
        with pytest.raises(IncompleteMatrixError, match="10000"):
            improving_coalitions(fixture_partial, 0)

    def test_enumeration_cap(self):
        g = make_matrix({"00": [-1, -1]}, n_players=2)
        with pytest.raises(PreconditionError, match="cap"):
            improving_coalitions(g, 0, av_limit=1)


class TestIsNash:
    def test_fixture_strong_row_is_nash(self, fixture_partial):
        g = fixture_partial
        assert is_nash(g, g.indicator({0, 1, 5, 6}))

    def test_fixture_overfull_club_is_not(self, fixture_partial):
        g = fixture_partial
        assert not is_nash(g, g.indicator({0, 1, 5, 6, 7}))

    def test_constant_matrix_everything_nash(self):
        g = make_matrix({"00": [-5, -5], "10": [-5, -5],
                         "01": [-5, -5], "11": [-5, -5]})
        assert all(is_nash(g, x) for x in range(4))


class TestIsStrong:
    def test_adaptive_x0_is_not_strong(self, adaptive_matrix):
        assert not is_strong(adaptive_matrix, 0)

    def test_static_x0_is_strong(self, static_matrix):
        assert is_strong(static_matrix, 0)

    def test_constant_matrix_is_strong_everywhere(self):
        g = make_matrix({"00": [-5, -5], "10": [-5, -5],
                         "01": [-5, -5], "11": [-5, -5]})
        assert all(is_strong(g, x) for x in range(4))


class TestFindClubs:
    def test_fixture_club(self, fixture_complete):
        assert find_clubs(fixture_complete, 0) == {frozenset({1, 5, 6})}

    def test_fixture_member_deltas(self, fixture_partial):
        g = fixture_partial
        x0, club = 0, g.indicator({1, 5, 6})
        assert (g.payoff(1, x0), g.payoff(1, club)) == (-58, -52)
        assert (g.payoff(5, x0), g.payoff(5, club)) == (-59, -52)
        assert (g.payoff(6, x0), g.payoff(6, club)) == (-59, -57)

    def test_static_matrix_has_no_clubs(self, static_matrix):
        assert find_clubs(static_matrix, 0) == frozenset()

    def test_requires_nash_base(self):
        g = make_matrix({"00": [-9, -9], "10": [-1, -9],
                         "01": [-9, -1], "11": [-5, -5]})
        with pytest.raises(PreconditionError, match="not a Nash equilibrium"):
            find_clubs(g, 0)

    def test_clubs_are_subset_of_improving(self, adaptive_matrix):
        clubs = find_clubs(adaptive_matrix, 0)
        improving = improving_coalitions(adaptive_matrix, 0)
        assert clubs <= improving
        assert all(len(c) >= 2 for c in clubs)

    def test_matches_oracle(self):
        rng = random.Random(7)
        checked = 0
        while checked < 10:
            g = random_game(rng, n_av=3)
            if not oracle.nash(g, 0):
                continue
            checked += 1
            assert find_clubs(g, 0) == oracle.clubs(g, 0)


class TestClassifyAll:
    def test_single_player_dominance(self):
        g = make_matrix({"0": [-5], "1": [-9]})
        result = classify_all(g)
        assert result[0].tag is EquilibriumTag.STRONG_NASH
        assert result[1].tag is EquilibriumTag.NOT_NASH

    def test_matches_oracle_on_random_games(self):
        rng = random.Random(99)
        for _ in range(10):
            g = random_game(rng, n_av=3)
            result = classify_all(g)
            for x in range(8):
                assert result[x].improving_coalitions == oracle.improving(g, x)
                expected = (
                    EquilibriumTag.STRONG_NASH if oracle.strong(g, x)
                    else EquilibriumTag.NASH if oracle.nash(g, x)
                    else EquilibriumTag.NOT_NASH
                )
                assert result[x].tag is expected

    def test_club_flag_matches_definition(self):
        rng = random.Random(5)
        g = random_game(rng, n_av=3)
        result = classify_all(g)
        for x in range(8):
            assert result[x].club_found == bool(oracle.clubs(g, x))

    def test_not_nash_iff_singleton_improves(self, adaptive_matrix):
        result = classify_all(adaptive_matrix)
        for x, item in result.items():
            has_singleton = any(len(c) == 1 for c in item.improving_coalitions)
            assert (item.tag is EquilibriumTag.NOT_NASH) == has_singleton


class TestInvariants:
    @given(st.integers(0, 2**31 - 1))
    @settings(max_examples=40, deadline=None)
    def test_strong_implies_nash(self, seed):
        g = random_game(random.Random(seed))
        for x in range(1 << g.n_av):
            if is_strong(g, x):
                assert is_nash(g, x)

    @given(st.integers(0, 2**31 - 1), st.floats(0.25, 4.0),
           st.integers(-50, 0))
    @settings(max_examples=40, deadline=None)
    def test_affine_rescaling_preserves_classification(self, seed, scale, shift):
        g = random_game(random.Random(seed))
        rescaled = PayoffMatrix(
            n_players=g.n_players,
            av_ids=g.av_ids,
            entries={a: tuple(scale * v + shift for v in row)
                     for a, row in g.entries.items()},
        )
        assert classify_all(g) == classify_all(rescaled)

    def test_payoffs_must_be_nonpositive_and_finite(self):
        with pytest.raises(ValueError, match="finite"):
            make_matrix({"0": [1.0]})
        with pytest.raises(ValueError, match="finite"):
            make_matrix({"0": [float("-inf")]})
