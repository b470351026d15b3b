from __future__ import annotations

import random

import pytest

from conftest import random_game
from routeclubs import (
    MatrixFormatError,
    PayoffMatrix,
    complete_with_fill,
    load_matrix,
    save_matrix,
)
from routeclubs.fixtures import TABLE1_ROW_MEANS


class TestRoundTrip:
    def test_generated_matrix_round_trips_exactly(self, adaptive_matrix, tmp_path):
        path = tmp_path / "full.matrix"
        save_matrix(adaptive_matrix, path)
        assert load_matrix(path) == adaptive_matrix

    def test_fixture_round_trips(self, fixture_partial, tmp_path):
        path = tmp_path / "fixture.matrix"
        save_matrix(fixture_partial, path)
        assert load_matrix(path) == fixture_partial

    def test_random_games_round_trip(self, tmp_path):
        rng = random.Random(2024)
        for i in range(20):
            g = random_game(rng, with_humans=True)
            path = tmp_path / f"g{i}.matrix"
            save_matrix(g, path)
            assert load_matrix(path) == g

    def test_fractional_payoffs_survive(self, tmp_path):
        g = PayoffMatrix(n_players=1, av_ids=(0,),
                         entries={0: (-1.25,), 1: (-0.1,)}, quantum=0.05)
        path = tmp_path / "frac.matrix"
        save_matrix(g, path)
        assert load_matrix(path) == g

    def test_save_is_deterministic(self, fixture_partial, tmp_path):
        a, b = tmp_path / "a.matrix", tmp_path / "b.matrix"
        save_matrix(fixture_partial, a)
        save_matrix(fixture_partial, b)
        assert a.read_bytes() == b.read_bytes()


class TestBundledFixture:
    def test_loads_with_partial_flag(self, fixture_partial):
        assert not fixture_partial.complete
        assert fixture_partial.n_players == 5
        assert fixture_partial.av_ids == (0, 1, 5, 6, 7)
        assert len(fixture_partial.entries) == 5

    def test_known_rows(self, fixture_partial):
        g = fixture_partial
        assert g.require(0) == (-27, -58, -59, -59, -51)
        assert g.require(g.parse_action("11110")) == (-53, -53, -53, -57, -60)

    def test_row_means_cover_every_stored_action(self, fixture_partial):
        stored = {fixture_partial.action_string(a) for a in fixture_partial.actions()}
        assert stored == set(TABLE1_ROW_MEANS)


class TestCompletion:
    def test_fill_prices_all_actions(self, fixture_partial):
        completed = complete_with_fill(fixture_partial)
        assert completed.complete
        assert len(completed.entries) == 32
        for action, row in fixture_partial.entries.items():
            assert completed.entries[action] == row

    def test_fill_must_be_nonpositive(self, fixture_partial):
        with pytest.raises(ValueError, match="fill"):
            complete_with_fill(fixture_partial, fill=1.0)

    def test_partial_fixture_does_not_pass_complete_operations(self, fixture_partial):
        from routeclubs import IncompleteMatrixError, is_strong
        with pytest.raises(IncompleteMatrixError):
            is_strong(fixture_partial, 0)


class TestParseErrors:
    def write(self, tmp_path, text):
        path = tmp_path / "m.matrix"
        path.write_text(text)
        return path

    def test_bad_magic(self, tmp_path):
        path = self.write(tmp_path, "something else\n")
        with pytest.raises(MatrixFormatError, match="line 1"):
            load_matrix(path)

    def test_wrong_arity_reports_line(self, tmp_path):
        path = self.write(tmp_path, "\n".join([
            "routeclubs-matrix 1",
            "n_players 15",
            "av_ids 0 1 2 3 4 5 6 7 8 9",
            "quantum 1",
            "supply_mode adaptive",
            "partial true",
            "actions 1",
            "---",
            "0000000000 -1 -2 -3 -4 -5 -6 -7 -8 -9",
        ]) + "\n")
        with pytest.raises(MatrixFormatError, match="line 9.*9 payoffs, expected 15"):
            load_matrix(path)

    def test_duplicate_action(self, tmp_path):
        path = self.write(tmp_path, "\n".join([
            "routeclubs-matrix 1",
            "n_players 1",
            "av_ids 0",
            "quantum 1",
            "supply_mode fixture",
            "partial true",
            "actions 2",
            "---",
            "0 -1",
            "0 -2",
        ]) + "\n")
        with pytest.raises(MatrixFormatError, match="duplicate action"):
            load_matrix(path)

    def test_partial_flag_must_match_contents(self, tmp_path):
        path = self.write(tmp_path, "\n".join([
            "routeclubs-matrix 1",
            "n_players 1",
            "av_ids 0",
            "quantum 1",
            "supply_mode fixture",
            "partial true",
            "actions 2",
            "---",
            "0 -1",
            "1 -2",
        ]) + "\n")
        with pytest.raises(MatrixFormatError, match="partial"):
            load_matrix(path)

    def test_declared_count_must_match(self, tmp_path):
        path = self.write(tmp_path, "\n".join([
            "routeclubs-matrix 1",
            "n_players 1",
            "av_ids 0",
            "quantum 1",
            "supply_mode fixture",
            "partial true",
            "actions 3",
            "---",
            "0 -1",
        ]) + "\n")
        with pytest.raises(MatrixFormatError, match="declares 3 actions"):
            load_matrix(path)

    def test_missing_header_key(self, tmp_path):
        path = self.write(tmp_path, "\n".join([
            "routeclubs-matrix 1",
            "n_players 1",
            "av_ids 0",
            "quantum 1",
            "partial true",
            "actions 0",
            "---",
        ]) + "\n")
        with pytest.raises(MatrixFormatError, match="supply_mode"):
            load_matrix(path)

    def test_positive_payoff_rejected(self, tmp_path):
        path = self.write(tmp_path, "\n".join([
            "routeclubs-matrix 1",
            "n_players 1",
            "av_ids 0",
            "quantum 1",
            "supply_mode fixture",
            "partial true",
            "actions 1",
            "---",
            "0 3",
        ]) + "\n")
        with pytest.raises(MatrixFormatError, match="finite and <= 0"):
            load_matrix(path)
