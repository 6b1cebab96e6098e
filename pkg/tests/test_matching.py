import numpy as np
import pytest

from conftest import random_pseudo_forest
from hgpart.coarsening import ProposalGraph
from hgpart.config import MatchingStrategy
from hgpart.errors import ProposalStructureError
from hgpart.matching import find_roots, matched_score, run_rounds, solve_greedy, solve_matching
from hgpart.oracle import brute_matching

# a <-> b scores 5, c -> a scores 3, d -> c scores 2
FOREST = ([1, 0, 0, 2], [5, 5, 3, 2])

class TestRoots:
    def test_mutual_pair(self):
        assert find_roots(FOREST[0]) == {0, 1}

    def test_prior_matched_nodes_leave(self):
        assert find_roots(FOREST[0], prior_matched=[True, False, False, False]) == set()

    def test_longer_cycle_raises(self):
        with pytest.raises(ProposalStructureError):
            find_roots([1, 2, 0])

class TestSolveMatching:
    def test_worked_forest(self):
        state = solve_matching(*FOREST)
        assert state.ss1[3] == 2 and state.ss0[3] == 0
        assert state.ss1[2] == 3 and state.ss0[2] == 2
        assert state.ss1[0] == 7 and state.ss0[0] == 3
        assert state.pairs == [(0, 1), (2, 3)]
        assert matched_score(*FOREST, state.match) == 7

    def test_empty(self):
        state = solve_matching([], [])
        assert state.pairs == []
        assert brute_matching([], []) == (0.0, [])

    def test_single_pair(self):
        state = solve_matching([1, 0], [2.5, 2.5])
        assert state.pairs == [(0, 1)]
        assert matched_score([1, 0], [2.5, 2.5], state.match) == 2.5

    def test_terminal_root_takes_best_child(self):
        # node 0 has no target; 1 and 2 both point at it
        state = solve_matching([-1, 0, 0], [0, 4, 4])
        assert state.pairs == [(0, 2)]

    def test_child_beats_root_pair(self):
        # 0 <-> 1 scores 1, 2 -> 0 scores 5, 3 -> 1 scores 5
        state = solve_matching([1, 0, 0, 1], [1, 1, 5, 5])
        assert state.pairs == [(0, 2), (1, 3)]

    def test_against_brute_force(self, rng):
        for _ in range(500):
            targets, scores = random_pseudo_forest(rng, int(rng.integers(1, 17)))
            state = solve_matching(targets, scores)
            best, _ = brute_matching(targets, scores)
            assert matched_score(targets, scores, state.match) == best
            partners = state.match[state.match >= 0]
            assert len(set(partners.tolist())) == len(partners)
            for n, m in state.pairs:
                assert targets[n] == m or targets[m] == n

    def test_greedy_never_better(self, rng):
        for _ in range(200):
            targets, scores = random_pseudo_forest(rng, int(rng.integers(1, 17)))
            optimal = matched_score(targets, scores, solve_matching(targets, scores).match)
            greedy = matched_score(targets, scores, solve_greedy(targets, scores).match)
            assert greedy <= optimal

    def test_deterministic(self, rng):
        targets, scores = random_pseudo_forest(rng, 16)
        assert (solve_matching(targets, scores).match == solve_matching(targets, scores).match).all()

class TestRunRounds:
    def star(self):
        targets = np.array([[3, 0, 0, 0], [1, 2, 1, 2]])
        scores = np.array([[5.0, 3, 4, 5], [3, 2, 2, 1]])
        return ProposalGraph(targets=targets, scores=scores, seed=0, rejected=np.zeros((0, 2), dtype=np.int64))

    def test_second_round_pairs_leftovers(self):
        assert run_rounds(self.star()).tolist() == [3, 2, 1, 0]

    def test_greedy_strategy(self):
        assert run_rounds(self.star(), MatchingStrategy.GREEDY).tolist() == [3, 2, 1, 0]

    def test_single_round(self):
        pg = self.star()
        pg.targets, pg.scores = pg.targets[:1], pg.scores[:1]
        assert run_rounds(pg).tolist() == [3, -1, -1, 0]
