import pytest

from hgpart.config import Constraints
from hgpart.errors import InfeasibleInstance, OracleLimitExceeded
from hgpart.hypergraph import validate_partitioning
from hgpart.moves import Move
from hgpart.oracle import brute_matching, inbound_union_size, one_pass, simulate_sequence

class TestBruteMatching:
    def test_forest(self):
        assert brute_matching([1, 0, 0, 2], [5, 5, 3, 2]) == (7.0, [(0, 1), (2, 3)])

    def test_single_pair(self):
        assert brute_matching([1, 0], [4, 4]) == (4.0, [(0, 1)])

    def test_limit(self):
        with pytest.raises(OracleLimitExceeded):
            brute_matching([-1] * 21, [0] * 21)

class TestSimulateSequence:
    def test_example(self, h_ex):
        states = simulate_sequence(h_ex, [0, 0, 1, 1], [Move(2, 1, 0, 2.0)], Constraints(omega=3, delta=3))
        assert [s.connectivity for s in states] == [3.0, 1.0]
        assert states[1].sizes == [3, 1]
        assert states[1].inbound == [2, 1]
        assert states[1].violations == 0

    def test_empty(self, h_ex):
        states = simulate_sequence(h_ex, [0, 0, 1, 1], [])
        assert len(states) == 1
        assert states[0].sizes == [2, 2]

    def test_accepts_pairs(self, h_ex):
        states = simulate_sequence(h_ex, [0, 0, 1, 1], [(2, 0)])
        assert states[1].connectivity == 1.0

class TestOnePass:
    def test_example(self, h_ex):
        part = one_pass(h_ex, Constraints(omega=2, delta=3))
        assert part.assignment.tolist() == [0, 0, 1, 1]
        assert validate_partitioning(h_ex, part, Constraints(omega=2, delta=3)).valid

    def test_one_partition(self, h_ex):
        assert one_pass(h_ex, Constraints(omega=4)).num_nonempty == 1

    def test_unit_size(self, h_ex):
        assert one_pass(h_ex, Constraints(omega=1)).num_nonempty == 4

    def test_inbound_opens_partitions(self, h_ex):
        part = one_pass(h_ex, Constraints(omega=4, delta=2))
        assert part.assignment.tolist() == [0, 0, 0, 1]
        assert validate_partitioning(h_ex, part, Constraints(omega=4, delta=2)).valid

    def test_infeasible(self, h_ex):
        with pytest.raises(InfeasibleInstance):
            one_pass(h_ex, Constraints(omega=4, delta=1))

def test_inbound_union(h_ex):
    assert inbound_union_size(h_ex, 1, 2) == 2
    assert inbound_union_size(h_ex, 2, 3) == 3
