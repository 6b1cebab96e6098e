import json

import numpy as np
import pytest

from conftest import random_hypergraph
from hgpart.config import Constraints
from hgpart.errors import LedgerMismatch, MalformedHypergraph
from hgpart.hypergraph import (
    Hypergraph,
    Partitioning,
    PinsMode,
    ValidationReport,
    ViolationKind,
    build_incidence,
    build_pins_matrix,
    check_ledgers,
    coarsening_score,
    compact_assignment,
    connectivity,
    connectivity_upper_bound,
    cut_net,
    disjoint_union,
    validate_partitioning,
)
from hgpart.oracle import scratch_connectivity, scratch_cut_net, scratch_inbound_sets

SPLIT = [0, 0, 1, 1]

class TestHypergraph:
    def test_segments(self, h_ex):
        assert h_ex.num_edges == 3
        assert h_ex.num_pins == 7
        assert h_ex.pin_data.tolist() == [0, 1, 2, 1, 2, 2, 3]
        assert h_ex.sources(0).tolist() == [0]
        assert h_ex.destinations(0).tolist() == [1, 2]
        assert h_ex.total_size == 4

    def test_destination_flags(self, h_ex):
        assert h_ex.pin_is_destination().tolist() == [False, True, True, False, True, False, True]
        assert h_ex.pin_edges().tolist() == [0, 0, 0, 1, 1, 2, 2]

    @pytest.mark.parametrize("edges, weights, sizes", [
        ([([0], [0])], None, None),
        ([([0], [5])], None, None),
        ([([0], [1])], [0.0], None),
        ([([0], [1])], [-1.0], None),
        ([([0], [1])], None, [1, 0]),
        ([([], [])], None, None),
    ])
    def test_rejects_malformed(self, edges, weights, sizes):
        with pytest.raises(MalformedHypergraph):
            Hypergraph.from_edges(2, edges, weights=weights, node_sizes=sizes)

    def test_disjoint_union(self, h_ex):
        union = disjoint_union(h_ex, h_ex)
        assert union.num_nodes == 8
        assert union.num_edges == 6
        assert union.destinations(3).tolist() == [5, 6]
        union.validate()

class TestIncidence:
    def test_example(self, h_ex):
        inc = build_incidence(h_ex)
        assert inc.inbound(2).tolist() == [0, 1]
        assert inc.outbound(2).tolist() == [2]
        assert inc.inbound(0).tolist() == []
        assert inc.in_counts.tolist() == [0, 1, 2, 1]

    def test_no_edges(self):
        inc = build_incidence(Hypergraph.from_edges(3, []))
        assert inc.degrees.tolist() == [0, 0, 0]

    def test_single_edge(self):
        inc = build_incidence(Hypergraph.from_edges(2, [([0], [1])]))
        assert inc.inbound(1).tolist() == [0]
        assert inc.outbound(0).tolist() == [0]
        assert inc.inbound(0).tolist() == [] and inc.outbound(1).tolist() == []

    def test_sizes_sum_to_pins(self, rng):
        hg = random_hypergraph(rng)
        inc = build_incidence(hg)
        assert inc.degrees.sum() == hg.num_pins
        for n in range(hg.num_nodes):
            expected = sorted(e for e in range(hg.num_edges) if n in hg.destinations(e))
            assert inc.inbound(n).tolist() == expected

class TestMetrics:
    def test_example(self, h_ex):
        assert connectivity(h_ex, SPLIT) == 3.0
        assert cut_net(h_ex, SPLIT) == 3.0
        assert connectivity(h_ex, [0, 1, 2, 3]) == 5.0
        assert connectivity(h_ex, [0, 0, 0, 0]) == 0.0
        assert coarsening_score(h_ex, SPLIT) == 2.0
        assert coarsening_score(h_ex, [0, 1, 2, 3]) == 0.0
        assert connectivity_upper_bound(h_ex) == 5.0

    def test_duality(self, rng):
        for _ in range(200):
            hg = random_hypergraph(rng, num_nodes=int(rng.integers(2, 20)))
            gamma = rng.integers(0, 5, size=hg.num_nodes)
            assert coarsening_score(hg, gamma) + connectivity(hg, gamma) == connectivity_upper_bound(hg)

    def test_against_scratch(self, rng):
        for _ in range(20):
            hg = random_hypergraph(rng)
            assignment = rng.integers(0, 4, size=hg.num_nodes)
            assert connectivity(hg, assignment) == scratch_connectivity(hg, assignment)
            assert cut_net(hg, assignment) == scratch_cut_net(hg, assignment)
            assert cut_net(hg, assignment) <= connectivity(hg, assignment)

    def test_renumbering_invariance(self, rng):
        hg = random_hypergraph(rng)
        assignment = rng.integers(0, 4, size=hg.num_nodes)
        assert connectivity(hg, assignment) == connectivity(hg, (3 - assignment) * 5)

class TestPartitioning:
    def test_ledgers(self, h_ex):
        part = Partitioning.from_assignment(h_ex, SPLIT)
        assert part.part_sizes.tolist() == [2, 2]
        assert part.part_inbound_counts.tolist() == [1, 3]
        check_ledgers(h_ex, part)
        part.part_sizes[0] += 1
        with pytest.raises(LedgerMismatch):
            check_ledgers(h_ex, part)

    def test_inbound_ledger_against_scratch(self, rng):
        hg = random_hypergraph(rng)
        assignment = rng.integers(0, 3, size=hg.num_nodes)
        part = Partitioning.from_assignment(hg, assignment, num_parts=3)
        inbound = scratch_inbound_sets(hg, assignment)
        assert part.part_inbound_counts.tolist() == [len(inbound.get(p, ())) for p in range(3)]

    def test_compact(self):
        compact, count = compact_assignment(np.array([3, 3, 7, 1]))
        assert compact.tolist() == [1, 1, 2, 0]
        assert count == 3

class TestPinsMatrix:
    def test_example(self, h_ex):
        pins = build_pins_matrix(h_ex, SPLIT)
        assert pins.get(0, 0) == 2 and pins.get(1, 0) == 1
        pins_in = build_pins_matrix(h_ex, SPLIT, PinsMode.INBOUND)
        assert pins_in.get(0, 0) == 1 and pins_in.get(1, 0) == 1
        assert pins.get(5, 0) == 0

    def test_column_sums(self, rng):
        hg = random_hypergraph(rng)
        assignment = rng.integers(0, 4, size=hg.num_nodes)
        pins = build_pins_matrix(hg, assignment)
        pins_in = build_pins_matrix(hg, assignment, PinsMode.INBOUND)
        for e in range(hg.num_edges):
            assert sum(pins.partitions(e).values()) == len(hg.pins(e))
            assert sum(pins_in.partitions(e).values()) == len(hg.destinations(e))

    def test_add_drops_zeros(self, h_ex):
        pins = build_pins_matrix(h_ex, SPLIT)
        pins.add(1, 0, -1)
        assert 1 not in pins.partitions(0)
        with pytest.raises(LedgerMismatch):
            pins.add(1, 0, -1)

class TestValidation:
    def test_inbound_violation(self, h_ex):
        report = validate_partitioning(h_ex, SPLIT, Constraints(omega=2, delta=2))
        assert not report.valid
        assert len(report.violations) == 1
        violation = report.violations[0]
        assert (violation.partition, violation.kind, violation.measured, violation.limit) == (1, ViolationKind.INBOUND, 3, 2)

    def test_unbounded(self, h_ex):
        assert validate_partitioning(h_ex, [0, 0, 0, 0], Constraints.unbounded()).valid

    def test_size_violation(self, h_ex):
        report = validate_partitioning(h_ex, SPLIT, Constraints(omega=1))
        assert [v.kind for v in report.violations] == [ViolationKind.SIZE, ViolationKind.SIZE]

    def test_report_serializes(self, h_ex):
        report = validate_partitioning(h_ex, SPLIT, Constraints(omega=2, delta=2))
        assert '"inbound"' in report.to_json()

    def test_report_carries_metrics(self, h_ex):
        report = validate_partitioning(h_ex, SPLIT, Constraints(omega=2, delta=2))
        assert (report.valid, report.connectivity, report.cut_net) == (False, 3.0, 3.0)
        record = json.loads(report.to_json())
        assert record["valid"] is False
        assert record["connectivity"] == record["cut_net"] == 3.0
        assert ValidationReport.from_json(report.to_json()) == report
