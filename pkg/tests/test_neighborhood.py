from conftest import random_hypergraph
from hgpart.hypergraph import Hypergraph, build_incidence
from hgpart.neighborhood import flag_purged, materialize_neighbors

def neighbors_of(hg, inc, n):
    return sorted({int(m) for e in inc.incident(n) for m in hg.pins(e)} - {n})

class TestMaterialize:
    def test_example(self, h_ex):
        ns = materialize_neighbors(h_ex, build_incidence(h_ex))
        assert ns.neighbors(2).tolist() == [0, 1, 3]
        assert ns.neighbors(3).tolist() == [2]

    def test_isolated_node(self):
        hg = Hypergraph.from_edges(3, [([0], [1])])
        ns = materialize_neighbors(hg, build_incidence(hg))
        assert ns.neighbors(2).tolist() == []

    def test_undirected_clique(self):
        hg = Hypergraph.from_edges(3, [([], [0, 1, 2])])
        ns = materialize_neighbors(hg, build_incidence(hg))
        assert [ns.neighbors(n).tolist() for n in range(3)] == [[1, 2], [0, 2], [0, 1]]

    def test_exact_and_symmetric(self, rng):
        hg = random_hypergraph(rng, num_nodes=15, num_edges=25)
        inc = build_incidence(hg)
        ns = materialize_neighbors(hg, inc)
        for n in range(hg.num_nodes):
            assert ns.neighbors(n).tolist() == neighbors_of(hg, inc, n)
            for m in ns.neighbors(n).tolist():
                assert n in ns.neighbors(m).tolist()
            assert len(ns.neighbors(n)) <= sum(len(hg.pins(e)) - 1 for e in inc.incident(n))

class TestFlagPurged:
    def test_symmetric(self, h_ex):
        ns = materialize_neighbors(h_ex, build_incidence(h_ex))
        flag_purged(ns, [(2, 3)])
        assert ns.neighbors(2).tolist() == [0, 1]
        assert ns.neighbors(3).tolist() == []
        assert ns.neighbors(2, include_purged=True).tolist() == [0, 1, 3]
        assert ns.is_purged(3, 2)

    def test_idempotent(self, h_ex):
        ns = materialize_neighbors(h_ex, build_incidence(h_ex))
        flag_purged(ns, [(2, 3)])
        once = ns.purged.copy()
        flag_purged(ns, [(2, 3), (3, 2)])
        assert (ns.purged == once).all()

    def test_unknown_pair_ignored(self, h_ex):
        ns = materialize_neighbors(h_ex, build_incidence(h_ex))
        flag_purged(ns, [(0, 3)])
        assert not ns.purged.any()
