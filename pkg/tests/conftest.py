import numpy as np
import pytest

from hgpart.hypergraph import Hypergraph

def example_hypergraph():
    # e0: 0 -> {1, 2} weight 1, e1: 1 -> {2} weight 2, e2: 2 -> {3} weight 1
    return Hypergraph.from_edges(4, [([0], [1, 2]), ([1], [2]), ([2], [3])], weights=[1, 2, 1])

def random_hypergraph(rng, num_nodes=12, num_edges=16, max_pins=4, max_weight=3, undirected_share=0.2):
    """A random directed hypergraph with integer weights, every edge holding at least two pins."""
    edges = []
    for _ in range(num_edges):
        size = min(int(rng.integers(2, max_pins + 1)), num_nodes)
        pins = rng.choice(num_nodes, size=size, replace=False).tolist()
        num_sources = 0 if rng.random() < undirected_share else int(rng.integers(1, size))
        edges.append((pins[:num_sources], pins[num_sources:]))
    weights = rng.integers(1, max_weight + 1, size=num_edges)
    return Hypergraph.from_edges(num_nodes, edges, weights=weights)

def random_pseudo_forest(rng, num_nodes, max_score=20):
    """Random proposal round: mutual pairs and target-less roots with trees hanging off them.

    Every edge scores at most as much as the edge leaving its target.
    """
    order = rng.permutation(num_nodes).tolist()
    targets = np.full(num_nodes, -1, dtype=np.int64)
    scores = np.zeros(num_nodes)
    placed = []
    i = 0
    while i < num_nodes:
        n = order[i]
        if not placed or rng.random() < 0.25:
            if i + 1 < num_nodes and rng.random() < 0.7:
                m = order[i + 1]
                score = int(rng.integers(1, max_score + 1))
                targets[n], targets[m] = m, n
                scores[n] = scores[m] = score
                placed += [n, m]
                i += 2
                continue
            placed.append(n)
            i += 1
            continue
        parent = placed[int(rng.integers(len(placed)))]
        cap = int(scores[parent]) if targets[parent] >= 0 else max_score
        targets[n] = parent
        scores[n] = int(rng.integers(1, cap + 1))
        placed.append(n)
        i += 1
    return targets, scores

@pytest.fixture
def h_ex():
    return example_hypergraph()

@pytest.fixture
def rng():
    return np.random.default_rng(1234)
