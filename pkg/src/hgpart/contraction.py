from dataclasses import dataclass

import numpy as np

from hgpart.hypergraph import INDEX, Hypergraph, build_incidence, offsets_from_counts
from hgpart.neighborhood import NeighborSets

@dataclass(eq=False)
class LevelMap:
    """The node to cluster map between a level and the next coarser one.

    :param gamma: per fine node, its coarse node id
    :param members: `(num_coarse, 2)` fine ids per cluster, -1 in the second column for singletons
    :param level: index of the fine level this map leaves from
    """
    gamma: np.ndarray
    members: np.ndarray
    level: int = 0

    @property
    def num_fine(self):
        return len(self.gamma)

    @property
    def num_coarse(self):
        return len(self.members)

    @property
    def num_pairs(self):
        return int(np.count_nonzero(self.members[:, 1] >= 0))

    def cluster(self, n):
        return [int(m) for m in self.members[n] if m >= 0]

def build_gamma(match, num_nodes, level=0):
    """Collapses every matched pair into one coarse node.

    Coarse ids follow the smallest fine id of each cluster, so they are
    contiguous and deterministic.
    """
    match = np.asarray(match, dtype=INDEX)
    if len(match) != num_nodes:
        raise ValueError(f"Expected a match entry for each of the {num_nodes} nodes")
    nodes = np.arange(num_nodes, dtype=INDEX)
    leaders = (match < 0) | (nodes < match)
    ids = np.cumsum(leaders, dtype=INDEX) - 1
    gamma = ids.copy()
    followers = ~leaders
    gamma[followers] = ids[match[followers]]

    num_coarse = int(leaders.sum())
    members = np.full((num_coarse, 2), -1, dtype=INDEX)
    members[:, 0] = nodes[leaders]
    members[:, 1] = match[leaders]
    return LevelMap(gamma=gamma, members=members, level=level)

def coarsen_hypergraph(hg, inc, lm):
    """Builds the coarse hypergraph induced by `lm` together with its incidence.

    Every fine edge keeps its identity and weight. Pins mapping onto the same
    cluster are merged, and a cluster holding both a source and a destination
    pin of the edge keeps only the destination one. Edges left with no
    destination and at most one source are dropped. Pins come out sorted
    within the source and destination halves of each segment.
    """
    gamma = lm.gamma
    pin_edges = hg.pin_edges()
    mapped = gamma[hg.pin_data]
    is_dst = hg.pin_is_destination()

    # one group per (edge, cluster), destination occurrences first
    order = np.lexsort((~is_dst, mapped, pin_edges))
    pin_edges, mapped, is_dst = pin_edges[order], mapped[order], is_dst[order]
    first = np.ones(len(order), dtype=bool)
    first[1:] = (pin_edges[1:] != pin_edges[:-1]) | (mapped[1:] != mapped[:-1])
    pin_edges, mapped, is_dst = pin_edges[first], mapped[first], is_dst[first]

    dst_counts = np.bincount(pin_edges[is_dst], minlength=hg.num_edges)
    src_counts = np.bincount(pin_edges[~is_dst], minlength=hg.num_edges)
    kept_edges = (dst_counts > 0) | (src_counts > 1)
    renumber = np.cumsum(kept_edges, dtype=INDEX) - 1

    survives = kept_edges[pin_edges]
    pin_edges, mapped, is_dst = renumber[pin_edges[survives]], mapped[survives], is_dst[survives]
    order = np.lexsort((mapped, is_dst, pin_edges))

    coarse = Hypergraph(
        num_nodes=lm.num_coarse,
        pin_offsets=offsets_from_counts((dst_counts + src_counts)[kept_edges]),
        pin_data=mapped[order].astype(INDEX),
        src_counts=src_counts[kept_edges].astype(INDEX),
        edge_weights=hg.edge_weights[kept_edges].copy(),
        node_sizes=np.bincount(gamma, weights=hg.node_sizes, minlength=lm.num_coarse).astype(INDEX),
    )
    # per-node incidence sizes come straight from counting coarse pin occurrences
    return coarse, build_incidence(coarse)

def coarsen_neighbors(ns, lm, coarse_hg):
    """Derives the coarse neighbor sets from the fine ones.

    A coarse neighbor flagged on every fine occurrence is removed outright;
    any other one is kept unflagged.
    """
    gamma = lm.gamma
    counts = np.diff(ns.nbr_offsets)
    owners = gamma[np.repeat(np.arange(ns.num_nodes, dtype=INDEX), counts)]
    targets = gamma[ns.nbr_data]
    keep = owners != targets
    width = max(coarse_hg.num_nodes, 1)
    keys, inverse = np.unique(owners[keep] * width + targets[keep], return_inverse=True)
    unflagged = np.bincount(inverse, weights=(~ns.purged[keep]).astype(np.float64), minlength=len(keys)) > 0
    keys = keys[unflagged]
    return NeighborSets(
        nbr_offsets=offsets_from_counts(np.bincount(keys // width, minlength=coarse_hg.num_nodes).astype(INDEX)),
        nbr_data=(keys % width).astype(INDEX),
        purged=np.zeros(len(keys), dtype=bool),
    )
