from dataclasses import dataclass

import numpy as np

from hgpart.hypergraph import INDEX, offsets_from_counts, segment_positions

@dataclass(eq=False)
class NeighborSets:
    """Deduplicated per-node neighbor lists in compressed form.

    Every segment is sorted ascending by neighbor id. `purged` marks entries
    proven to be permanently invalid pairing targets; the mark is sticky.
    """
    nbr_offsets: np.ndarray
    nbr_data: np.ndarray
    purged: np.ndarray

    @property
    def num_nodes(self):
        return len(self.nbr_offsets) - 1

    def neighbors(self, n, include_purged=False):
        start, end = self.nbr_offsets[n], self.nbr_offsets[n + 1]
        if include_purged:
            return self.nbr_data[start:end]
        return self.nbr_data[start:end][~self.purged[start:end]]

    def is_purged(self, n, m):
        position = self._find(n, m)
        return position >= 0 and bool(self.purged[position])

    def _find(self, n, m):
        start, end = self.nbr_offsets[n], self.nbr_offsets[n + 1]
        position = start + int(np.searchsorted(self.nbr_data[start:end], m))
        if position < end and self.nbr_data[position] == m:
            return position
        return -1

def materialize_neighbors(hg, inc):
    """Builds the exact neighbor set of every node.

    Each node first gets sum(|e| - 1) scratch entries over its incident
    hyperedges, which are then deduplicated and compacted.
    """
    sizes = hg.edge_sizes
    pin_edges = hg.pin_edges()
    # one scratch entry per ordered pair of pins sharing a hyperedge
    fanout = sizes[pin_edges]
    owners = np.repeat(hg.pin_data, fanout)
    starts = np.repeat(hg.pin_offsets[pin_edges], fanout)
    scratch = hg.pin_data[starts + segment_positions(offsets_from_counts(fanout))]
    keep = owners != scratch
    width = max(hg.num_nodes, 1)
    keys = np.unique(owners[keep] * width + scratch[keep])
    owners = keys // width
    counts = np.bincount(owners, minlength=hg.num_nodes).astype(INDEX)
    return NeighborSets(
        nbr_offsets=offsets_from_counts(counts),
        nbr_data=(keys % width).astype(INDEX),
        purged=np.zeros(len(keys), dtype=bool),
    )

def flag_purged(ns, pairs):
    """Marks every `(n, m)` pair, and its mirror `(m, n)`, as permanently invalid.

    Pairs that are not neighbors are ignored, and flagging twice changes nothing.
    """
    for n, m in pairs:
        for a, b in ((n, m), (m, n)):
            position = ns._find(a, b)
            if position >= 0:
                ns.purged[position] = True
