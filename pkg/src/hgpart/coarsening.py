import bisect
import math
from dataclasses import dataclass
from typing import List

import numpy as np

from hgpart.hypergraph import INDEX, offsets_from_counts, segment_positions

# MARK: Deterministic noise

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MASK = (1 << 64) - 1

def _mix64(z):
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(0xBF58476D1CE4E5B9)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))

def pair_noise(seed, n, m, cap):
    """A pseudo-random value in [0, cap] that depends only on the seed and the unordered pair {n, m}.

    `n` and `m` may be arrays; the result broadcasts like them.
    """
    n = np.atleast_1d(np.asarray(n, dtype=INDEX))
    m = np.atleast_1d(np.asarray(m, dtype=INDEX))
    low = np.minimum(n, m).astype(np.uint64)
    high = np.maximum(n, m).astype(np.uint64)
    state = _mix64(np.full(low.shape, np.uint64(seed & _MASK)) ^ _GOLDEN)
    state = _mix64(state + low * _GOLDEN)
    state = _mix64(state ^ (high + _GOLDEN))
    unit = (state >> np.uint64(11)).astype(np.float64) * (1.0 / float(1 << 53))
    return unit * cap

# MARK: Histograms

@dataclass
class HistogramEntry:
    neighbor: int
    weight: float
    inter: int

@dataclass(eq=False)
class ProposalGraph:
    """The top-Π valid pairing candidates of every node.

    Row `i` of `targets`/`scores` is the i-th proposal graph; a target of -1
    means the node has fewer than `i + 1` valid candidates. `rejected` lists
    `(n, m)` neighbor pairs that failed the constraints and can be purged.
    """
    targets: np.ndarray
    scores: np.ndarray
    seed: int
    rejected: np.ndarray

    @property
    def rounds(self):
        return self.targets.shape[0]

    @property
    def num_nodes(self):
        return self.targets.shape[1]

    def round(self, i):
        return self.targets[i], self.scores[i]

    def without_candidates(self):
        return np.flatnonzero(self.targets[0] < 0)

class CandidateScanner:
    """Scores and validates the neighbors of single nodes on one coarsening level."""
    def __init__(self, hg, inc, ns, cons, *, seed=0, noise_cap=0.0, batch_size=1024):
        self.hg = hg
        self.inc = inc
        self.ns = ns
        self.cons = cons
        self.seed = seed
        self.noise_cap = noise_cap
        self.batch_size = batch_size
        self.pin_is_destination = hg.pin_is_destination()
        sizes = hg.edge_sizes
        self.pin_share = np.divide(hg.edge_weights, sizes, out=np.zeros(hg.num_edges), where=sizes > 0)
        self.is_inbound_scratch = np.zeros(hg.num_edges, dtype=bool)

    def histogram(self, n, batch):
        """Accumulates eta(n, m) and inter(n, m) for every `m` in the sorted `batch`."""
        hg = self.hg
        batch = np.asarray(batch, dtype=INDEX)
        eta = np.zeros(len(batch))
        inter = np.zeros(len(batch), dtype=INDEX)
        # ascending edge order keeps every eta(n, m) summed in the same order as eta(m, n)
        incident = np.sort(self.inc.incident(n))
        if len(incident) and len(batch):
            sizes = hg.edge_sizes[incident]
            pin_index = np.repeat(hg.pin_offsets[incident], sizes) + segment_positions(offsets_from_counts(sizes))
            pins = hg.pin_data[pin_index]
            slot = np.minimum(np.searchsorted(batch, pins), len(batch) - 1)
            hit = batch[slot] == pins
            eta = np.bincount(slot[hit], weights=np.repeat(self.pin_share[incident], sizes)[hit], minlength=len(batch))

            inbound = self.inc.inbound(n)
            self.is_inbound_scratch[inbound] = True
            counted = hit & self.pin_is_destination[pin_index] & np.repeat(self.is_inbound_scratch[incident], sizes)
            self.is_inbound_scratch[inbound] = False
            inter = np.bincount(slot[counted], minlength=len(batch)).astype(INDEX)
        if self.noise_cap > 0 and len(batch):
            eta = eta + pair_noise(self.seed, n, batch, self.noise_cap)
        return eta, inter

    def candidates(self, n, limit):
        """The `limit` best valid neighbors of `n` plus the neighbors that failed validation.

        :return: `(ids, scores, rejected)`, candidates ordered by descending score then id
        """
        hg = self.hg
        in_counts = self.inc.in_counts
        neighbors = self.ns.neighbors(n)
        valid_ids, valid_scores, rejected = [], [], []
        for start in range(0, len(neighbors), self.batch_size):
            batch = neighbors[start:start + self.batch_size]
            eta, inter = self.histogram(n, batch)
            union = in_counts[n] + in_counts[batch] - inter
            valid = (hg.node_sizes[n] + hg.node_sizes[batch] <= self.cons.max_size) & (union <= self.cons.max_inbound)
            valid_ids.append(batch[valid])
            valid_scores.append(eta[valid])
            rejected.append(batch[~valid])
        if not valid_ids:
            empty = np.zeros(0, dtype=INDEX)
            return empty, np.zeros(0), empty
        ids = np.concatenate(valid_ids)
        scores = np.concatenate(valid_scores)
        order = np.lexsort((-ids, -scores))[:limit]
        return ids[order], scores[order], np.concatenate(rejected)

def build_histogram(hg, inc, ns, n, batch, seed=0, noise_cap=0.0):
    """Builds node `n`'s histogram over a batch of its unpurged neighbors.

    :param batch: neighbor ids of `n`, ascending
    :param noise_cap: upper bound of the symmetric pair noise, 0 to disable it
    :return: a list of `HistogramEntry`, one per batch entry
    """
    scanner = CandidateScanner(hg, inc, ns, None, seed=seed, noise_cap=noise_cap)
    batch = np.sort(np.asarray(batch, dtype=INDEX))
    eta, inter = scanner.histogram(n, batch)
    return [HistogramEntry(int(m), float(w), int(c)) for m, w, c in zip(batch, eta, inter)]

def noise_cap_for(hg, noise_fraction):
    if hg.num_edges == 0 or noise_fraction <= 0:
        return 0.0
    return noise_fraction * math.fsum(hg.edge_weights) / hg.num_edges

def propose_candidates(hg, inc, ns, cons, pi=4, seed=0, noise_fraction=0.1, batch_size=1024):
    """Proposes up to `pi` valid pairing targets per node.

    A neighbor `m` of `n` is valid when size(n) + size(m) <= omega and
    |in(n)| + |in(m)| - inter(n, m) <= delta. Candidates are ranked by
    descending histogram score with ties going to the larger id.

    :return: a `ProposalGraph` whose `rejected` pairs can be passed to `flag_purged`
    """
    scanner = CandidateScanner(
        hg, inc, ns, cons,
        seed=seed,
        noise_cap=noise_cap_for(hg, noise_fraction),
        batch_size=batch_size,
    )
    targets = np.full((pi, hg.num_nodes), -1, dtype=INDEX)
    scores = np.zeros((pi, hg.num_nodes))
    rejected = []
    for n in range(hg.num_nodes):
        ids, best, invalid = scanner.candidates(n, pi)
        targets[:len(ids), n] = ids
        scores[:len(ids), n] = best
        if len(invalid):
            rejected.append(np.column_stack((np.full(len(invalid), n, dtype=INDEX), invalid)))
    rejected = np.concatenate(rejected) if rejected else np.zeros((0, 2), dtype=INDEX)
    return ProposalGraph(targets=targets, scores=scores, seed=seed, rejected=rejected)

# MARK: Leftover pairing

def leftover_pairing(hg, inc, cons, unpaired) -> List[tuple]:
    """Best-effort pairing of nodes left without any candidate.

    Nodes are visited by descending size (ties by ascending id); each one
    binary-searches the pool, sorted by size, for the largest partner that
    still fits in its size slack and takes the first one whose inbound count
    fits as well. The inbound union is overestimated by the plain sum.

    :return: disjoint `(n, m)` pairs
    """
    sizes = hg.node_sizes
    in_counts = inc.in_counts
    unpaired = [int(n) for n in unpaired]
    pool = sorted((int(sizes[n]), n) for n in unpaired)
    alive = set(unpaired)
    pairs = []
    for n in sorted(unpaired, key=lambda node: (-sizes[node], node)):
        if n not in alive:
            continue
        slack = cons.max_size - sizes[n]
        end = len(pool) if math.isinf(slack) else bisect.bisect_right(pool, (int(slack), math.inf))
        for position in range(end - 1, -1, -1):
            m = pool[position][1]
            if m == n:
                continue
            if in_counts[n] + in_counts[m] <= cons.max_inbound:
                pairs.append((n, m))
                alive.discard(n)
                alive.discard(m)
                pool.pop(position)
                pool.remove((int(sizes[n]), n))
                break
    return pairs
