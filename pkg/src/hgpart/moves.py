import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from hgpart.events import segment_starts
from hgpart.hypergraph import INDEX, offsets_from_counts, segment_positions

@dataclass
class Move:
    """Moving `node` from partition `source` to `destination`.

    `predecessor`/`successor` are sequence positions of the neighboring moves
    in the same chain, -1 at chain ends.
    """
    node: int
    source: int
    destination: int
    gain: float
    seq_gain: float = 0.0
    predecessor: int = -1
    successor: int = -1
    position: int = -1

@dataclass(eq=False)
class MoveSequence:
    """Moves in the order they are applied, grouped into consecutive chains.

    :param moves: the moves, `moves[i].position == i`
    :param chain_starts: the position of each chain's first move
    """
    moves: List[Move] = field(default_factory=list)
    chain_starts: List[int] = field(default_factory=list)

    def __len__(self):
        return len(self.moves)

    def __iter__(self):
        return iter(self.moves)

    @property
    def nodes(self):
        return np.array([m.node for m in self.moves], dtype=np.int64)

    @property
    def gains(self):
        return np.array([m.gain for m in self.moves], dtype=np.float64)

    @property
    def seq_gains(self):
        return np.array([m.seq_gain for m in self.moves], dtype=np.float64)

    def cumulative_gains(self):
        return np.cumsum(self.seq_gains)

    def positions(self, num_nodes):
        """Per-node position in the sequence, -1 for nodes that do not move."""
        positions = np.full(num_nodes, -1, dtype=np.int64)
        for m in self.moves:
            positions[m.node] = m.position
        return positions

    @staticmethod
    def from_moves(moves, chains=None):
        """Lays out `moves` in order; `chains` lists lengths of consecutive chains, each move alone by default."""
        sequence = MoveSequence()
        chains = chains if chains is not None else [1] * len(moves)
        position = 0
        for length in chains:
            sequence.chain_starts.append(position)
            for i in range(length):
                move = moves[position]
                move.position = position
                move.predecessor = position - 1 if i > 0 else -1
                move.successor = position + 1 if i < length - 1 else -1
                sequence.moves.append(move)
                position += 1
        return sequence

# MARK: Proposal

def propose_moves(hg, inc, part, pins, cons, enforce_size=False):
    """Proposes, for every node, the move to its best adjacent partition.

    The gain of moving `n` to `p` is the weight of incident edges `n` alone
    keeps in its partition minus the weight of incident edges without any
    pin in `p`. Only partitions reached through an incident edge are
    candidates; ties go to the higher partition id. Moves with nonpositive
    gain are proposed too.

    :param pins: all-pins matrix consistent with `part`
    :param enforce_size: skip destinations that would exceed the size limit
    """
    weights = hg.edge_weights
    sizes = hg.node_sizes
    moves = []
    for n in range(hg.num_nodes):
        source = int(part.assignment[n])
        saving = 0.0
        total = 0.0
        adjacent = {}
        for e in inc.incident(n).tolist():
            w = weights[e]
            total += w
            for p in pins.partitions(e):
                if p == source:
                    if pins.get(p, e) == 1:
                        saving += w
                else:
                    adjacent[p] = adjacent.get(p, 0.0) + w
        best = None
        for p, kept in adjacent.items():
            if enforce_size and sizes[n] + part.part_sizes[p] > cons.max_size:
                continue
            gain = saving - (total - kept)
            if best is None or (gain, p) > best:
                best = (gain, p)
        if best is not None:
            moves.append(Move(node=n, source=source, destination=best[1], gain=best[0]))
    return moves

# MARK: Chains

def _run_ranks(starts):
    """Each entry's offset from the start of its run, given the run start flags."""
    index = np.arange(len(starts), dtype=INDEX)
    return index - np.maximum.accumulate(np.where(starts, index, 0))

def _link_round(nodes, sources, destinations, gains, sizes, in_counts, successor, predecessor, alpha, beta, window):
    """Pairs open tails with unclaimed heads for one round and returns the `(tail, head)` links."""
    heads = np.flatnonzero(predecessor < 0)
    head_sources = sources[heads]
    in_window = _run_ranks(segment_starts(head_sources)) < window
    heads, head_sources = heads[in_window], head_sources[in_window]

    tails = np.flatnonzero(successor < 0)
    tails = tails[np.lexsort((-nodes[tails], in_counts[tails], sizes[tails], destinations[tails]))]
    # tails sharing destination, size and inbound count grade alike; only the `window` highest nodes can link
    group_starts = segment_starts(destinations[tails], sizes[tails], in_counts[tails])
    tails = tails[_run_ranks(group_starts) < window]

    lo = np.searchsorted(head_sources, destinations[tails], side="left")
    counts = np.searchsorted(head_sources, destinations[tails], side="right") - lo
    if counts.sum() == 0:
        return []
    pair_tails = np.repeat(tails, counts)
    pair_heads = heads[np.repeat(lo, counts) + segment_positions(offsets_from_counts(counts))]
    grades = gains[pair_heads] - alpha * np.abs(sizes[pair_tails] - sizes[pair_heads]) \
        - beta * np.abs(in_counts[pair_tails] - in_counts[pair_heads])

    # a head only ever links to one of its `window` best claimants
    by_head = np.lexsort((-nodes[pair_tails], -grades, pair_heads))
    by_head = by_head[_run_ranks(segment_starts(pair_heads[by_head])) < window]
    pair_tails, pair_heads, grades = pair_tails[by_head], pair_heads[by_head], grades[by_head]

    order = np.lexsort((nodes[pair_heads], nodes[pair_tails], grades))[::-1]
    open_tails = set(pair_tails.tolist())
    open_heads = set(pair_heads.tolist())
    links = []
    for t, h in zip(pair_tails[order].tolist(), pair_heads[order].tolist()):
        if t in open_tails and h in open_heads:
            open_tails.remove(t)
            open_heads.remove(h)
            links.append((t, h))
            if not open_tails or not open_heads:
                break
    return links

def build_chains(moves, sizes, in_counts, alpha=1e-6, beta=1e-7, window=256, rounds=16, chaining=True):
    """Links moves into chains whose consecutive moves hand over between the same partition and ranks the chains.

    Moves are sorted by source partition and descending gain. The candidate
    successors of an open chain tail are the first `window` unclaimed moves
    leaving its destination, graded by gain minus size and inbound count
    differences. Every round links tails and candidates by descending
    (grade, tail node, head node) while both ends are still free, which is
    where repeated claims settle when each tail claims its best head and a
    contested head goes to the highest (grade, tail node). Rounds stop early
    once nothing links. Chains may close into cycles. The result
    concatenates chains by descending total gain.

    :param sizes: per-node sizes
    :param in_counts: per-node inbound edge counts
    :param chaining: when unset, moves are only ordered by descending gain
    """
    if not chaining:
        ordered = sorted(moves, key=lambda m: (-m.gain, -m.node))
        return MoveSequence.from_moves(ordered)

    ordered = sorted(moves, key=lambda m: (m.source, -m.gain, m.node))
    nodes = np.array([m.node for m in ordered], dtype=INDEX)
    sources = np.array([m.source for m in ordered], dtype=INDEX)
    destinations = np.array([m.destination for m in ordered], dtype=INDEX)
    gains = np.array([m.gain for m in ordered], dtype=np.float64)
    move_sizes = np.asarray(sizes, dtype=INDEX)[nodes]
    move_in_counts = np.asarray(in_counts, dtype=INDEX)[nodes]

    successor = np.full(len(ordered), -1, dtype=INDEX)
    predecessor = np.full(len(ordered), -1, dtype=INDEX)
    for _ in range(rounds):
        links = _link_round(
            nodes, sources, destinations, gains, move_sizes, move_in_counts,
            successor, predecessor, alpha, beta, window,
        )
        if not links:
            break
        tails, heads = np.array(links, dtype=INDEX).T
        successor[tails] = heads
        predecessor[heads] = tails

    successor = successor.tolist()
    chains = []
    visited = [False] * len(ordered)
    starts = np.flatnonzero(predecessor < 0).tolist()
    # whatever is unvisited after the paths lies on cycles, entered at its lowest index
    for start in starts + list(range(len(ordered))):
        if visited[start]:
            continue
        chain = []
        i = start
        while i >= 0 and not visited[i]:
            visited[i] = True
            chain.append(i)
            i = successor[i]
        chains.append(chain)
    chains.sort(key=lambda chain: (-math.fsum(ordered[i].gain for i in chain), chain[0]))

    layout = [ordered[i] for chain in chains for i in chain]
    return MoveSequence.from_moves(layout, [len(chain) for chain in chains])

# MARK: In-sequence gains

def in_sequence_gains(hg, inc, part, pins, seq):
    """Computes every move's gain assuming all earlier moves of `seq` already happened.

    For each incident edge, the pin counts of the move's source and
    destination are corrected by the earlier moves of the edge's other
    pins before the saving and loss rules are applied.

    :param pins: all-pins matrix of the state before the sequence
    """
    positions = seq.positions(hg.num_nodes)
    weights = hg.edge_weights
    for move in seq:
        n = move.node
        gain = 0.0
        for e in inc.incident(n).tolist():
            at_source = pins.get(move.source, e)
            at_destination = pins.get(move.destination, e)
            for m in hg.pins(e).tolist():
                earlier = positions[m]
                if m == n or earlier < 0 or earlier >= move.position:
                    continue
                other = seq.moves[earlier]
                at_source += (other.destination == move.source) - (other.source == move.source)
                at_destination += (other.destination == move.destination) - (other.source == move.destination)
            if at_source == 1:
                gain += weights[e]
            if at_destination == 0:
                gain -= weights[e]
        move.seq_gain = gain
