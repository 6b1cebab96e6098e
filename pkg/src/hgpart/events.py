from dataclasses import dataclass

import numpy as np

from hgpart.hypergraph import INDEX

def segment_starts(*keys):
    """Flags the first entry of every run of equal key tuples in sorted arrays."""
    length = len(keys[0])
    starts = np.ones(length, dtype=bool)
    if length > 1:
        changed = np.zeros(length - 1, dtype=bool)
        for key in keys:
            changed |= key[1:] != key[:-1]
        starts[1:] = changed
    return starts

def segmented_cumsum(values, starts):
    """Inclusive prefix sums restarting at every flagged entry."""
    totals = np.cumsum(values)
    if len(values) == 0:
        return totals
    first = np.maximum.accumulate(np.where(starts, np.arange(len(values)), 0))
    return totals - (totals[first] - values[first])

@dataclass(eq=False)
class EventStream:
    """Sparse per-move changes of partition sizes and inbound pin counts.

    Size events `(partition, position, delta)` are sorted by partition then
    position; inbound pin events `(partition, edge, position, delta)` by
    partition, edge, then position.
    """
    num_moves: int
    size_partitions: np.ndarray
    size_positions: np.ndarray
    size_deltas: np.ndarray
    pin_partitions: np.ndarray
    pin_edges: np.ndarray
    pin_positions: np.ndarray
    pin_deltas: np.ndarray

    @property
    def num_size_events(self):
        return len(self.size_deltas)

    @property
    def num_pin_events(self):
        return len(self.pin_deltas)

def generate_events(hg, inc, seq):
    """Emits two size events per move and a leave/enter pair for every inbound edge of the moved node."""
    size_rows = []
    pin_rows = []
    for move in seq:
        size = int(hg.node_sizes[move.node])
        size_rows.append((move.source, move.position, -size))
        size_rows.append((move.destination, move.position, size))
        for e in inc.inbound(move.node).tolist():
            pin_rows.append((move.source, e, move.position, -1))
            pin_rows.append((move.destination, e, move.position, 1))
    size_rows = np.array(size_rows, dtype=INDEX).reshape(-1, 3)
    pin_rows = np.array(pin_rows, dtype=INDEX).reshape(-1, 4)
    size_rows = size_rows[np.lexsort((size_rows[:, 1], size_rows[:, 0]))]
    pin_rows = pin_rows[np.lexsort((pin_rows[:, 2], pin_rows[:, 1], pin_rows[:, 0]))]
    return EventStream(
        num_moves=len(seq),
        size_partitions=size_rows[:, 0],
        size_positions=size_rows[:, 1],
        size_deltas=size_rows[:, 2],
        pin_partitions=pin_rows[:, 0],
        pin_edges=pin_rows[:, 1],
        pin_positions=pin_rows[:, 2],
        pin_deltas=pin_rows[:, 3],
    )

@dataclass(eq=False)
class SequenceCheck:
    """Constraint state along a move sequence.

    :param violations: per position, the number of partitions breaking a limit after that move
    :param legal: per position, whether the prefix ending there is a valid landing point
    :param sizes: per size event, the partition size after the move
    :param inbound: per size event, the distinct inbound count after the move
    """
    violations: np.ndarray
    legal: np.ndarray
    sizes: np.ndarray
    inbound: np.ndarray
    initial_violations: int
    size_deltas: np.ndarray
    inbound_deltas: np.ndarray
    partitions: np.ndarray
    positions: np.ndarray

    def partition_states(self, part):
        """Dense `(num_moves, num_parts)` sizes and distinct inbound counts after each move."""
        num_moves = len(self.violations)
        shape = (num_moves, part.num_parts)
        sizes = np.zeros(shape, dtype=INDEX)
        inbound = np.zeros(shape, dtype=INDEX)
        np.add.at(sizes, (self.positions, self.partitions), self.size_deltas)
        np.add.at(inbound, (self.positions, self.partitions), self.inbound_deltas)
        return part.part_sizes + np.cumsum(sizes, axis=0), part.part_inbound_counts + np.cumsum(inbound, axis=0)

def validate_sequence(events, part, pins_in, cons):
    """Counts, after every move of the sequence, how many partitions break the size or inbound limit.

    Inbound pin counts are followed per (partition, edge) starting from
    `pins_in`, and the distinct inbound count of a partition only changes
    when one of them crosses zero. Validity flips per partition are then
    summed over positions on top of the initial number of invalid partitions.
    """
    num_moves = events.num_moves
    partitions = events.size_partitions
    positions = events.size_positions

    size_starts = segment_starts(partitions)
    sizes = part.part_sizes[partitions] + segmented_cumsum(events.size_deltas, size_starts)

    pin_starts = segment_starts(events.pin_partitions, events.pin_edges)
    seeds = np.array(
        [pins_in.get(p, e) for p, e in zip(events.pin_partitions.tolist(), events.pin_edges.tolist())],
        dtype=INDEX,
    )
    after = seeds + segmented_cumsum(events.pin_deltas, pin_starts)
    before = after - events.pin_deltas
    transitions = (after > 0).astype(INDEX) - (before > 0).astype(INDEX)

    # every (partition, position) with a pin event also carries a size event
    width = max(num_moves, 1)
    size_keys = partitions * width + positions
    slots = np.searchsorted(size_keys, events.pin_partitions * width + events.pin_positions)
    inbound_deltas = np.zeros(len(size_keys), dtype=INDEX)
    np.add.at(inbound_deltas, slots, transitions)
    inbound = part.part_inbound_counts[partitions] + segmented_cumsum(inbound_deltas, size_starts)

    initial_valid = (part.part_sizes <= cons.max_size) & (part.part_inbound_counts <= cons.max_inbound)
    valid = (sizes <= cons.max_size) & (inbound <= cons.max_inbound)
    previous = np.empty(len(valid), dtype=bool)
    previous[size_starts] = initial_valid[partitions[size_starts]]
    previous[~size_starts] = valid[np.flatnonzero(~size_starts) - 1]
    flips = previous.astype(INDEX) - valid.astype(INDEX)

    initial_violations = int(np.count_nonzero(~initial_valid))
    violations = initial_violations + np.cumsum(np.bincount(positions, weights=flips, minlength=num_moves)).astype(INDEX)
    return SequenceCheck(
        violations=violations,
        legal=violations == 0,
        sizes=sizes,
        inbound=inbound,
        initial_violations=initial_violations,
        size_deltas=events.size_deltas,
        inbound_deltas=inbound_deltas,
        partitions=partitions,
        positions=positions,
    )
