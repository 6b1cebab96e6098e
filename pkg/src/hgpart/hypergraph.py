import enum
import math
from dataclasses import dataclass, field
from dataclasses_json import dataclass_json
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from hgpart.config import Constraints
from hgpart.errors import LedgerMismatch, MalformedHypergraph

INDEX = np.int64

def segment_positions(offsets):
    """For a compressed layout, returns each entry's position inside its own segment."""
    lengths = np.diff(offsets)
    total = int(offsets[-1]) if len(offsets) else 0
    return np.arange(total, dtype=INDEX) - np.repeat(offsets[:-1], lengths)

def offsets_from_counts(counts):
    offsets = np.zeros(len(counts) + 1, dtype=INDEX)
    np.cumsum(counts, out=offsets[1:])
    return offsets

# MARK: Hypergraph

@dataclass(eq=False)
class Hypergraph:
    """A weighted directed hypergraph in compressed two-level form.

    Each hyperedge `e` owns the segment `pin_data[pin_offsets[e]:pin_offsets[e + 1]]`,
    whose first `src_counts[e]` entries are the source pins and the rest the
    destination pins. An undirected hyperedge has no sources.

    :param num_nodes: the number of nodes
    :param pin_offsets: `num_edges + 1` segment boundaries into `pin_data`
    :param pin_data: flat node id array, sources first within every segment
    :param src_counts: per-edge number of source pins
    :param edge_weights: per-edge positive weight
    :param node_sizes: per-node positive size (cluster cardinality on coarse levels)
    """
    num_nodes: int
    pin_offsets: np.ndarray
    pin_data: np.ndarray
    src_counts: np.ndarray
    edge_weights: np.ndarray
    node_sizes: np.ndarray

    @staticmethod
    def from_edges(num_nodes, edges, weights=None, node_sizes=None, validate=True):
        """Builds a hypergraph from `(sources, destinations)` pairs.

        :param num_nodes: the number of nodes
        :param edges: an iterable of `(sources, destinations)` node id sequences
        :param weights: optional per-edge weights (defaults to 1.0)
        :param node_sizes: optional per-node sizes (defaults to 1)
        :raises MalformedHypergraph: if the result breaks an invariant and `validate` is set
        """
        offsets = [0]
        data = []
        src_counts = []
        for sources, destinations in edges:
            sources = list(sources)
            destinations = list(destinations)
            data.extend(sources)
            data.extend(destinations)
            src_counts.append(len(sources))
            offsets.append(len(data))
        num_edges = len(src_counts)
        hg = Hypergraph(
            num_nodes=int(num_nodes),
            pin_offsets=np.asarray(offsets, dtype=INDEX),
            pin_data=np.asarray(data, dtype=INDEX),
            src_counts=np.asarray(src_counts, dtype=INDEX),
            edge_weights=np.ones(num_edges, dtype=np.float64) if weights is None else np.asarray(weights, dtype=np.float64),
            node_sizes=np.ones(num_nodes, dtype=INDEX) if node_sizes is None else np.asarray(node_sizes, dtype=INDEX),
        )
        if validate:
            hg.validate()
        return hg

    @property
    def num_edges(self):
        return len(self.src_counts)

    @property
    def num_pins(self):
        return len(self.pin_data)

    @property
    def edge_sizes(self):
        return np.diff(self.pin_offsets)

    @property
    def total_size(self):
        return int(self.node_sizes.sum())

    def pins(self, e):
        return self.pin_data[self.pin_offsets[e]:self.pin_offsets[e + 1]]

    def sources(self, e):
        start = self.pin_offsets[e]
        return self.pin_data[start:start + self.src_counts[e]]

    def destinations(self, e):
        return self.pin_data[self.pin_offsets[e] + self.src_counts[e]:self.pin_offsets[e + 1]]

    def pin_edges(self):
        """The owning edge id of every pin, aligned with `pin_data`."""
        return np.repeat(np.arange(self.num_edges, dtype=INDEX), self.edge_sizes)

    def pin_is_destination(self):
        return segment_positions(self.pin_offsets) >= np.repeat(self.src_counts, self.edge_sizes)

    def validate(self):
        """Checks every structural invariant.

        :raises MalformedHypergraph: describing the first violation found.
        """
        num_edges = self.num_edges
        if len(self.pin_offsets) != num_edges + 1 or self.pin_offsets[0] != 0 \
                or self.pin_offsets[-1] != len(self.pin_data):
            raise MalformedHypergraph("Pin offsets do not delimit the pin array")
        sizes = self.edge_sizes
        if np.any(sizes < 0):
            raise MalformedHypergraph("Pin offsets must be nondecreasing")
        if np.any(sizes == 0):
            raise MalformedHypergraph(f"Hyperedge {int(np.argmax(sizes == 0))} has no pins")
        if np.any(self.src_counts < 0) or np.any(self.src_counts > sizes):
            raise MalformedHypergraph("Source counts must lie between 0 and the hyperedge size")
        if len(self.pin_data) and (self.pin_data.min() < 0 or self.pin_data.max() >= self.num_nodes):
            raise MalformedHypergraph(f"Pin ids must lie in [0, {self.num_nodes})")
        if len(self.edge_weights) != num_edges:
            raise MalformedHypergraph("Expected one weight per hyperedge")
        if np.any(~np.isfinite(self.edge_weights)) or np.any(self.edge_weights <= 0):
            raise MalformedHypergraph("Hyperedge weights must be finite and positive")
        if len(self.node_sizes) != self.num_nodes or np.any(self.node_sizes < 1):
            raise MalformedHypergraph("Node sizes must be positive, one per node")
        keys = self.pin_edges() * max(self.num_nodes, 1) + self.pin_data
        if len(np.unique(keys)) != len(keys):
            raise MalformedHypergraph("A hyperedge lists the same pin more than once")

    def summary(self):
        return f'{self.num_nodes} nodes, {self.num_edges} edges, {self.num_pins} pins'

def disjoint_union(*hypergraphs):
    """Places the given hypergraphs side by side, renumbering nodes and edges in order."""
    node_base = 0
    pin_base = 0
    offsets = [np.zeros(1, dtype=INDEX)]
    data, src_counts, weights, sizes = [], [], [], []
    for hg in hypergraphs:
        offsets.append(hg.pin_offsets[1:] + pin_base)
        data.append(hg.pin_data + node_base)
        src_counts.append(hg.src_counts)
        weights.append(hg.edge_weights)
        sizes.append(hg.node_sizes)
        node_base += hg.num_nodes
        pin_base += hg.num_pins
    return Hypergraph(
        num_nodes=node_base,
        pin_offsets=np.concatenate(offsets).astype(INDEX),
        pin_data=np.concatenate(data).astype(INDEX) if data else np.zeros(0, dtype=INDEX),
        src_counts=np.concatenate(src_counts).astype(INDEX) if src_counts else np.zeros(0, dtype=INDEX),
        edge_weights=np.concatenate(weights).astype(np.float64) if weights else np.zeros(0),
        node_sizes=np.concatenate(sizes).astype(INDEX) if sizes else np.zeros(0, dtype=INDEX),
    )

# MARK: Incidence

@dataclass(eq=False)
class IncidenceIndex:
    """Per-node incident hyperedges, inbound ones first.

    :param inc_offsets: `num_nodes + 1` segment boundaries into `inc_data`
    :param inc_data: flat edge id array; each segment lists in(n) then out(n), ascending
    :param in_counts: per-node |in(n)|
    """
    inc_offsets: np.ndarray
    inc_data: np.ndarray
    in_counts: np.ndarray

    @property
    def num_nodes(self):
        return len(self.in_counts)

    @property
    def degrees(self):
        return np.diff(self.inc_offsets)

    def inbound(self, n):
        start = self.inc_offsets[n]
        return self.inc_data[start:start + self.in_counts[n]]

    def outbound(self, n):
        return self.inc_data[self.inc_offsets[n] + self.in_counts[n]:self.inc_offsets[n + 1]]

    def incident(self, n):
        return self.inc_data[self.inc_offsets[n]:self.inc_offsets[n + 1]]

def build_incidence(hg):
    """Builds the inbound-first incidence lists of `hg`, edge ids ascending within each sublist."""
    pin_edges = hg.pin_edges()
    is_outbound = ~hg.pin_is_destination()
    order = np.lexsort((pin_edges, is_outbound, hg.pin_data))
    degrees = np.bincount(hg.pin_data, minlength=hg.num_nodes).astype(INDEX)
    in_counts = np.bincount(hg.pin_data[~is_outbound], minlength=hg.num_nodes).astype(INDEX)
    return IncidenceIndex(
        inc_offsets=offsets_from_counts(degrees),
        inc_data=pin_edges[order].astype(INDEX),
        in_counts=in_counts,
    )

# MARK: Partitioning

def _distinct_inbound_counts(hg, assignment, num_parts):
    dst = hg.pin_is_destination()
    keys = assignment[hg.pin_data[dst]] * max(hg.num_edges, 1) + hg.pin_edges()[dst]
    unique_keys = np.unique(keys)
    return np.bincount(unique_keys // max(hg.num_edges, 1), minlength=num_parts).astype(INDEX)

@dataclass(eq=False)
class Partitioning:
    """A node to partition assignment with its size and inbound ledgers.

    :param assignment: per-node partition id
    :param part_sizes: per-partition total node size
    :param part_inbound_counts: per-partition number of distinct inbound hyperedges
    """
    assignment: np.ndarray
    part_sizes: np.ndarray
    part_inbound_counts: np.ndarray

    @staticmethod
    def from_assignment(hg, assignment, num_parts=None):
        assignment = np.asarray(assignment, dtype=INDEX)
        if len(assignment) != hg.num_nodes:
            raise MalformedHypergraph(f"Expected {hg.num_nodes} assignments, got {len(assignment)}")
        if len(assignment) and assignment.min() < 0:
            raise MalformedHypergraph("Partition ids must be non-negative")
        if num_parts is None:
            num_parts = int(assignment.max()) + 1 if len(assignment) else 0
        return Partitioning(
            assignment=assignment.copy(),
            part_sizes=np.bincount(assignment, weights=hg.node_sizes, minlength=num_parts).astype(INDEX),
            part_inbound_counts=_distinct_inbound_counts(hg, assignment, num_parts),
        )

    @property
    def num_parts(self):
        return len(self.part_sizes)

    @property
    def num_nonempty(self):
        return int(np.count_nonzero(self.part_sizes))

    def copy(self):
        return Partitioning(self.assignment.copy(), self.part_sizes.copy(), self.part_inbound_counts.copy())

def compact_assignment(assignment):
    """Renumbers partition ids onto the contiguous range of nonempty partitions, preserving order."""
    if len(assignment) == 0:
        return np.zeros(0, dtype=INDEX), 0
    ids, compact = np.unique(assignment, return_inverse=True)
    return compact.astype(INDEX), len(ids)

def check_ledgers(hg, part):
    """Recomputes the partition ledgers from scratch and compares them.

    :raises LedgerMismatch: if a size or distinct inbound count disagrees.
    """
    fresh = Partitioning.from_assignment(hg, part.assignment, num_parts=part.num_parts)
    if not np.array_equal(fresh.part_sizes, part.part_sizes):
        raise LedgerMismatch("Partition sizes ledger disagrees with the assignment")
    if not np.array_equal(fresh.part_inbound_counts, part.part_inbound_counts):
        raise LedgerMismatch("Distinct inbound ledger disagrees with the assignment")

# MARK: Metrics

def _spanned_counts(hg, labels):
    """Number of distinct labels among each hyperedge's pins."""
    labels = np.asarray(labels, dtype=INDEX)
    if hg.num_edges == 0:
        return np.zeros(0, dtype=INDEX)
    width = int(labels.max()) + 1 if len(labels) else 1
    keys = np.unique(hg.pin_edges() * width + labels[hg.pin_data])
    return np.bincount(keys // width, minlength=hg.num_edges).astype(INDEX)

def _assignment_of(part):
    return part.assignment if isinstance(part, Partitioning) else np.asarray(part, dtype=INDEX)

def connectivity(hg, part):
    """Total weight of hyperedge cuts, one per spanned partition beyond the first."""
    spanned = _spanned_counts(hg, _assignment_of(part))
    return math.fsum(hg.edge_weights * (spanned - 1))

def cut_net(hg, part):
    """Total weight of hyperedges spanning more than one partition."""
    spanned = _spanned_counts(hg, _assignment_of(part))
    return math.fsum(hg.edge_weights[spanned > 1])

def coarsening_score(hg, gamma):
    """Total weight of pins hidden inside clusters by the node to cluster map `gamma`."""
    spanned = _spanned_counts(hg, gamma)
    return math.fsum(hg.edge_weights * (hg.edge_sizes - spanned))

def connectivity_upper_bound(hg):
    """Connectivity with every node in its own partition; also score plus connectivity for any map."""
    return math.fsum(hg.edge_weights * (hg.edge_sizes - 1))

# MARK: Pins matrix

class PinsMode(enum.Enum):
    ALL = "all"
    INBOUND = "inbound"

class PinsMatrix:
    """Sparse per-edge pin counts by partition.

    In `PinsMode.ALL` an entry is pins(p, e), the number of pins of `e` in `p`;
    in `PinsMode.INBOUND` it is pins_in(p, e), counting destination pins only.
    Zero entries are never stored.
    """
    def __init__(self, mode, counts):
        self.mode = mode
        self.counts: List[Dict[int, int]] = counts

    @property
    def num_edges(self):
        return len(self.counts)

    def get(self, p, e):
        return self.counts[e].get(p, 0)

    def partitions(self, e):
        return self.counts[e]

    def add(self, p, e, delta):
        row = self.counts[e]
        value = row.get(p, 0) + delta
        if value < 0:
            raise LedgerMismatch(f"pins({p}, {e}) would become negative")
        if value == 0:
            row.pop(p, None)
        else:
            row[p] = value

    def copy(self):
        return PinsMatrix(self.mode, [dict(row) for row in self.counts])

    def __eq__(self, other):
        return isinstance(other, PinsMatrix) and self.mode == other.mode and self.counts == other.counts

def build_pins_matrix(hg, part, mode=PinsMode.ALL):
    """Counts, for every hyperedge, its pins per partition.

    :param part: the partitioning (or a bare assignment array)
    :param mode: `PinsMode.ALL` for pins(p, e), `PinsMode.INBOUND` for pins_in(p, e)
    """
    assignment = _assignment_of(part)
    pin_edges = hg.pin_edges()
    pins = hg.pin_data
    if mode == PinsMode.INBOUND:
        dst = hg.pin_is_destination()
        pin_edges = pin_edges[dst]
        pins = pins[dst]
    counts = [dict() for _ in range(hg.num_edges)]
    if len(pins):
        width = int(assignment.max()) + 1
        keys, multiplicity = np.unique(pin_edges * width + assignment[pins], return_counts=True)
        for e, p, c in zip((keys // width).tolist(), (keys % width).tolist(), multiplicity.tolist()):
            counts[e][p] = c
    return PinsMatrix(mode, counts)

# MARK: Validation

class ViolationKind(enum.Enum):
    SIZE = "size"
    INBOUND = "inbound"

@dataclass_json
@dataclass
class Violation:
    partition: int
    kind: ViolationKind
    measured: int
    limit: int

@dataclass_json
@dataclass
class ValidationReport:
    num_partitions: int
    valid: bool = True
    connectivity: float = 0.0
    cut_net: float = 0.0
    violations: List[Violation] = field(default_factory=list)

def validate_partitioning(hg, part, cons: Constraints):
    """Checks every partition against the size and inbound limits, from scratch.

    The check never reads the ledgers stored on `part`, so it can be
    used to audit them.

    :return: a `ValidationReport` listing each violating partition with its measured value
    """
    assignment = _assignment_of(part)
    if len(assignment) != hg.num_nodes:
        raise MalformedHypergraph(f"Expected {hg.num_nodes} assignments, got {len(assignment)}")
    num_parts = int(assignment.max()) + 1 if len(assignment) else 0
    sizes = np.bincount(assignment, weights=hg.node_sizes, minlength=num_parts).astype(INDEX)
    inbound = _distinct_inbound_counts(hg, assignment, num_parts)
    report = ValidationReport(
        num_partitions=int(np.count_nonzero(sizes)),
        connectivity=connectivity(hg, assignment),
        cut_net=cut_net(hg, assignment),
    )
    for p in range(num_parts):
        if sizes[p] > cons.max_size:
            report.violations.append(Violation(p, ViolationKind.SIZE, int(sizes[p]), cons.omega))
        if inbound[p] > cons.max_inbound:
            report.violations.append(Violation(p, ViolationKind.INBOUND, int(inbound[p]), cons.delta))
    report.valid = not report.violations
    return report
