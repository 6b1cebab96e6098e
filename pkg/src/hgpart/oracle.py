"""Brute-force references for the partitioner.

Everything here recomputes from plain Python sets and the raw edge lists,
without going through the compressed indices, pins matrices or ledgers
the partitioner maintains.
"""
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from hgpart.errors import InfeasibleInstance, OracleLimitExceeded
from hgpart.hypergraph import Partitioning

MATCHING_NODE_LIMIT = 20
SEQUENCE_MOVE_LIMIT = 1000

def _edge_lists(hg):
    return [
        (set(hg.sources(e).tolist()), set(hg.destinations(e).tolist()), float(hg.edge_weights[e]))
        for e in range(hg.num_edges)
    ]

def _assignment_list(part):
    assignment = part.assignment if isinstance(part, Partitioning) else part
    return [int(p) for p in assignment]

# MARK: Metrics

def scratch_connectivity(hg, assignment):
    assignment = _assignment_list(assignment)
    total = 0.0
    for sources, destinations, weight in _edge_lists(hg):
        spanned = {assignment[n] for n in sources | destinations}
        total += weight * (len(spanned) - 1)
    return total

def scratch_cut_net(hg, assignment):
    assignment = _assignment_list(assignment)
    total = 0.0
    for sources, destinations, weight in _edge_lists(hg):
        if len({assignment[n] for n in sources | destinations}) > 1:
            total += weight
    return total

def scratch_inbound_sets(hg, assignment):
    """Per partition, the set of edges with a destination pin inside it."""
    assignment = _assignment_list(assignment)
    inbound: Dict[int, set] = {}
    for e, (_, destinations, _) in enumerate(_edge_lists(hg)):
        for n in destinations:
            inbound.setdefault(assignment[n], set()).add(e)
    return inbound

def inbound_edges(hg, n):
    return {e for e, (_, destinations, _) in enumerate(_edge_lists(hg)) if n in destinations}

def inbound_union_size(hg, n, m):
    return len(inbound_edges(hg, n) | inbound_edges(hg, m))

# MARK: Matching

def brute_matching(targets, scores):
    """Finds a maximum total score matching of a proposal round by exhaustive search.

    An edge joins `n` and `targets[n]` with score `scores[n]`; a mutual pair
    counts once, with the score of its lower id.

    :return: `(best total, sorted list of matched pairs)`
    :raises OracleLimitExceeded: beyond `MATCHING_NODE_LIMIT` nodes
    """
    num_nodes = len(targets)
    if num_nodes > MATCHING_NODE_LIMIT:
        raise OracleLimitExceeded(f"Exhaustive matching is limited to {MATCHING_NODE_LIMIT} nodes, got {num_nodes}")
    weight = {}
    for n in range(num_nodes):
        t = int(targets[n])
        if t < 0:
            continue
        pair = (min(n, t), max(n, t))
        if pair not in weight or n == pair[0]:
            weight[pair] = float(scores[n])
    adjacent = [[] for _ in range(num_nodes)]
    for a, b in weight:
        adjacent[a].append(b)
        adjacent[b].append(a)

    def search(used):
        free = next((n for n in range(num_nodes) if not used[n]), None)
        if free is None:
            return 0.0, []
        used[free] = True
        best_total, best_pairs = search(used)
        for other in adjacent[free]:
            if used[other]:
                continue
            used[other] = True
            total, pairs = search(used)
            pair = (min(free, other), max(free, other))
            if total + weight[pair] > best_total:
                best_total, best_pairs = total + weight[pair], pairs + [pair]
            used[other] = False
        used[free] = False
        return best_total, best_pairs

    total, pairs = search([False] * num_nodes)
    return total, sorted(pairs)

# MARK: Move sequences

@dataclass
class SimulatedState:
    connectivity: float
    sizes: List[int] = field(default_factory=list)
    inbound: List[int] = field(default_factory=list)
    violations: int = 0

def _simulated_state(hg, assignment, num_parts, cons):
    sizes = [0] * num_parts
    for n, p in enumerate(assignment):
        sizes[p] += int(hg.node_sizes[n])
    inbound_sets = scratch_inbound_sets(hg, assignment)
    inbound = [len(inbound_sets.get(p, ())) for p in range(num_parts)]
    violations = 0
    if cons is not None:
        violations = sum(1 for p in range(num_parts) if sizes[p] > cons.max_size or inbound[p] > cons.max_inbound)
    return SimulatedState(scratch_connectivity(hg, assignment), sizes, inbound, violations)

def simulate_sequence(hg, part, moves, cons=None, num_parts=None):
    """Applies `moves` one by one, recomputing the whole state from scratch after each.

    :param moves: `Move`s or `(node, destination)` pairs
    :param cons: constraints for the violation counts, none counted when omitted
    :return: the initial state followed by the state after every move
    """
    if len(moves) > SEQUENCE_MOVE_LIMIT:
        raise OracleLimitExceeded(f"Sequence simulation is limited to {SEQUENCE_MOVE_LIMIT} moves")
    assignment = _assignment_list(part)
    steps = [(m.node, m.destination) if hasattr(m, "node") else (int(m[0]), int(m[1])) for m in moves]
    if num_parts is None:
        num_parts = max(assignment + [d for _, d in steps], default=-1) + 1
    states = [_simulated_state(hg, assignment, num_parts, cons)]
    for node, destination in steps:
        assignment[node] = destination
        states.append(_simulated_state(hg, assignment, num_parts, cons))
    return states

# MARK: Baseline

def one_pass(hg, cons):
    """Fills one partition after the other in node id order.

    A node joins the current partition when the size and inbound limits
    still hold with it, and opens the next partition otherwise.

    :raises InfeasibleInstance: when a node alone breaks a limit
    """
    inbound = [set() for _ in range(hg.num_nodes)]
    for e, (_, destinations, _) in enumerate(_edge_lists(hg)):
        for n in destinations:
            inbound[n].add(e)
    assignment = []
    current, size, edges = 0, 0, set()
    for n in range(hg.num_nodes):
        node_size = int(hg.node_sizes[n])
        if node_size > cons.max_size or len(inbound[n]) > cons.max_inbound:
            raise InfeasibleInstance(f"Node {n} alone breaks the partition limits")
        if assignment and (size + node_size > cons.max_size or len(edges | inbound[n]) > cons.max_inbound):
            current, size, edges = current + 1, 0, set()
        assignment.append(current)
        size += node_size
        edges |= inbound[n]
    return Partitioning.from_assignment(hg, np.asarray(assignment, dtype=np.int64))
