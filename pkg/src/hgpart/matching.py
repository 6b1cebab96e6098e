import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from hgpart.config import MatchingStrategy
from hgpart.errors import ProposalStructureError
from hgpart.hypergraph import INDEX

@dataclass(eq=False)
class MatchState:
    """Per-node dynamic programming values and the resulting matching of one round.

    :param ss0: best subtree score when the node is not matched to its target
    :param ss1: best subtree score when it is (-inf for nodes without a target)
    :param best_gain: the largest ss1 - ss0 among the node's children, -inf if childless
    :param best_child: the child realizing `best_gain`, -1 if childless
    :param match: partner id per node, -1 when unmatched
    """
    ss0: np.ndarray
    ss1: np.ndarray
    best_gain: np.ndarray
    best_child: np.ndarray
    match: np.ndarray

    @property
    def pairs(self):
        return [(int(n), int(m)) for n, m in enumerate(self.match) if n < m]

def matched_score(targets, scores, match):
    """Total edge score of the matched pairs of one proposal round."""
    total = []
    for n, m in enumerate(match):
        if m > n:
            total.append(scores[n] if targets[n] == m else scores[m])
    return math.fsum(total)

# MARK: Structure

def _restrict(targets, prior_matched):
    """Drops the targets of already matched nodes and every target pointing at one."""
    targets = np.asarray(targets, dtype=INDEX).copy()
    if prior_matched is None:
        return targets
    prior = np.asarray(prior_matched, dtype=bool)
    targets[prior] = -1
    pointing = targets >= 0
    pointing[pointing] = prior[targets[pointing]]
    targets[pointing] = -1
    return targets

def _peel(targets):
    """Orders the tree nodes of a pseudo-forest leaves first.

    :return: `(order, roots)` where `roots` holds the nodes left on cycles
    :raises ProposalStructureError: if a cycle is not a mutual pair
    """
    num_nodes = len(targets)
    defined = targets >= 0
    indegree = np.bincount(targets[defined], minlength=num_nodes)
    queue = deque(np.flatnonzero(indegree == 0).tolist())
    order = []
    while queue:
        n = queue.popleft()
        order.append(n)
        t = targets[n]
        if t >= 0:
            indegree[t] -= 1
            if indegree[t] == 0:
                queue.append(int(t))
    peeled = np.zeros(num_nodes, dtype=bool)
    peeled[order] = True
    roots = np.flatnonzero(~peeled)
    for n in roots:
        if targets[targets[n]] != n:
            raise ProposalStructureError(f"Node {n} lies on a proposal cycle longer than two")
    return order, roots

def find_roots(targets, prior_matched=None):
    """The nodes lying on the mutual pairs of one proposal round.

    :raises ProposalStructureError: if the round holds a longer cycle
    """
    _, roots = _peel(_restrict(targets, prior_matched))
    return set(roots.tolist())

# MARK: Solvers

def solve_matching(targets, scores, prior_matched=None):
    """Computes a maximum total score matching of one proposal round.

    Children are combined bottom-up in peel order; root pairs are decided on
    their lower id and then every node, from the roots down, either stays
    with the partner its parent chose or takes its best child when that
    child's gain is positive. Child ties go to the higher id.

    :param prior_matched: boolean mask of nodes matched in earlier rounds
    """
    targets = _restrict(targets, prior_matched)
    scores = np.asarray(scores, dtype=np.float64)
    num_nodes = len(targets)
    order, roots = _peel(targets)

    sum0 = np.zeros(num_nodes)
    ss0 = np.zeros(num_nodes)
    ss1 = np.full(num_nodes, -math.inf)
    best_gain = np.full(num_nodes, -math.inf)
    best_child = np.full(num_nodes, -1, dtype=INDEX)
    match = np.full(num_nodes, -1, dtype=INDEX)

    for n in order:
        ss0[n] = sum0[n] + max(0.0, best_gain[n])
        t = targets[n]
        if t < 0:
            continue
        ss1[n] = scores[n] + sum0[n]
        sum0[t] += ss0[n]
        gain = ss1[n] - ss0[n]
        if gain > best_gain[t] or (gain == best_gain[t] and n > best_child[t]):
            best_gain[t] = gain
            best_child[t] = n

    for n in roots:
        ss0[n] = sum0[n] + max(0.0, best_gain[n])
    for a in roots:
        b = targets[a]
        if a > b:
            continue
        ss1[a] = ss1[b] = scores[a] + sum0[a] + sum0[b]
        if ss1[a] > ss0[a] + ss0[b]:
            match[a], match[b] = b, a
            continue
        for n in (a, b):
            if best_gain[n] > 0:
                match[n], match[best_child[n]] = best_child[n], n

    for n in reversed(order):
        if match[n] < 0 and best_gain[n] > 0:
            match[n], match[best_child[n]] = best_child[n], n

    return MatchState(ss0=ss0, ss1=ss1, best_gain=best_gain, best_child=best_child, match=match)

def solve_greedy(targets, scores, prior_matched=None):
    """Matches mutual pairs outright, then lets every free node claim its best free child.

    Serves as the baseline the exact solver is compared against.
    """
    targets = _restrict(targets, prior_matched)
    scores = np.asarray(scores, dtype=np.float64)
    num_nodes = len(targets)
    order, roots = _peel(targets)
    match = np.full(num_nodes, -1, dtype=INDEX)
    for a in roots:
        match[a] = targets[a]

    children = [[] for _ in range(num_nodes)]
    for n in order:
        if targets[n] >= 0:
            children[targets[n]].append(n)

    best_gain = np.full(num_nodes, -math.inf)
    best_child = np.full(num_nodes, -1, dtype=INDEX)
    for n in list(roots) + list(reversed(order)):
        if match[n] >= 0:
            continue
        free = [c for c in children[n] if match[c] < 0]
        if free:
            c = max(free, key=lambda child: (scores[child], child))
            best_gain[n], best_child[n] = scores[c], c
            match[n], match[c] = c, n

    return MatchState(
        ss0=np.zeros(num_nodes),
        ss1=np.full(num_nodes, -math.inf),
        best_gain=best_gain,
        best_child=best_child,
        match=match,
    )

def run_rounds(pg, strategy=MatchingStrategy.OPTIMAL):
    """Matches over every round of a `ProposalGraph`, each round seeing only still unmatched nodes.

    :return: the final per-node partner array, -1 for unmatched nodes
    """
    solve = solve_matching if strategy == MatchingStrategy.OPTIMAL else solve_greedy
    match = np.full(pg.num_nodes, -1, dtype=INDEX)
    for i in range(pg.rounds):
        targets, scores = pg.round(i)
        state = solve(targets, scores, prior_matched=match >= 0)
        fresh = state.match >= 0
        match[fresh] = state.match[fresh]
    return match
