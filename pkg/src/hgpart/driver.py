import math
from dataclasses import dataclass
from logging import log, INFO
from typing import List, Optional

import numpy as np

from hgpart.coarsening import leftover_pairing, propose_candidates
from hgpart.config import Mode, PartitionerConfig
from hgpart.contraction import LevelMap, build_gamma, coarsen_hypergraph, coarsen_neighbors
from hgpart.errors import ConfigurationError, InfeasibleInstance
from hgpart.hypergraph import (
    INDEX,
    Hypergraph,
    IncidenceIndex,
    Partitioning,
    build_incidence,
    compact_assignment,
    connectivity,
    cut_net,
)
from hgpart.matching import run_rounds
from hgpart.neighborhood import flag_purged, materialize_neighbors
from hgpart.refinement import refine_level
from hgpart.stats import LevelStats, PhaseTimer, RunStats

@dataclass(eq=False)
class Level:
    hg: Hypergraph
    inc: IncidenceIndex
    # Map to the next coarser level, None on the coarsest one
    lm: Optional[LevelMap] = None

class LevelStack:
    """The hypergraphs of every level, level 0 being the input."""
    def __init__(self, hg, inc):
        self.levels: List[Level] = [Level(hg, inc)]

    def __len__(self):
        return len(self.levels)

    def __getitem__(self, index):
        return self.levels[index]

    @property
    def coarsest(self):
        return self.levels[-1]

    def push(self, lm, hg, inc):
        self.levels[-1].lm = lm
        self.levels.append(Level(hg, inc))

def project(part, lm, fine_hg):
    """Carries a partitioning one level down: every fine node joins the partition of its cluster."""
    return Partitioning.from_assignment(fine_hg, part.assignment[lm.gamma], num_parts=part.num_parts)

def first_fit_decreasing(sizes, k, max_size):
    """Packs nodes into `k` bins, largest first, each into the currently lightest bin.

    Ties go to the lower node id and the lower bin id.

    :return: the per-node bin array, or `None` if a bin would exceed `max_size`
    """
    order = np.lexsort((np.arange(len(sizes)), -np.asarray(sizes)))
    loads = np.zeros(k, dtype=INDEX)
    assignment = np.zeros(len(sizes), dtype=INDEX)
    for n in order.tolist():
        b = int(np.argmin(loads))
        if loads[b] + sizes[n] > max_size:
            return None
        loads[b] += sizes[n]
        assignment[n] = b
    return assignment

class Partitioner:
    def __init__(self, config: PartitionerConfig = None, *, log_progress: bool = False):
        """Constructs a new partitioner

        :param config: the run configuration (defaults to unconstrained)
        :param log_progress: whether logging should occur for each level and refinement pass
        """
        self.config = config if config is not None else PartitionerConfig()
        self.log_progress = log_progress
        self.timer = PhaseTimer()

    def run(self, hg):
        """Partitions `hg` according to the configured mode.

        :return: `(partitioning, stats)`; partition ids are contiguous
        :raises InfeasibleInstance: when the constraints admit no partitioning
        :raises ConfigurationError: when the configuration is invalid
        """
        self.config.validate()
        self.timer = PhaseTimer()
        if self.config.mode == Mode.KWAY:
            return self._run_kway(hg)
        return self._run_constrained(hg)

    # MARK: Modes

    def _run_constrained(self, hg):
        cfg = self.config
        cons = cfg.constraints(hg.total_size)
        inc = build_incidence(hg)
        self._check_feasible(hg, inc, cons)
        stats = self._new_stats(hg, cons)

        target = 1 if cons.omega is None else math.ceil(hg.total_size / cons.omega)
        stack = self._coarsen(hg, inc, cons, stats, lambda level_hg: level_hg.num_nodes > target)

        with self.timer.phase("initial_partitioning"):
            coarsest = stack.coarsest
            part = Partitioning.from_assignment(coarsest.hg, np.arange(coarsest.hg.num_nodes, dtype=INDEX))
        part = self._uncoarsen(stack, len(stack) - 1, part, cons, stats)
        return self._finish(hg, part, stats)

    def _run_kway(self, hg):
        cfg = self.config
        if hg.num_nodes < cfg.k:
            raise InfeasibleInstance(f"Cannot split {hg.num_nodes} nodes into {cfg.k} partitions")
        cons = cfg.constraints(hg.total_size)
        inc = build_incidence(hg)
        stats = self._new_stats(hg, cons)

        floor = max(cfg.kway_halt_threshold, 2 * cfg.k)
        stack = self._coarsen(hg, inc, cons, stats, lambda level_hg: level_hg.num_nodes >= floor)

        with self.timer.phase("initial_partitioning"):
            start, assignment = len(stack) - 1, None
            while start >= 0:
                level_hg = stack[start].hg
                assignment = first_fit_decreasing(level_hg.node_sizes, cfg.k, cons.max_size)
                if assignment is not None:
                    break
                if self.log_progress:
                    log(INFO, f'Level {start}: clusters do not pack into {cfg.k} partitions, descending')
                start -= 1
            if assignment is None:
                raise InfeasibleInstance(f"No packing of the nodes into {cfg.k} partitions of size {cons.omega}")
            part = Partitioning.from_assignment(stack[start].hg, assignment, num_parts=cfg.k)
        part = self._uncoarsen(stack, start, part, cons, stats)
        return self._finish(hg, part, stats, compact=False)

    # MARK: Phases

    def _check_feasible(self, hg, inc, cons):
        oversized = np.flatnonzero(hg.node_sizes > cons.max_size)
        if len(oversized):
            n = int(oversized[0])
            raise InfeasibleInstance(f"Node {n} of size {hg.node_sizes[n]} exceeds the size limit {cons.omega}")
        overloaded = np.flatnonzero(inc.in_counts > cons.max_inbound)
        if len(overloaded):
            n = int(overloaded[0])
            raise InfeasibleInstance(f"Node {n} has {inc.in_counts[n]} inbound hyperedges, above the limit {cons.delta}")

    def _coarsen(self, hg, inc, cons, stats, keep_going):
        """Builds coarser levels while `keep_going(current hypergraph)` holds and pairs are still found."""
        cfg = self.config
        options = cfg.coarsening
        with self.timer.phase("neighbors"):
            ns = materialize_neighbors(hg, inc)
        stack = LevelStack(hg, inc)
        stats.levels.append(self._level_stats(0, hg))

        while keep_going(stack.coarsest.hg):
            level = len(stack) - 1
            current = stack.coarsest
            with self.timer.phase("candidates"):
                pg = propose_candidates(
                    current.hg, current.inc, ns, cons,
                    pi=options.candidates,
                    seed=cfg.seed + level,
                    noise_fraction=options.noise_fraction,
                    batch_size=options.batch_size,
                )
                flag_purged(ns, pg.rejected.tolist())
            with self.timer.phase("matching"):
                match = run_rounds(pg, options.matching)
                if options.leftover_pairing:
                    stranded = pg.without_candidates()
                    stranded = stranded[match[stranded] < 0]
                    for a, b in leftover_pairing(current.hg, current.inc, cons, stranded):
                        match[a], match[b] = b, a

            num_matched = int(np.count_nonzero(match >= 0))
            fraction = num_matched / current.hg.num_nodes
            stats.levels[level].matched_fraction = fraction
            if self.log_progress:
                log(INFO, f'Level {level}: {current.hg.summary()}, matched {fraction:.1%} of nodes')
            if num_matched == 0:
                break

            with self.timer.phase("contraction"):
                lm = build_gamma(match, current.hg.num_nodes, level=level)
                coarse, coarse_inc = coarsen_hypergraph(current.hg, current.inc, lm)
                ns = coarsen_neighbors(ns, lm, coarse)
            stack.push(lm, coarse, coarse_inc)
            stats.levels.append(self._level_stats(level + 1, coarse))
            if fraction < options.stall_fraction:
                break
        return stack

    def _uncoarsen(self, stack, start, part, cons, stats):
        """Refines on level `start`, then projects and refines on every finer level."""
        cfg = self.config
        for level in range(start, -1, -1):
            current = stack[level]
            if level < start:
                part = project(part, current.lm, current.hg)
            stats.levels[level].passes = refine_level(
                current.hg, current.inc, part, cons,
                options=cfg.refinement,
                debug_checks=cfg.debug_checks,
                timer=self.timer,
                log_progress=self.log_progress,
                level=level,
            )
        return part

    def _finish(self, hg, part, stats, compact=True):
        if compact:
            assignment, _ = compact_assignment(part.assignment)
            part = Partitioning.from_assignment(hg, assignment)
        stats.num_partitions = part.num_nonempty
        stats.connectivity = connectivity(hg, part)
        stats.cut_net = cut_net(hg, part)
        stats.timings = dict(self.timer.timings)
        if self.log_progress:
            log(INFO, f'{stats.num_partitions} partitions, connectivity {stats.connectivity}, cut-net {stats.cut_net}')
        return part, stats

    def _new_stats(self, hg, cons):
        return RunStats(
            config=self.config,
            num_nodes=hg.num_nodes,
            num_edges=hg.num_edges,
            num_pins=hg.num_pins,
            omega=cons.omega,
            delta=cons.delta,
        )

    @staticmethod
    def _level_stats(level, hg):
        return LevelStats(level=level, num_nodes=hg.num_nodes, num_edges=hg.num_edges, num_pins=hg.num_pins)

def partition_constrained(hg, cfg, *, log_progress=False):
    """Partitions `hg` into as few partitions as the size and inbound limits of `cfg` allow, minimizing connectivity.

    :return: `(partitioning, stats)`
    """
    if cfg.mode != Mode.CONSTRAINED:
        raise ConfigurationError(f"Expected a constrained configuration, got mode {cfg.mode.value!r}")
    return Partitioner(cfg, log_progress=log_progress).run(hg)

def partition_kway(hg, cfg, *, log_progress=False):
    """Partitions `hg` into exactly `cfg.k` balanced partitions.

    :return: `(partitioning, stats)`
    """
    if cfg.mode != Mode.KWAY:
        raise ConfigurationError(f"Expected a k-way configuration, got mode {cfg.mode.value!r}")
    return Partitioner(cfg, log_progress=log_progress).run(hg)
