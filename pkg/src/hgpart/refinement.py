import math
from contextlib import nullcontext
from logging import log, INFO

import numpy as np

from hgpart.config import RefinementOptions
from hgpart.errors import LedgerMismatch
from hgpart.events import generate_events, validate_sequence
from hgpart.hypergraph import PinsMode, build_pins_matrix, check_ledgers, connectivity
from hgpart.moves import build_chains, in_sequence_gains, propose_moves
from hgpart.stats import PassStats

def best_landing_point(seq, check):
    """The legal position with the largest positive cumulative gain, the shortest on ties; -1 if none."""
    if len(seq) == 0:
        return -1
    cumulative = seq.cumulative_gains()
    eligible = check.legal & (cumulative > 0)
    if not eligible.any():
        return -1
    best = cumulative[eligible].max()
    return int(np.flatnonzero(eligible & (cumulative == best))[0])

def apply_moves(hg, inc, moves, part, pins, pins_in):
    """Applies `moves` in order, keeping the assignment, ledgers and both pins matrices in step."""
    for move in moves:
        n, source, destination = move.node, move.source, move.destination
        size = hg.node_sizes[n]
        part.assignment[n] = destination
        part.part_sizes[source] -= size
        part.part_sizes[destination] += size
        for e in inc.incident(n).tolist():
            pins.add(source, e, -1)
            pins.add(destination, e, 1)
        for e in inc.inbound(n).tolist():
            pins_in.add(source, e, -1)
            if pins_in.get(source, e) == 0:
                part.part_inbound_counts[source] -= 1
            pins_in.add(destination, e, 1)
            if pins_in.get(destination, e) == 1:
                part.part_inbound_counts[destination] += 1

def apply_best_prefix(hg, inc, seq, check, part, pins, pins_in, debug_checks=False):
    """Applies the sequence prefix ending at the best landing point.

    Nothing is applied when no legal prefix has positive cumulative gain.

    :param check: the `SequenceCheck` of `seq`
    :param debug_checks: recompute the ledgers and pins matrices afterwards
    :raises LedgerMismatch: if `debug_checks` finds a disagreement
    :return: the number of applied moves
    """
    landing = best_landing_point(seq, check)
    if landing < 0:
        return 0
    apply_moves(hg, inc, seq.moves[:landing + 1], part, pins, pins_in)
    if debug_checks:
        check_ledgers(hg, part)
        if pins != build_pins_matrix(hg, part, PinsMode.ALL):
            raise LedgerMismatch("Pins matrix disagrees with the assignment")
        if pins_in != build_pins_matrix(hg, part, PinsMode.INBOUND):
            raise LedgerMismatch("Inbound pins matrix disagrees with the assignment")
    return landing + 1

def refine_level(
    hg, inc, part, cons, *,
    options: RefinementOptions = None,
    debug_checks: bool = False,
    timer=None,
    log_progress: bool = False,
    level: int = 0,
):
    """Runs the refinement passes of one level on `part` in place.

    The first half of the passes (rounded up) may propose moves into
    partitions that would overflow, leaving it to the landing point to stay
    legal; the remaining passes only propose moves that fit. A relaxed pass
    that applies nothing skips ahead to the strict passes, and a strict pass
    that applies nothing ends the level.

    :param options: pass count and chaining parameters
    :param timer: an optional `PhaseTimer` collecting per-phase seconds
    :return: one `PassStats` per pass run
    """
    options = options if options is not None else RefinementOptions()
    phase = timer.phase if timer is not None else (lambda name: nullcontext())
    passes = options.passes
    relaxed = math.ceil(passes / 2)
    history = []

    with phase("pins"):
        pins = build_pins_matrix(hg, part, PinsMode.ALL)
        pins_in = build_pins_matrix(hg, part, PinsMode.INBOUND)

    index = 0
    while index < passes:
        enforce_size = index >= relaxed
        with phase("moves"):
            moves = propose_moves(hg, inc, part, pins, cons, enforce_size=enforce_size)
        with phase("chains"):
            seq = build_chains(
                moves, hg.node_sizes, inc.in_counts,
                alpha=options.alpha,
                beta=options.beta,
                window=options.window,
                rounds=options.chain_rounds,
                chaining=options.chaining,
            )
        with phase("sequence_gains"):
            in_sequence_gains(hg, inc, part, pins, seq)
        with phase("events"):
            check = validate_sequence(generate_events(hg, inc, seq), part, pins_in, cons)
        with phase("apply"):
            applied = apply_best_prefix(hg, inc, seq, check, part, pins, pins_in, debug_checks=debug_checks)

        stats = PassStats(
            index=index,
            enforce_size=enforce_size,
            proposed=len(seq),
            applied=applied,
            connectivity=connectivity(hg, part),
        )
        history.append(stats)
        if log_progress:
            log(INFO, f'Level {level} pass {index}: applied {applied}/{len(seq)} moves, connectivity {stats.connectivity}')

        if applied == 0:
            if enforce_size:
                break
            index = relaxed
            continue
        index += 1
    return history
