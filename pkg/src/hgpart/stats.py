import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from dataclasses_json import dataclass_json
from typing import Dict, List, Optional

from hgpart.config import PartitionerConfig

SCHEMA_VERSION = 1

TIMING_CATEGORIES = (
    "neighbors",
    "candidates",
    "matching",
    "contraction",
    "initial_partitioning",
    "pins",
    "moves",
    "chains",
    "sequence_gains",
    "events",
    "apply",
)

class PhaseTimer:
    """Accumulates wall-clock seconds per phase category."""
    def __init__(self):
        self.timings: Dict[str, float] = {name: 0.0 for name in TIMING_CATEGORIES}

    @contextmanager
    def phase(self, name):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] += time.perf_counter() - start

@dataclass_json
@dataclass
class PassStats:
    index: int
    enforce_size: bool
    proposed: int
    applied: int
    connectivity: float

@dataclass_json
@dataclass
class LevelStats:
    level: int
    num_nodes: int
    num_edges: int
    num_pins: int
    # Fraction of this level's nodes that were paired
    # into the next coarser level, 0 for the coarsest
    matched_fraction: float = 0.0
    passes: List[PassStats] = field(default_factory=list)

@dataclass_json
@dataclass
class RunStats:
    config: PartitionerConfig
    num_nodes: int
    num_edges: int
    num_pins: int
    num_partitions: int = 0
    connectivity: float = 0.0
    cut_net: float = 0.0
    omega: Optional[int] = None
    delta: Optional[int] = None
    levels: List[LevelStats] = field(default_factory=list)
    timings: Dict[str, float] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def level(self, index):
        """The record of level `index`, `KeyError` if it was never reached."""
        for record in self.levels:
            if record.level == index:
                return record
        raise KeyError(index)
