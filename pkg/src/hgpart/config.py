import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from dataclasses_json import dataclass_json
from typing import Optional

from hgpart.errors import ConfigurationError

class Mode(enum.Enum):
    # Hard limits on partition size and distinct
    # inbound hyperedges, any number of partitions
    CONSTRAINED = "constrained"
    # Exactly k partitions of bounded size
    KWAY = "kway"

class MatchingStrategy(enum.Enum):
    OPTIMAL = "optimal"
    GREEDY = "greedy"

@dataclass_json
@dataclass
class Constraints:
    """
    :param omega: maximum partition size, `None` when unbounded
    :param delta: maximum number of distinct inbound hyperedges
    per partition, `None` when unbounded
    """
    omega: Optional[int] = None
    delta: Optional[int] = None

    @property
    def max_size(self):
        return math.inf if self.omega is None else self.omega

    @property
    def max_inbound(self):
        return math.inf if self.delta is None else self.delta

    @staticmethod
    def unbounded():
        return Constraints()

@dataclass_json
@dataclass
class CoarseningOptions:
    candidates: int = 4
    noise_fraction: float = 0.1
    batch_size: int = 1024
    # A level pairing fewer than this fraction of its
    # nodes ends the coarsening phase
    stall_fraction: float = 0.005
    matching: MatchingStrategy = MatchingStrategy.OPTIMAL
    leftover_pairing: bool = True

@dataclass_json
@dataclass
class RefinementOptions:
    passes: int = 16
    alpha: float = 1e-6
    beta: float = 1e-7
    window: int = 256
    chain_rounds: int = 16
    chaining: bool = True

@dataclass_json
@dataclass
class PartitionerConfig:
    mode: Mode = Mode.CONSTRAINED
    omega: Optional[int] = None
    delta: Optional[int] = None
    k: Optional[int] = None
    epsilon: float = 0.03
    seed: int = 0
    coarsening: CoarseningOptions = field(default_factory=CoarseningOptions)
    refinement: RefinementOptions = field(default_factory=RefinementOptions)
    kway_halt_threshold: int = 4096
    debug_checks: bool = False

    @staticmethod
    def constrained(omega, delta=None, **kwargs):
        return PartitionerConfig(mode=Mode.CONSTRAINED, omega=omega, delta=delta, **kwargs)

    @staticmethod
    def kway(k, epsilon=0.03, **kwargs):
        return PartitionerConfig(mode=Mode.KWAY, k=k, epsilon=epsilon, **kwargs)

    def validate(self):
        """Checks the configuration for values no run could accept.

        :raises ConfigurationError: naming the first offending field.
        """
        if self.mode == Mode.CONSTRAINED:
            if self.omega is not None and self.omega < 1:
                raise ConfigurationError(f"'omega' must be at least 1, got {self.omega}")
            if self.delta is not None and self.delta < 1:
                raise ConfigurationError(f"'delta' must be at least 1, got {self.delta}")
        elif self.mode == Mode.KWAY:
            if self.k is None or self.k < 2:
                raise ConfigurationError(f"'k' must be at least 2, got {self.k}")
            if self.epsilon < 0:
                raise ConfigurationError(f"'epsilon' must be non-negative, got {self.epsilon}")
            if self.kway_halt_threshold < 1:
                raise ConfigurationError("'kway_halt_threshold' must be positive")
        else:
            raise ConfigurationError(f"Unknown mode {self.mode!r}")

        if self.coarsening.candidates < 1:
            raise ConfigurationError("'candidates' must be at least 1")
        if self.coarsening.batch_size < 1:
            raise ConfigurationError("'batch_size' must be at least 1")
        if self.coarsening.noise_fraction < 0:
            raise ConfigurationError("'noise_fraction' must be non-negative")
        if self.refinement.passes < 0:
            raise ConfigurationError("'passes' must be non-negative")
        if self.refinement.window < 1 or self.refinement.chain_rounds < 0:
            raise ConfigurationError("'window' must be positive and 'chain_rounds' non-negative")

    def constraints(self, total_size):
        """The hard limits a run enforces.

        In k-way mode the size limit is derived from the total node size
        as floor((1 + epsilon) * total / k) and the inbound limit is lifted.
        """
        if self.mode == Mode.KWAY:
            # epsilon at its decimal value, floored exactly
            limit = (1 + Fraction(str(self.epsilon))) * int(total_size) // self.k
            return Constraints(omega=int(limit), delta=None)
        return Constraints(omega=self.omega, delta=self.delta)
