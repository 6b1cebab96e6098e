import enum

import numpy as np

from hgpart.errors import ConfigurationError
from hgpart.hypergraph import Hypergraph

class InstanceKind(enum.Enum):
    # Regular, mostly local fan-out between consecutive layers
    LAYERED = "layered"
    # Layered with destinations rewired to random layers
    SMALLWORLD = "smallworld"

def smallworld(layers, width, fanout, rewire=0.1, seed=0, *, window=None, weighted=False, max_weight=1):
    """Generates a layered instance whose destinations are rewired with probability `rewire`.

    Every node outside the last layer sources one hyperedge. Its `fanout`
    destinations are drawn without replacement from the `window` nodes of the
    next layer centered on its own position (the whole layer by default).
    Each destination is then replaced, with probability `rewire`, by a
    uniformly random node of the whole instance, unless that node is already
    a pin of the edge.

    :param weighted: draw integer edge weights uniformly from 1..max_weight
    """
    if layers < 1 or width < 1 or fanout < 1:
        raise ConfigurationError("'layers', 'width' and 'fanout' must be positive")
    if not 0.0 <= rewire <= 1.0:
        raise ConfigurationError(f"'rewire' must lie in [0, 1], got {rewire}")
    window = width if window is None else min(window, width)
    if window < 1:
        raise ConfigurationError("'window' must be positive")
    fanout = min(fanout, window)
    num_nodes = layers * width
    rng = np.random.default_rng(seed)

    offsets = np.arange(window) - window // 2
    edges = []
    for layer in range(layers - 1):
        for position in range(width):
            source = layer * width + position
            nearby = (layer + 1) * width + (position + offsets) % width
            destinations = rng.choice(nearby, size=fanout, replace=False).tolist()
            # both draws always happen so every rewire probability walks the same stream
            coins = rng.random(fanout)
            picks = rng.integers(num_nodes, size=fanout)
            for i in range(fanout):
                pick = int(picks[i])
                if coins[i] < rewire and pick != source and pick not in destinations:
                    destinations[i] = pick
            edges.append(([source], destinations))

    weights = None
    if weighted:
        weights = rng.integers(1, max_weight + 1, size=len(edges)).astype(np.float64)
    return Hypergraph.from_edges(num_nodes, edges, weights=weights)

def layered(layers, width, fanout, seed=0, *, window=None, weighted=False, max_weight=1):
    return smallworld(layers, width, fanout, rewire=0.0, seed=seed, window=window, weighted=weighted, max_weight=max_weight)

def generate_instance(kind, seed=0, **params):
    """Generates a synthetic instance of the given `InstanceKind` (or its name)."""
    kind = InstanceKind(kind) if not isinstance(kind, InstanceKind) else kind
    if kind == InstanceKind.LAYERED:
        params.pop("rewire", None)
        return layered(seed=seed, **params)
    return smallworld(seed=seed, **params)
