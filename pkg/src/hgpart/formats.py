import enum
import math
from pathlib import Path

import numpy as np

from hgpart.errors import HypergraphFormatError, MalformedHypergraph
from hgpart.hypergraph import INDEX, Hypergraph, compact_assignment

class FileFormat(enum.Enum):
    # Directed: every edge line carries its source count
    # before the pins, sources listed first
    DHGR = "dhgr"
    # Plain hMETIS, read as undirected edges
    HGR = "hgr"

    @staticmethod
    def for_path(path):
        return FileFormat.HGR if Path(path).suffix == ".hgr" else FileFormat.DHGR

# Header weight codes, as in hMETIS
EDGE_WEIGHTS = 1
NODE_WEIGHTS = 10
WEIGHT_CODES = (0, EDGE_WEIGHTS, NODE_WEIGHTS, NODE_WEIGHTS + EDGE_WEIGHTS)

def _content_lines(text):
    """Yields `(line number, stripped line)` for every line that is not a comment."""
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if line.startswith('%'):
            continue
        yield number, line

def _parse_int(token, what, path, number):
    try:
        return int(token)
    except ValueError as exc:
        raise HypergraphFormatError(f"Expected an integer {what}, got {token!r}", path, number) from exc

def _parse_weight(token, path, number):
    try:
        weight = float(token)
    except ValueError as exc:
        raise HypergraphFormatError(f"Expected a numeric weight, got {token!r}", path, number) from exc
    if not math.isfinite(weight) or weight <= 0:
        raise HypergraphFormatError(f"Hyperedge weight must be finite and positive, got {token}", path, number)
    return weight

def read_hypergraph(path, format=None):
    """Reads a hypergraph file.

    The header is `|E| |N| [fmt]`, with `fmt` one of 0, 1 (edge weights),
    10 (node weights) or 11 (both). Each edge line holds the optional weight,
    then, for `dhgr` only, the number of sources, then 1-based pins with the
    sources first. With node weights, `|N|` size lines follow the edges.
    `hgr` edges have no sources. Lines starting with `%` are ignored.

    :param format: a `FileFormat`, inferred from the suffix when omitted
    :raises HypergraphFormatError: with the offending line number
    """
    path = Path(path)
    format = format if format is not None else FileFormat.for_path(path)
    directed = format == FileFormat.DHGR
    try:
        text = path.read_text()
    except OSError as exc:
        raise HypergraphFormatError(f"Cannot read file: {exc.strerror}", path) from exc

    lines = _content_lines(text)
    number, header = next(((n, line) for n, line in lines if line), (None, None))
    if header is None:
        raise HypergraphFormatError("Missing header line", path)
    fields = header.split()
    if len(fields) not in (2, 3):
        raise HypergraphFormatError("Header must read '|E| |N| [fmt]'", path, number)
    num_edges = _parse_int(fields[0], "edge count", path, number)
    num_nodes = _parse_int(fields[1], "node count", path, number)
    code = _parse_int(fields[2], "weight code", path, number) if len(fields) == 3 else 0
    if num_edges < 0 or num_nodes < 0:
        raise HypergraphFormatError("Edge and node counts must be non-negative", path, number)
    if code not in WEIGHT_CODES:
        raise HypergraphFormatError(f"Unknown weight code {code}", path, number)
    has_edge_weights = code % NODE_WEIGHTS == EDGE_WEIGHTS
    has_node_weights = code >= NODE_WEIGHTS

    edges, weights = [], []
    while len(edges) < num_edges:
        number, line = next(lines, (None, None))
        if line is None:
            raise HypergraphFormatError(f"Expected {num_edges} hyperedges, found {len(edges)}", path)
        tokens = line.split()
        if has_edge_weights:
            if not tokens:
                raise HypergraphFormatError("Empty hyperedge line", path, number)
            weights.append(_parse_weight(tokens[0], path, number))
            tokens = tokens[1:]
        num_sources = 0
        if directed:
            if not tokens:
                raise HypergraphFormatError("Empty hyperedge line", path, number)
            num_sources = _parse_int(tokens[0], "source count", path, number)
            tokens = tokens[1:]
        pins = [_parse_int(token, "pin", path, number) - 1 for token in tokens]
        if not pins:
            raise HypergraphFormatError("Hyperedge has no pins", path, number)
        if not 0 <= num_sources <= len(pins):
            raise HypergraphFormatError(f"Source count {num_sources} does not fit {len(pins)} pins", path, number)
        for pin in pins:
            if not 0 <= pin < num_nodes:
                raise HypergraphFormatError(f"Pin {pin + 1} is outside 1..{num_nodes}", path, number)
        if len(set(pins)) != len(pins):
            raise HypergraphFormatError("Hyperedge lists a pin more than once", path, number)
        edges.append((pins[:num_sources], pins[num_sources:]))

    node_sizes = None
    if has_node_weights:
        node_sizes = []
        while len(node_sizes) < num_nodes:
            number, line = next(lines, (None, None))
            if line is None:
                raise HypergraphFormatError(f"Expected {num_nodes} node weights, found {len(node_sizes)}", path)
            size = _parse_int(line, "node weight", path, number)
            if size < 1:
                raise HypergraphFormatError(f"Node weight must be positive, got {size}", path, number)
            node_sizes.append(size)

    for number, line in lines:
        if line:
            raise HypergraphFormatError("Unexpected content after the last record", path, number)

    try:
        return Hypergraph.from_edges(num_nodes, edges, weights=weights or None, node_sizes=node_sizes)
    except MalformedHypergraph as exc:
        raise HypergraphFormatError(str(exc), path) from exc

def _format_weight(weight):
    weight = float(weight)
    return str(int(weight)) if weight.is_integer() else repr(weight)

def write_hypergraph(hg, path, format=FileFormat.DHGR):
    """Writes `hg` so that `read_hypergraph` gives it back.

    The weight code only announces weights that differ from 1. Writing a
    directed hypergraph as `hgr` keeps its pins but loses the directions.
    """
    has_edge_weights = bool(np.any(hg.edge_weights != 1))
    has_node_weights = bool(np.any(hg.node_sizes != 1))
    code = (NODE_WEIGHTS if has_node_weights else 0) + (EDGE_WEIGHTS if has_edge_weights else 0)
    lines = [f'{hg.num_edges} {hg.num_nodes}' + (f' {code}' if code else '')]
    for e in range(hg.num_edges):
        tokens = []
        if has_edge_weights:
            tokens.append(_format_weight(hg.edge_weights[e]))
        if format == FileFormat.DHGR:
            tokens.append(str(int(hg.src_counts[e])))
        tokens.extend(str(int(pin) + 1) for pin in hg.pins(e))
        lines.append(' '.join(tokens))
    if has_node_weights:
        lines.extend(str(int(size)) for size in hg.node_sizes)
    Path(path).write_text('\n'.join(lines) + '\n')

def write_partition(part, path):
    """Writes one partition id per node, renumbered onto the nonempty partitions."""
    assignment = part.assignment if hasattr(part, "assignment") else np.asarray(part, dtype=INDEX)
    compact, _ = compact_assignment(assignment)
    Path(path).write_text(''.join(f'{p}\n' for p in compact.tolist()))

def read_partition(path, num_nodes=None):
    """Reads a partition file into an assignment array.

    :param num_nodes: when given, the number of entries the file must hold
    :raises HypergraphFormatError: on a malformed entry or a count mismatch
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise HypergraphFormatError(f"Cannot read file: {exc.strerror}", path) from exc
    assignment = []
    for number, line in _content_lines(text):
        if not line:
            continue
        p = _parse_int(line, "partition id", path, number)
        if p < 0:
            raise HypergraphFormatError(f"Partition ids must be non-negative, got {p}", path, number)
        assignment.append(p)
    if num_nodes is not None and len(assignment) != num_nodes:
        raise HypergraphFormatError(f"Expected {num_nodes} partition ids, found {len(assignment)}", path)
    return np.asarray(assignment, dtype=INDEX)
