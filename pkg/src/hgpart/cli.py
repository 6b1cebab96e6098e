import argparse
import logging
import sys
from pathlib import Path

from hgpart.config import (
    CoarseningOptions,
    MatchingStrategy,
    Mode,
    PartitionerConfig,
    RefinementOptions,
    Constraints,
)
from hgpart.driver import Partitioner
from hgpart.errors import (
    ConfigurationError,
    HypergraphFormatError,
    InfeasibleInstance,
    MalformedHypergraph,
)
from hgpart.formats import FileFormat, read_hypergraph, read_partition, write_hypergraph, write_partition
from hgpart.generator import InstanceKind, generate_instance
from hgpart.hypergraph import connectivity, cut_net, validate_partitioning
from hgpart.oracle import one_pass

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2

def positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value

def non_negative_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value

def _add_input(parser):
    parser.add_argument("--input", "-i", type=Path, required=True, help="hypergraph file")
    parser.add_argument("--format", choices=[f.value for f in FileFormat], help="file format (default: by suffix)")

def _add_constraints(parser):
    parser.add_argument("--omega", type=positive_int, help="maximum partition size")
    parser.add_argument("--delta", type=positive_int, help="maximum distinct inbound hyperedges per partition")

def build_parser():
    parser = argparse.ArgumentParser(prog="hgpart", description="Multi-level partitioner for directed hypergraphs.")
    parser.add_argument("--verbose", "-v", action="store_true", help="log progress per level and pass")
    commands = parser.add_subparsers(dest="command", required=True)

    partition = commands.add_parser("partition", help="partition a hypergraph")
    _add_input(partition)
    partition.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.CONSTRAINED.value)
    _add_constraints(partition)
    partition.add_argument("--k", type=positive_int, help="number of partitions in k-way mode")
    partition.add_argument("--epsilon", type=float, default=0.03, help="k-way imbalance (default: 0.03)")
    partition.add_argument("--pi", type=positive_int, default=4, help="pairing candidates per node (default: 4)")
    partition.add_argument("--theta", type=non_negative_int, default=16, help="refinement passes per level (default: 16)")
    partition.add_argument("--seed", type=int, default=0)
    partition.add_argument("--noise", type=float, default=0.1, help="noise cap as a fraction of the mean edge weight")
    partition.add_argument("--matching", choices=[s.value for s in MatchingStrategy], default=MatchingStrategy.OPTIMAL.value)
    partition.add_argument("--no-chaining", action="store_true", help="order moves by gain only")
    partition.add_argument("--no-leftover", action="store_true", help="skip pairing of nodes without candidates")
    partition.add_argument("--halt-threshold", type=positive_int, default=4096, help="k-way coarsening stops below this many nodes")
    partition.add_argument("--debug-checks", action="store_true", help="verify incremental ledgers after every applied prefix")
    partition.add_argument("--output", "-o", type=Path, help="partition file to write")
    partition.add_argument("--stats-json", type=Path, help="run statistics file to write")

    validate = commands.add_parser("validate", help="check a partition file against the limits")
    _add_input(validate)
    validate.add_argument("--partition", "-p", type=Path, required=True)
    _add_constraints(validate)

    generate = commands.add_parser("generate", help="write a synthetic instance")
    generate.add_argument("--kind", choices=[k.value for k in InstanceKind], default=InstanceKind.LAYERED.value)
    generate.add_argument("--layers", type=positive_int, required=True)
    generate.add_argument("--width", type=positive_int, required=True)
    generate.add_argument("--fanout", type=positive_int, default=2)
    generate.add_argument("--rewire", type=float, default=0.1, help="small-world rewiring probability")
    generate.add_argument("--window", type=positive_int, help="local fan-out neighborhood (default: whole layer)")
    generate.add_argument("--max-weight", type=positive_int, help="draw integer edge weights from 1..max-weight")
    generate.add_argument("--seed", type=int, default=0)
    generate.add_argument("--format", choices=[f.value for f in FileFormat], default=FileFormat.DHGR.value)
    generate.add_argument("--output", "-o", type=Path, required=True)

    baseline = commands.add_parser("baseline", help="run the one-pass baseline")
    _add_input(baseline)
    _add_constraints(baseline)
    baseline.add_argument("--output", "-o", type=Path, help="partition file to write")
    return parser

def _format_of(args):
    return FileFormat(args.format) if args.format else None

def _config_from(args):
    return PartitionerConfig(
        mode=Mode(args.mode),
        omega=args.omega,
        delta=args.delta,
        k=args.k,
        epsilon=args.epsilon,
        seed=args.seed,
        coarsening=CoarseningOptions(
            candidates=args.pi,
            noise_fraction=args.noise,
            matching=MatchingStrategy(args.matching),
            leftover_pairing=not args.no_leftover,
        ),
        refinement=RefinementOptions(passes=args.theta, chaining=not args.no_chaining),
        kway_halt_threshold=args.halt_threshold,
        debug_checks=args.debug_checks,
    )

# MARK: Commands

def run_partition(args):
    hg = read_hypergraph(args.input, _format_of(args))
    part, stats = Partitioner(_config_from(args), log_progress=args.verbose).run(hg)
    if args.output:
        write_partition(part, args.output)
    if args.stats_json:
        args.stats_json.write_text(stats.to_json(indent=2))
    print(f'partitions: {stats.num_partitions}  connectivity: {stats.connectivity:g}  cut-net: {stats.cut_net:g}')
    return EXIT_OK

def run_validate(args):
    hg = read_hypergraph(args.input, _format_of(args))
    assignment = read_partition(args.partition, num_nodes=hg.num_nodes)
    report = validate_partitioning(hg, assignment, Constraints(omega=args.omega, delta=args.delta))
    print(report.to_json(indent=2))
    return EXIT_OK if report.valid else EXIT_INVALID

def run_generate(args):
    params = dict(layers=args.layers, width=args.width, fanout=args.fanout, window=args.window)
    if args.max_weight:
        params.update(weighted=True, max_weight=args.max_weight)
    if args.kind == InstanceKind.SMALLWORLD.value:
        params["rewire"] = args.rewire
    hg = generate_instance(args.kind, seed=args.seed, **params)
    write_hypergraph(hg, args.output, FileFormat(args.format))
    print(f'{args.output}: {hg.summary()}')
    return EXIT_OK

def run_baseline(args):
    hg = read_hypergraph(args.input, _format_of(args))
    part = one_pass(hg, Constraints(omega=args.omega, delta=args.delta))
    if args.output:
        write_partition(part, args.output)
    print(f'partitions: {part.num_nonempty}  connectivity: {connectivity(hg, part):g}  cut-net: {cut_net(hg, part):g}')
    return EXIT_OK

COMMANDS = {
    "partition": run_partition,
    "validate": run_validate,
    "generate": run_generate,
    "baseline": run_baseline,
}

def main(argv=None):
    """Runs the command line interface.

    :return: 0 on success, 1 for infeasible instances or invalid partitions,
    2 for usage, configuration and file format errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    if args.verbose:
        logging.basicConfig(level=logging.INFO)
    try:
        return COMMANDS[args.command](args)
    except InfeasibleInstance as exc:
        print(f'hgpart: infeasible: {exc}', file=sys.stderr)
        return EXIT_INVALID
    except (ConfigurationError, HypergraphFormatError, MalformedHypergraph) as exc:
        print(f'hgpart: error: {exc}', file=sys.stderr)
        return EXIT_USAGE
