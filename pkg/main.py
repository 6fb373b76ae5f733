# main.py
# ============================================================================
# Main Application Entry Point - command-line interface
# ============================================================================

import argparse
import sys

from config import *
from circuit_dsl import CircuitError, compile_circuit, parse_circuit
from examples_corpus import DESCRIPTIONS, ExampleId, build_example, parse_example_id
from file_operations import FileOperationsManager, log_status
from joint_table import DistributionError
from measure_manager import MeasureManager, check_outcome, format_report, format_table1
from optimizer import OptimizerConfig


def build_parser():
    optimizer_flags = argparse.ArgumentParser(add_help=False)
    optimizer_flags.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS,
                                 help=f"random restarts after the two fixed starts (default {DEFAULT_RESTARTS})")
    optimizer_flags.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERATIONS,
                                 help=f"iteration cap per restart (default {DEFAULT_MAX_ITERATIONS})")
    optimizer_flags.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE_BITS,
                                 help=f"objective tolerance in bits (default {DEFAULT_TOLERANCE_BITS:g})")
    optimizer_flags.add_argument("--seed", type=int, default=DEFAULT_SEED,
                                 help=f"random seed (default {DEFAULT_SEED})")
    optimizer_flags.add_argument("--workers", type=int, default=DEFAULT_WORKERS,
                                 help="threads for restarts and examples (default 1)")

    output_flags = argparse.ArgumentParser(add_help=False)
    output_flags.add_argument("--format", choices=OUTPUT_FORMATS, default=OUTPUT_FORMAT_DEFAULT)
    output_flags.add_argument("--pid2", action="store_true", help="add two-predictor PI regions")
    output_flags.add_argument("--pdf", metavar="PATH", help="also write the report(s) to a PDF file")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="status lines on stderr")

    parser = argparse.ArgumentParser(prog="synergy", description=APP_DESCRIPTION)
    parser.add_argument("--version", action="version", version=f"{APP_TITLE} {APP_VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)

    compute = commands.add_parser("compute", parents=[optimizer_flags, output_flags, common],
                                  help="all measures for one distribution")
    compute.add_argument("input", nargs="?", help=f"{TSV_EXTENSION} distribution or {CIRCUIT_EXTENSION} circuit")
    compute.add_argument("--example", help="a built-in example instead of a file")
    compute.add_argument("--renormalize", action="store_true",
                         help=f"rescale TSV masses that sum to within {RENORMALIZE_WINDOW:g} of 1")
    compute.set_defaults(handler=cmd_compute)

    table1 = commands.add_parser("table1", parents=[optimizer_flags, output_flags, common],
                                 help="every measure on every built-in example")
    table1.add_argument("--check", action="store_true", help="compare against expected values")
    table1.set_defaults(handler=cmd_table1)

    examples = commands.add_parser("examples", parents=[common], help="built-in example distributions")
    example_commands = examples.add_subparsers(dest="action", required=True)
    example_commands.add_parser("list", help="names and descriptions").set_defaults(handler=cmd_examples_list)
    dump = example_commands.add_parser("dump", help="print an example as TSV")
    dump.add_argument("example_id")
    dump.set_defaults(handler=cmd_examples_dump)

    circuit = commands.add_parser("circuit", parents=[common], help="circuit files")
    circuit_commands = circuit.add_subparsers(dest="action", required=True)
    check = circuit_commands.add_parser("check", help="parse and compile a circuit file")
    check.add_argument("file")
    check.set_defaults(handler=cmd_circuit_check)
    return parser


def _optimizer_config(args):
    return OptimizerConfig(
        restarts=args.restarts,
        max_iterations=args.max_iters,
        tolerance_bits=args.tol,
        seed=args.seed,
        workers=args.workers,
    )


def _export_pdf(args, reports, files, title):
    if not args.pdf:
        return True
    result = files.export_to_pdf(reports, args.pdf, title=title)
    if not result['success']:
        print(f"❌ {result['message']}", file=sys.stderr)
    return result['success']


def cmd_compute(args):
    files = FileOperationsManager(verbose=args.verbose)
    if bool(args.input) == bool(args.example):
        print("❌ give exactly one of an input file or --example", file=sys.stderr)
        return EXIT_INPUT_ERROR

    try:
        cfg = _optimizer_config(args)
        if args.example:
            example_id = parse_example_id(args.example)
            table, source = build_example(example_id), example_id.value
        else:
            success, table, message = files.load_input(args.input, renormalize=args.renormalize)
            if not success:
                print(f"❌ {message}", file=sys.stderr)
                return EXIT_INPUT_ERROR
            source = args.input
        report = MeasureManager(cfg, verbose=args.verbose).compute(table, source, with_pid2=args.pid2)
    except (DistributionError, ValueError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except Exception as e:
        print(f"💥 {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED

    if args.format == "json":
        sys.stdout.write(files.format_json(report.to_dict()))
    else:
        sys.stdout.write(format_report(report))
    return EXIT_OK if _export_pdf(args, [report], files, f"{APP_TITLE}: {source}") else EXIT_CHECK_FAILED


def cmd_table1(args):
    files = FileOperationsManager(verbose=args.verbose)
    try:
        cfg = _optimizer_config(args)
    except ValueError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    outcomes = MeasureManager(cfg, verbose=args.verbose).table1(with_pid2=args.pid2, workers=args.workers)
    if args.format == "json":
        payload = [outcome.report.to_dict() if outcome.report is not None
                   else {"source": outcome.example_id.value, "error": outcome.error}
                   for outcome in outcomes]
        sys.stdout.write(files.format_json(payload))
    else:
        sys.stdout.write(format_table1(outcomes))

    failures = [f"{outcome.example_id.value}: {outcome.error}" for outcome in outcomes if outcome.report is None]
    if args.check:
        failures = [failure for outcome in outcomes for failure in check_outcome(outcome)]
    for failure in failures:
        print(f"❌ {failure}", file=sys.stderr)
    if args.check and not failures:
        log_status(f"✅ All {len(outcomes)} examples match the expected values", args.verbose)

    reports = [outcome.report for outcome in outcomes if outcome.report is not None]
    exported = _export_pdf(args, reports, files, f"{APP_TITLE}: example suite")
    return EXIT_CHECK_FAILED if failures or not exported else EXIT_OK


def cmd_examples_list(args):
    width = max(len(example_id.value) for example_id in ExampleId)
    for example_id in ExampleId:
        print(f"{example_id.value:<{width}}  {DESCRIPTIONS[example_id]}")
    return EXIT_OK


def cmd_examples_dump(args):
    try:
        table = build_example(args.example_id)
    except DistributionError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    sys.stdout.write(FileOperationsManager(verbose=args.verbose).format_distribution(table))
    return EXIT_OK


def cmd_circuit_check(args):
    try:
        with open(args.file, encoding="utf-8") as handle:
            spec = parse_circuit(handle.read())
        table = compile_circuit(spec)
    except CircuitError as e:
        print(f"{args.file}:{e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except UnicodeDecodeError as e:
        print(f"❌ {args.file}: not valid UTF-8 (byte {e.start})", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (OSError, DistributionError) as e:
        print(f"❌ {args.file}: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    shape = " x ".join(str(size) for size in table.shape)
    print(f"ok: {len(spec.sources)} sources, {len(spec.definitions)} definitions, "
          f"predictors {', '.join(spec.predictors)}, target {spec.target}, table {shape}, "
          f"{len(list(table.rows()))} positive rows")
    return EXIT_OK


def main(argv=None):
    """Application entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)
    log_status(f"🎯 {APP_TITLE} v{APP_VERSION}: {args.command}", args.verbose)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
