"""
Command line front door for matchstack.

    manage.py gen --n 5 --seed 7                     # one random growth history
    manage.py gen --n 3 --exhaustive [--strip]       # every history of length 3
    manage.py analyze histories.jsonl                # one report per history
    manage.py verify --suite lemma1 --max-n 5        # run a verification sweep
    manage.py export h.json --what dual --format dot # write an artifact

stdout carries JSON lines only; logs and summaries go to stderr.
"""
import argparse
import json
import logging.config
import sys
from typing import Any, Dict, List, Optional, Sequence

from tabulate import tabulate

from matchstack.config.logging import get_logging_config, run_id_ctx
from matchstack.config.setting import get_settings
from matchstack.model.common import ExitCode, ExportFormat, ExportTarget, Suite
from matchstack.services.bijection.service import to_tree, tree_to_dot, tree_to_json
from matchstack.services.bounds.service import bound_verdicts
from matchstack.services.middleware import HistoryIndexError, ParseError, RefusalError, UsageError, handle_exceptions
from matchstack.services.oracles.service import count_perfect_matchings
from matchstack.services.transfer.service import degeneracy, degeneracy_vector
from matchstack.services.triangulation.model import StackTriangulation
from matchstack.services.triangulation.service import (
    dual, dual_to_dot, dual_to_json, enumerate_histories, enumerate_strip_histories, from_history,
    history_from_json, history_to_json, is_stack_strip, random_history, random_strip_history, to_json
)
from matchstack.services.verification.model import CheckRecord, SweepReport
from matchstack.services.verification.service import run_suite
from matchstack.utils.logger import Logger
from matchstack.utils.utility import generate_uuid, iter_json_lines, read_source, write_json_line

logger = Logger("matchstack.services.cli")

# Colors for terminal output
class Colors:
    GREEN = '\033[92m'
    YELLOW = '\033[93m'
    RED = '\033[91m'
    BLUE = '\033[94m'
    RESET = '\033[0m'
    BOLD = '\033[1m'

def print_success(msg):
    print(f"{Colors.GREEN}✓{Colors.RESET} {msg}", file=sys.stderr)

def print_error(msg):
    print(f"{Colors.RED}✗{Colors.RESET} {msg}", file=sys.stderr)

def print_warning(msg):
    print(f"{Colors.YELLOW}⚠{Colors.RESET} {msg}", file=sys.stderr)

def print_info(msg):
    print(f"{Colors.BLUE}ℹ{Colors.RESET} {msg}", file=sys.stderr)

def print_header(msg):
    print(f"\n{Colors.BOLD}{msg}{Colors.RESET}", file=sys.stderr)
    print("=" * len(msg), file=sys.stderr)

def print_summary(report: SweepReport) -> None:
    print_header(f"Verification: {report.suite}")
    rows = [
        [t.name, t.instance_count, t.pass_count, t.fail_count, t.whitelisted_count]
        for t in report.checks
    ]
    print(tabulate(rows, headers=["Check", "Instances", "Pass", "Fail", "Whitelisted"], tablefmt="grid"),
          file=sys.stderr)
    if report.thresholds:
        rows = [
            [t.variant, f"{t.tested_sizes[0]}..{t.tested_sizes[1]}", t.violating_sizes or "-", t.threshold]
            for t in report.thresholds
        ]
        print(tabulate(rows, headers=["Bound", "Tested", "Violating", "N0"], tablefmt="grid"), file=sys.stderr)
    for note in report.notes:
        print_info(note)
    if report.violations:
        print_warning(f"{len(report.violations)} bound violations whitelisted by --allow-below")
    if report.passed:
        print_success(f"{report.instance_count} checks passed in {report.wall_time:.2f} seconds")
    else:
        print_error(f"{report.fail_count} of {report.instance_count} checks failed")

def analyze_history(tri: StackTriangulation) -> Dict[str, Any]:
    """Pipeline report for one triangulation: tree, vector, degeneracy, dual and bound verdicts."""
    vector = degeneracy_vector(tri)
    d = degeneracy(vector)
    g = dual(tri)
    try:
        matchings: Optional[int] = count_perfect_matchings(g)
    except RefusalError:
        matchings = None
    return {
        "history": history_to_json(tri.history),
        "vertices": tri.vertex_count,
        "tree": tree_to_json(to_tree(tri)) if tri.steps else None,
        "vector": vector.to_strings(),
        "degeneracy": d,
        "dual_vertices": g.vertex_count,
        "matchings": matchings,
        "stack_strip": is_stack_strip(tri),
        "bounds": bound_verdicts(tri.vertex_count, d).model_dump(),
    }

def _read_histories(path: str) -> List[StackTriangulation]:
    triangulations = []
    for line, value in iter_json_lines(read_source(path)):
        try:
            triangulations.append(from_history(history_from_json(value, line)))
        except HistoryIndexError as hie:
            raise ParseError(hie.message, line=line) from hie
    return triangulations

@handle_exceptions
def cmd_gen(args: argparse.Namespace) -> int:
    if args.n < 0:
        raise UsageError("--n must be nonnegative")
    if args.exhaustive and args.seed is not None:
        raise UsageError("--seed and --exhaustive exclude each other")
    if args.exhaustive:
        histories = enumerate_strip_histories(args.n) if args.strip else enumerate_histories(args.n)
        for h in histories:
            write_json_line(history_to_json(h))
        return ExitCode.OK
    seed = get_settings().seed if args.seed is None else args.seed
    h = random_strip_history(args.n, seed) if args.strip else random_history(args.n, seed)
    write_json_line(history_to_json(h))
    return ExitCode.OK

@handle_exceptions
def cmd_analyze(args: argparse.Namespace) -> int:
    count = 0
    for tri in _read_histories(args.file):
        write_json_line(analyze_history(tri))
        count += 1
    logger.info("Histories analyzed", count=count)
    return ExitCode.OK

@handle_exceptions
def cmd_verify(args: argparse.Namespace) -> int:
    sink = None
    if args.records:
        def sink(record: CheckRecord) -> None:
            write_json_line(record.model_dump(mode="json", by_alias=True))
    report = run_suite(args.suite, args.max_n, args.allow_below, sink)
    print_summary(report)
    write_json_line(report.model_dump(mode="json"))
    return ExitCode.OK if report.passed else ExitCode.FAILURE

@handle_exceptions
def cmd_export(args: argparse.Namespace) -> int:
    what, fmt = ExportTarget(args.what), ExportFormat(args.format)
    if what == ExportTarget.TRI and fmt == ExportFormat.DOT:
        raise UsageError("triangulations export as json only")
    histories = _read_histories(args.file)
    if len(histories) != 1:
        raise UsageError(f"export takes exactly one history, got {len(histories)}")
    tri = histories[0]
    match what, fmt:
        case ExportTarget.TRI, _:
            text = json.dumps(to_json(tri), separators=(",", ":")) + "\n"
        case ExportTarget.TREE, ExportFormat.JSON:
            text = json.dumps(tree_to_json(to_tree(tri)), separators=(",", ":")) + "\n"
        case ExportTarget.TREE, ExportFormat.DOT:
            text = tree_to_dot(to_tree(tri))
        case ExportTarget.DUAL, ExportFormat.JSON:
            text = json.dumps(dual_to_json(dual(tri)), separators=(",", ":")) + "\n"
        case _:
            text = dual_to_dot(dual(tri))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
        logger.info("Artifact written", what=what.value, format=fmt.value, path=args.output)
    else:
        sys.stdout.write(text)
    return ExitCode.OK

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="manage.py",
        description="Exact degeneracy engine for stack triangulations",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Every growth history with 3 insertions
  python manage.py gen --n 3 --exhaustive

  # Analyze histories read from standard input
  python manage.py gen --n 8 --seed 1 | python manage.py analyze -

  # Oracle sweep over all histories with 5 insertions
  python manage.py verify --suite lemma1 --max-n 5

  # Bound sweep, whitelisting the known small-size violations
  python manage.py verify --suite theorem --allow-below 5

  # Dual graph of K4 as Graphviz
  echo '[0]' | python manage.py export - --what dual --format dot
        """
    )
    subparsers = parser.add_subparsers(dest="command", help="Commands")

    gen_parser = subparsers.add_parser("gen", help="Generate growth histories")
    gen_parser.add_argument("--n", type=int, required=True, help="Number of insertions")
    gen_parser.add_argument("--seed", type=int, default=None, help="Seed of the random history (default: MATCHSTACK_SEED)")
    gen_parser.add_argument("--exhaustive", action="store_true", help="Emit every history of length n")
    gen_parser.add_argument("--strip", action="store_true", help="Restrict to stack-strip growth")

    analyze_parser = subparsers.add_parser("analyze", help="Report tree, vector, degeneracy and bounds per history")
    analyze_parser.add_argument("file", help="JSON-lines histories, '-' for standard input")

    verify_parser = subparsers.add_parser("verify", help="Run a verification suite")
    verify_parser.add_argument("--suite", required=True, help=f"One of: {', '.join(s.value for s in Suite)}")
    verify_parser.add_argument("--max-n", type=int, default=None, help="Largest instance size (default per suite)")
    verify_parser.add_argument("--allow-below", type=int, default=None,
                               help="Whitelist bound violations at sizes below this value")
    verify_parser.add_argument("--records", action="store_true", help="Stream one JSON line per check")

    export_parser = subparsers.add_parser("export", help="Write a triangulation, tree or dual artifact")
    export_parser.add_argument("file", help="File holding one history, '-' for standard input")
    export_parser.add_argument("--what", required=True, choices=[t.value for t in ExportTarget], help="Artifact to write")
    export_parser.add_argument("--format", default="json", choices=[f.value for f in ExportFormat], help="Serialization")
    export_parser.add_argument("--output", default=None, help="Output path (default: standard output)")
    return parser

COMMANDS = {
    "gen": cmd_gen,
    "analyze": cmd_analyze,
    "verify": cmd_verify,
    "export": cmd_export,
}

def configure_logging() -> None:
    logging.config.dictConfig(get_logging_config(get_settings()))

def main(argv: Optional[Sequence[str]] = None) -> int:
    configure_logging()
    run_id_ctx.set(generate_uuid())
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as se:
        return ExitCode.USAGE if se.code else ExitCode.OK
    if not args.command:
        parser.print_help(sys.stderr)
        return ExitCode.USAGE
    return int(COMMANDS[args.command](args))
