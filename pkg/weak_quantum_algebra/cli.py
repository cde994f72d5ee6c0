"""
Command line interface for the weak quantum algebra engine.
"""

import argparse
import logging
import sys
from typing import List, Optional, Sequence

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from weak_quantum_algebra.cartan import classify_indices
from weak_quantum_algebra.characters import truncated_character
from weak_quantum_algebra.check_catalog import CATALOG
from weak_quantum_algebra.core import VerificationEngine, load_config, validate_environment
from weak_quantum_algebra.exceptions import (
    ConfigError,
    DatumValidationError,
    ExpressionSyntaxError,
    IndexOutOfRange,
    NotApplicable,
    UnknownGenerator,
    WeakQuantumError,
)
from weak_quantum_algebra.models import SUITES, EngineConfig, SuiteReport
from weak_quantum_algebra.parser import parse_expression
from weak_quantum_algebra.presentation import TraceStep, render_word
from weak_quantum_algebra.weakhopf import enumerate_grouplikes

console = Console()
err_console = Console(stderr=True)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2

STATUS_STYLE = {"pass": "green", "xfail": "cyan", "skip": "dim", "fail": "bold red", "xpass": "bold red"}


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def _emit_json(text: str, target: str) -> None:
    if target == "-":
        console.print_json(text)
    else:
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)
        console.print(f"JSON written to {target}")


def _datum_table(cfg: EngineConfig) -> Table:
    d = cfg.datum()
    kinds = classify_indices(d)
    tau_e, tau_f = cfg.type_flags()
    table = Table(title=f"Borcherds-Cartan datum, m = {cfg.m}")
    for column in ("i", "row a_i*", "s_i", "kind", "tau E", "tau F"):
        table.add_column(column)
    for i in d.indices():
        table.add_row(
            str(i),
            " ".join(f"{x:>3}" for x in d.a[i]),
            str(d.s[i]),
            "real" if i in kinds.real else "imaginary",
            tau_e[i],
            tau_f[i],
        )
    return table


def _report_table(report: SuiteReport, show_all: bool) -> Table:
    table = Table(title=f"suite {report.suite}")
    table.add_column("check")
    table.add_column("status")
    table.add_column("anchor", overflow="fold")
    table.add_column("residue", overflow="fold")
    for record in report.records:
        if not show_all and record.status == "pass":
            continue
        style = STATUS_STYLE.get(record.status, "")
        table.add_row(record.check_id, f"[{style}]{record.status}[/]", record.anchor, record.residue[:200])
    return table


def cmd_validate(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    console.print(_datum_table(cfg))
    console.print(f"[green]valid[/]: suites {', '.join(cfg.selected_suites())}")
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    p = VerificationEngine(cfg).presentation
    x = parse_expression(args.expression, p)
    trace: Optional[List[TraceStep]] = [] if args.trace else None
    result = p.reduce(x, trace=trace)
    console.print(f"[bold]input[/]   {x.render()}")
    console.print(f"[bold]normal[/]  {result.render()}")
    if trace is not None:
        for number, step in enumerate(trace, 1):
            console.print(
                f"  {number:>4}  {step.name:<36} {render_word(step.left)} | {render_word(step.right)}",
                markup=False,
            )
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    report = VerificationEngine(cfg).run_suite(args.suite)
    if args.json:
        _emit_json(report.model_dump_json(indent=2), args.json)
    if args.json != "-":
        console.print(_report_table(report, args.all))
        counts = ", ".join(f"{k} {v}" for k, v in sorted(report.counts.items()))
        console.print(f"[{'green' if report.ok else 'bold red'}]{'ok' if report.ok else 'FAILED'}[/] ({counts})")
    if args.csv:
        report.to_frame().to_csv(args.csv, index=False)
    return EXIT_OK if report.ok else EXIT_UNEXPECTED


def cmd_character(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    weyl_length = args.weyl_length or cfg.truncation.weyl_length
    series = truncated_character(cfg.datum(), args.weight, args.height, weyl_length)
    frame = series.to_frame()
    if args.csv:
        frame.to_csv(args.csv, index=False)
    table = Table(title=f"character of lambda = {list(series.highest)} to height {series.height}")
    table.add_column("drop")
    table.add_column("height", justify="right")
    table.add_column("multiplicity", justify="right")
    for row in frame.itertuples(index=False):
        table.add_row(row.drop, str(row.height), str(row.multiplicity))
    console.print(table)
    return EXIT_OK


def cmd_grouplikes(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    engine = VerificationEngine(cfg)
    found = enumerate_grouplikes(engine.presentation, engine.delta, engine.eps, args.max_len)
    for x in found:
        console.print(x.render())
    console.print(f"{len(found)} grouplike element(s) up to length {args.max_len}")
    return EXIT_OK


def cmd_list_checks(args: argparse.Namespace) -> int:
    table = Table(title="check families")
    table.add_column("suite")
    table.add_column("family")
    table.add_column("anchor", overflow="fold")
    for entry in CATALOG:
        table.add_row(entry.suite, entry.family, entry.anchor)
    console.print(table)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wqa",
        description="Reduce, verify and build modules for weak quantized enveloping algebras",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s validate sl2.json                      # Check the datum and print it
  %(prog)s reduce sl2.json -e "E0*F0 - F0*E0"     # Normal form of an expression
  %(prog)s verify sl2.json --suite gate           # Run one suite
  %(prog)s verify sl2.json --json report.json     # Machine-readable report
  %(prog)s character sl2.json --weight 3 --height 6
  %(prog)s grouplikes sl2.json --max-len 2
  %(prog)s list-checks
        """,
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Log at DEBUG level")
    parser.add_argument("--list-checks", action="store_true", help="Print the check catalog and exit")
    sub = parser.add_subparsers(dest="command")

    p_validate = sub.add_parser("validate", help="Validate a configuration")
    p_validate.add_argument("config", help="Path to a JSON engine configuration")
    p_validate.set_defaults(func=cmd_validate)

    p_reduce = sub.add_parser("reduce", help="Reduce an expression to normal form")
    p_reduce.add_argument("config")
    p_reduce.add_argument("-e", "--expression", required=True, help='Expression, e.g. "E0*F0 - F0*E0"')
    p_reduce.add_argument("--trace", action="store_true", help="List the rules applied")
    p_reduce.set_defaults(func=cmd_reduce)

    p_verify = sub.add_parser("verify", help="Run a verification suite")
    p_verify.add_argument("config")
    p_verify.add_argument("--suite", default="all", choices=list(SUITES) + ["all"])
    p_verify.add_argument(
        "--json", nargs="?", const="-", default=None, metavar="PATH",
        help="Emit the report as JSON (stdout when PATH is omitted)",
    )
    p_verify.add_argument("--csv", metavar="PATH", help="Also write the report as CSV")
    p_verify.add_argument("--all", action="store_true", help="Show passing checks too")
    p_verify.set_defaults(func=cmd_verify)

    p_char = sub.add_parser("character", help="Truncated character of a simple module")
    p_char.add_argument("config")
    p_char.add_argument("--weight", type=int, nargs="+", required=True, help="lambda(h_i) for every index")
    p_char.add_argument("--height", type=int, required=True)
    p_char.add_argument("--weyl-length", type=int, default=None)
    p_char.add_argument("--csv", metavar="PATH")
    p_char.set_defaults(func=cmd_character)

    p_group = sub.add_parser("grouplikes", help="Enumerate grouplike torus words")
    p_group.add_argument("config")
    p_group.add_argument("--max-len", type=int, default=2)
    p_group.set_defaults(func=cmd_grouplikes)

    p_list = sub.add_parser("list-checks", help="Print the check catalog")
    p_list.set_defaults(func=cmd_list_checks)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for the CLI application."""
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)

    if args.list_checks:
        return cmd_list_checks(args)
    if not getattr(args, "func", None):
        parser.print_help()
        return EXIT_CONFIG

    try:
        validate_environment()
        return args.func(args)
    except (
        ConfigError,
        DatumValidationError,
        ExpressionSyntaxError,
        UnknownGenerator,
        IndexOutOfRange,
        NotApplicable,
    ) as exc:
        err_console.print(f"[bold red]error:[/] {exc}")
        return EXIT_CONFIG
    except WeakQuantumError as exc:
        err_console.print(f"[bold red]error:[/] {exc}")
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
