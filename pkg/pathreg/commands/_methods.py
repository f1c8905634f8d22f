import argparse
import math
import pathlib
import sys
from typing import Optional, TextIO

from pathreg.report import ReportEntry, VerificationReport, write_csv

from ._BsdeCommand import BsdeCommand
from ._FejerCommand import FejerCommand
from ._HeatSolveCommand import HeatSolveCommand
from ._ItoVerifyCommand import ItoVerifyCommand
from ._LookbackCommand import LookbackCommand
from ._RegintCommand import RegintCommand
from ._RunConfig import SUITES, RunConfig
from ._SuiteCommand import SuiteCommand
from ._SvConvergeCommand import SvConvergeCommand

SUITE_COMMANDS = {
    command.name: command
    for command in [
        RegintCommand,
        ItoVerifyCommand,
        HeatSolveCommand,
        LookbackCommand,
        FejerCommand,
        SvConvergeCommand,
        BsdeCommand,
    ]
}

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2

_CONFIG_ERRORS = (ValueError, KeyError, TypeError, FileNotFoundError)


def make_commands(
    cfg: RunConfig,
    quiet: bool = False,
    out: Optional[TextIO] = None,
) -> list[SuiteCommand]:
    """Construct the selected suites; raises on a bad configuration"""
    return [SUITE_COMMANDS[name](cfg, quiet=quiet, out=out) for name in cfg.selected()]


def suite_error(suite: str, message: str) -> ReportEntry:
    """Failed entry for a suite that did not finish"""
    return ReportEntry(
        name=f"{suite}.error",
        value=math.nan,
        reference=0.0,
        tolerance=0.0,
        gap=math.inf,
        provenance="error",
        details={"error": message},
    )


def run_commands(
    cfg: RunConfig,
    commands: list[SuiteCommand],
    quiet: bool = False,
    out: Optional[TextIO] = None,
) -> VerificationReport:
    """Run suites and write ``report.json`` and ``plot/<suite>_<table>.csv``
    under ``cfg.out``

    A suite that raises during its run is recorded as the failed entry
    ``"<suite>.error"`` holding the error message, and the remaining suites
    still run.

    Returns
    -------
    report: VerificationReport
        The committed report.
    """
    if out is None:
        out = sys.stdout
    out_dir = cfg.out_dir
    report = VerificationReport(config_hash=cfg.config_hash())
    for command in commands:
        if not quiet:
            out.write(f"-- suite: {command.name} --\n")
        try:
            entries = command.run()
        except Exception as e:
            message = f"{type(e).__name__}: {e}"
            print(f"pathreg: suite {command.name} failed: {message}", file=sys.stderr)
            entries = [suite_error(command.name, message)]
        else:
            entries = command.finalize(entries)
        report.extend(entries)
        for table, (columns, rows) in command.tables.items():
            path = out_dir / "plot" / f"{command.name}_{table}.csv"
            write_csv(path, columns, rows, quiet=quiet)
    report.commit(out_dir / "report.json", quiet=quiet)
    if not quiet:
        report.print_summary(out=out)
    return report


def run(
    cfg: RunConfig,
    quiet: bool = False,
    out: Optional[TextIO] = None,
) -> int:
    """Run the suites selected by `cfg`

    Returns
    -------
    code: int
        0 if every entry passed, 1 otherwise. Configuration errors raise
        before any suite runs.
    """
    commands = make_commands(cfg, quiet=quiet, out=out)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    report = run_commands(cfg, commands, quiet=quiet, out=out)
    return EXIT_PASS if report.passed else EXIT_FAIL


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pathreg",
        description="Verification suites for the functional Ito calculus, "
        "path-dependent heat equations and BSDE solvers.",
    )
    parser.add_argument(
        "--suite",
        default=None,
        help=f"Suite to run, one of {SUITES} or 'all' (default: all)",
    )
    parser.add_argument("--seed", type=int, default=None, help="Base seed")
    parser.add_argument(
        "--config",
        type=pathlib.Path,
        default=None,
        help="JSON configuration file; command line options take precedence",
    )
    parser.add_argument(
        "--out",
        default=None,
        help="Output directory (default: pathreg_out)",
    )
    parser.add_argument(
        "--tol-scale",
        type=float,
        default=None,
        help="Factor applied to every tolerance (default: 1)",
    )
    parser.add_argument(
        "--n-workers",
        type=int,
        default=None,
        help="Threads for Monte Carlo path blocks (default: 1)",
    )
    parser.add_argument("-q", "--quiet", action="store_true", help="Only print errors")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Configuration file values, overridden by command line options"""
    data = RunConfig.load(args.config).to_dict() if args.config else {}
    for key, value in [
        ("suite", args.suite),
        ("seed", args.seed),
        ("out", args.out),
        ("tol_scale", args.tol_scale),
        ("n_workers", args.n_workers),
    ]:
        if value is not None:
            data[key] = value
    return RunConfig.from_dict(data)


def main(argv: Optional[list[str]] = None) -> int:
    """``pathreg`` command line entry point; returns the exit code"""
    args = make_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        commands = make_commands(cfg, quiet=args.quiet)
        cfg.out_dir.mkdir(parents=True, exist_ok=True)
    except _CONFIG_ERRORS + (OSError,) as e:
        print(f"pathreg: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        report = run_commands(cfg, commands, quiet=args.quiet)
    except _CONFIG_ERRORS as e:
        print(f"pathreg: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_PASS if report.passed else EXIT_FAIL
