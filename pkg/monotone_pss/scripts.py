"""monotone-pss command line."""
from __future__ import annotations

import argparse
import csv
import logging
import os.path
import sys
import warnings
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from monotone_pss import const
from monotone_pss.const import CSV_FLOAT_FORMAT, CSV_HEADER, ExitCode
from monotone_pss.diagnostics import render_json, render_table, run_property_suite
from monotone_pss.exceptions import (
    ArgumentError,
    ConfigurationError,
    ConstructionError,
    DivergenceError,
    DomainError,
    NetlistValidationError,
    NumericalError,
)
from monotone_pss.netlist import load_netlist, load_run_spec, schema_text
from monotone_pss.network import DriveProblem, admittance_relation, impedance_relation, port_waveforms
from monotone_pss.packaging import get_distribution_version
from monotone_pss.signal import sample_drive
from monotone_pss.solvers import SolverConfig, solve_problem
from monotone_pss.warning_types import PartialSolutionWarning

logger = logging.getLogger(__name__)
package_logger = logging.getLogger(__package__)

LEVELS = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


def check_existense(file_name):
    """Check file name for existence."""
    if not os.path.exists(file_name):
        raise argparse.ArgumentTypeError(f"{file_name} is an invalid file name")
    return file_name


@contextmanager
def log_handler(verbosity: str, log_path: str | None = None):
    """Route package logs to stderr or a log file for one command."""
    if log_path:
        handler: logging.Handler = logging.FileHandler(log_path, mode="w", encoding="utf-8")
    else:
        handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(message)s"))
    previous = package_logger.level
    package_logger.addHandler(handler)
    package_logger.setLevel(LEVELS[verbosity])
    try:
        yield handler
    finally:
        package_logger.removeHandler(handler)
        package_logger.setLevel(previous)
        handler.close()


def write_csv(stream, times, current, voltage, branches=None):
    header = list(CSV_HEADER)
    columns = [times, current, voltage]
    for path, branch in (branches or {}).items():
        header += [f"{path}:i", f"{path}:v"]
        columns += [branch.current, branch.voltage]
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in zip(*columns):
        writer.writerow([CSV_FLOAT_FORMAT.format(float(value)) for value in row])


def emit_csv(output: str | None, *args, **kwargs):
    if output is None or output == "-":
        write_csv(sys.stdout, *args, **kwargs)
        return
    with Path(output).open(mode="w", encoding="utf-8", newline="") as csv_file:
        write_csv(csv_file, *args, **kwargs)


def build_problem(spec, args) -> DriveProblem:
    discretization = spec.discretization
    n = args.n if args.n is not None else discretization.n_steps
    period = args.period if args.period is not None else discretization.period_seconds
    scale = args.derivative_scale or discretization.derivative_scale
    drive = sample_drive(spec.drive.spec, n, period)
    return DriveProblem(spec.netlist.root, drive, spec.drive.kind, n, period, scale=scale)


def build_config(spec, args) -> SolverConfig:
    return SolverConfig(**spec.solver).with_overrides(
        algorithm=args.algorithm,
        alpha=args.alpha,
        lam=args.lam,
        tol=args.tol,
        max_iter=args.max_iter,
        form=args.form,
    )


def solve(args) -> int:
    """Solve a run spec and write the port waveforms as CSV."""
    try:
        spec = load_run_spec(args.runspec)
    except NetlistValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return ExitCode.INVALID_INPUT

    output = spec.output
    verbosity = "debug" if args.verbose else output.get("verbosity", "info")
    with log_handler(verbosity, args.log or output.get("log_path")):
        try:
            problem = build_problem(spec, args)
            config = build_config(spec, args)
            report = solve_problem(problem, config)
        except DomainError as e:
            logger.error("domain error: %s", e)
            return ExitCode.DOMAIN_VIOLATION
        except (ArgumentError, ConstructionError, ConfigurationError) as e:
            logger.error("error: %s", e)
            return ExitCode.INVALID_INPUT
        except DivergenceError as e:
            logger.error("diverged: %s", e)
            if e.report is None or not args.allow_partial:
                return ExitCode.NOT_CONVERGED
            report = e.report
            report.solution = np.asarray(report.solution, dtype=float)
        except NumericalError as e:
            logger.error("numerical error: %s", e)
            return ExitCode.NOT_CONVERGED

        if not report.converged and not args.allow_partial:
            logger.error("not converged after %d iterations; no CSV written", report.iterations)
            return ExitCode.NOT_CONVERGED
        if not report.converged:
            warnings.warn(PartialSolutionWarning(report.iterations, report.final_residual))

        current, voltage = port_waveforms(problem, report.solution)
        dump_branches = args.dump_branches or output.get("dump_branches", False)
        branches = report.audit.branches if dump_branches and report.audit is not None else None
        emit_csv(args.output or output.get("csv_path"), problem.drive.times, current, voltage, branches=branches)
        return ExitCode.OK if report.converged else ExitCode.NOT_CONVERGED


def check(args) -> int:
    """Run the property suite on both orientations of a netlist."""
    try:
        netlist = load_netlist(args.netlist)
    except NetlistValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return ExitCode.INVALID_INPUT

    with log_handler("debug" if args.verbose else "info", args.log):
        sections = {}
        errors = {}
        for name, build in (("impedance", impedance_relation), ("admittance", admittance_relation)):
            try:
                relation = build(netlist.root, args.n, args.period, scale=args.derivative_scale)
            except (ArgumentError, ConstructionError) as e:
                errors[name] = str(e)
                logger.warning("%s orientation skipped: %s", name, e)
                continue
            sections[name] = run_property_suite(relation, None, args.trials, seed=args.seed)
        if not sections:
            logger.error("no orientation of the netlist could be built: %s", errors)
            return ExitCode.INVALID_INPUT

        if args.format == "json":
            print(render_json(sections))
        else:
            print(render_table(sections), end="")
        passed = all(report.passed for reports in sections.values() for report in reports)
        return ExitCode.OK if passed else ExitCode.VIOLATIONS


def version(args) -> int:
    print(get_distribution_version())
    return ExitCode.OK


def schema(args) -> int:
    print(schema_text(), end="")
    return ExitCode.OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="monotone-pss")
    subparsers = parser.add_subparsers(help="sub-command help", dest="command")
    subparsers.required = True

    parser_solve = subparsers.add_parser("solve", help="solve a run spec for its periodic steady state")
    parser_solve.add_argument("runspec", metavar="RUNSPEC", type=check_existense, help="Run spec document")
    parser_solve.add_argument("--n", type=int, help="Samples per period")
    parser_solve.add_argument("--period", type=float, help="Period in seconds")
    parser_solve.add_argument("--tol", type=float, help="Relative stopping tolerance")
    parser_solve.add_argument("--max-iter", dest="max_iter", type=int, help="Iteration budget")
    parser_solve.add_argument("--alpha", type=float, help="Forward step size")
    parser_solve.add_argument("--lambda", dest="lam", type=float, help="Douglas-Rachford resolvent parameter")
    parser_solve.add_argument("--algorithm", choices=["forward", "dr", "auto"], help="Fixed-point algorithm")
    parser_solve.add_argument("--form", choices=["auto", const.IMPEDANCE, const.ADMITTANCE], help="Network relation")
    parser_solve.add_argument(
        "--derivative-scale", dest="derivative_scale", choices=["physical", "sample"], help="Backward difference scale"
    )
    parser_solve.add_argument(
        "--seed", type=int, default=const.DEFAULT_SEED, help="Random seed; the solve itself is deterministic"
    )
    parser_solve.add_argument("--output", help="CSV path, '-' for stdout")
    parser_solve.add_argument("--log", help="Log file instead of stderr")
    parser_solve.add_argument("--verbose", action="store_true", help="Log every iteration")
    parser_solve.add_argument(
        "--allow-partial", dest="allow_partial", action="store_true", help="Write the CSV of a non-converged solve"
    )
    parser_solve.add_argument(
        "--dump-branches", dest="dump_branches", action="store_true", help="Add current and voltage columns per branch"
    )
    parser_solve.set_defaults(func=solve)

    parser_check = subparsers.add_parser("check", help="check monotonicity properties of a netlist")
    parser_check.add_argument("netlist", metavar="NETLIST", type=check_existense, help="Netlist or run spec document")
    parser_check.add_argument("--trials", type=int, default=const.DEFAULT_TRIALS, help="Sampled pairs per check")
    parser_check.add_argument("--seed", type=int, default=const.DEFAULT_SEED, help="Random seed")
    parser_check.add_argument("--n", type=int, default=16, help="Samples per period")
    parser_check.add_argument("--period", type=float, default=1.0, help="Period in seconds")
    parser_check.add_argument(
        "--derivative-scale", dest="derivative_scale", choices=["physical", "sample"], default="physical"
    )
    parser_check.add_argument("--format", choices=["table", "json"], default="table", help="Report format")
    parser_check.add_argument("--log", help="Log file instead of stderr")
    parser_check.add_argument("--verbose", action="store_true")
    parser_check.set_defaults(func=check)

    subparsers.add_parser("version", help="print the version").set_defaults(func=version)
    subparsers.add_parser("schema", help="print the netlist JSON schema").set_defaults(func=schema)
    return parser


def main(args=None) -> int:
    """Main entry point."""
    parsed = build_parser().parse_args(args)
    return int(parsed.func(parsed))


def run():
    sys.exit(main())
