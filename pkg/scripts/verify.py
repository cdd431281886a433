#!/usr/bin/env python3
"""
Laguerre Identity Verifier - Main Entry Point

Usage:
    python verify.py eval laguerre_uni n=0 alpha=1 x=5
    python verify.py check prop1_exponential k=1 beta=2 u=0.3 x=1.0
    python verify.py suite suites/default_suite.yaml --out report.json
    python verify.py check --list

Exit codes: 0 success, 1 identity failure (or a suite with failures),
2 domain/pole/parameter/config error, 3 budget exceeded.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from errors import BudgetExceededError, IdentitySkipped, NonConvergenceError, SpecialFunctionError, SuiteConfigError
from identity_registry import (
    FUNCTIONS,
    IDENTITIES,
    LOG_LEVELS,
    VerifyConfig,
    evaluate_function,
    get_function,
    get_identity,
    parse_cli_params,
    resolve_params,
    run_identity,
)
from identity_report import format_complex
from suite_runner import SuiteConfig, SuiteRunner, setup_record_logger

__version__ = "0.1.0"

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_BUDGET = 3

DEFAULT_CONFIG = Path(__file__).parent / "config.yaml"


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"Path to settings file (default: {DEFAULT_CONFIG.name} next to this script)")
    common.add_argument("--tol", type=float, help="Pass threshold on rel_residual (overrides config and suite)")
    common.add_argument("--max-order", type=int, help="Outer series truncation order")
    common.add_argument("--jobs", type=int, default=1, help="Worker count (suite processes or quadrature threads)")
    common.add_argument("--seed", type=int, help="Seed for random suite parameters (overrides the suite file)")
    common.add_argument("--format", choices=["json", "csv"], help="Report format (default: from --out suffix, else json)")
    common.add_argument("--out", help="Write the report to this path")
    common.add_argument("--log-level", choices=[level.lower() for level in LOG_LEVELS], help="Console log level")
    common.add_argument("--log-file", help="Also log to this file (suite records included)")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Numerical verification of multivariate Laguerre generating-function identities",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _common_options()
    subparsers = parser.add_subparsers(dest="command", required=True)

    eval_parser = subparsers.add_parser("eval", parents=[common], help="Evaluate one function value")
    eval_parser.add_argument("function", nargs="?", help="Function name")
    eval_parser.add_argument("params", nargs="*", help="key=value parameters")
    eval_parser.add_argument("--list", action="store_true", help="List available functions")

    check_parser = subparsers.add_parser("check", parents=[common], help="Verify one identity")
    check_parser.add_argument("identity_id", nargs="?", help="Identity id")
    check_parser.add_argument("params", nargs="*", help="key=value parameters")
    check_parser.add_argument("--list", action="store_true", help="List available identities")

    suite_parser = subparsers.add_parser("suite", parents=[common], help="Run a suite file")
    suite_parser.add_argument("suite_path", help="Suite file (.yaml, .json, .json5) or a saved report")
    suite_parser.add_argument("--from-report", action="store_true", help="Re-run the records of a saved report")
    return parser


def _setup_logging(level: str, log_file: Optional[str]):
    root = logging.getLogger()
    for handler in [h for h in root.handlers if getattr(h, "verify_cli", False)]:
        root.removeHandler(handler)
        handler.close()
    root.setLevel(logging.DEBUG)

    console = logging.StreamHandler(sys.stderr)
    console.setLevel(getattr(logging, level.upper()))
    console.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    setattr(console, "verify_cli", True)
    root.addHandler(console)

    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handler = logging.FileHandler(log_file, mode="a", encoding="utf-8")
        handler.setLevel(logging.DEBUG)
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        setattr(handler, "verify_cli", True)
        root.addHandler(handler)
    setup_record_logger(log_file)


def _load_config(args: argparse.Namespace) -> VerifyConfig:
    """Read config.yaml (or --config) and apply the CLI overrides."""
    path = args.config or str(DEFAULT_CONFIG)
    config = VerifyConfig.load(path, required=args.config is not None)
    if args.tol is not None and not args.tol > 0:
        raise SuiteConfigError(f"--tol must be positive, got {args.tol}")
    if args.max_order is not None and args.max_order < 1:
        raise SuiteConfigError(f"--max-order must be positive, got {args.max_order}")
    if args.jobs < 1:
        raise SuiteConfigError(f"--jobs must be positive, got {args.jobs}")
    config.tol = args.tol
    config.max_order = args.max_order
    config.quadrature_jobs = args.jobs
    return config


def _report_format(args: argparse.Namespace) -> str:
    if args.format:
        return args.format
    if args.out and Path(args.out).suffix.lower() == ".csv":
        return "csv"
    return "json"


def cmd_eval(args: argparse.Namespace, config: VerifyConfig) -> int:
    if args.list or not args.function:
        for name, spec in FUNCTIONS.items():
            params = " ".join(p.name if p.required else f"[{p.name}]" for p in spec.params)
            print(f"  {name:<22} {params:<40} {spec.summary}")
        return EXIT_OK

    spec = get_function(args.function)
    params = resolve_params(spec.params, parse_cli_params(args.params), args.function)
    value = evaluate_function(args.function, params, config)
    print(format_complex(value))
    return EXIT_OK


def cmd_check(args: argparse.Namespace, config: VerifyConfig) -> int:
    if args.list or not args.identity_id:
        for identity_id, spec in IDENTITIES.items():
            params = " ".join(p.name if p.required else f"[{p.name}]" for p in spec.params)
            print(f"  {identity_id:<18} {params:<40} {spec.summary}")
        return EXIT_OK

    spec = get_identity(args.identity_id)
    params = resolve_params(spec.params, parse_cli_params(args.params), args.identity_id)
    threshold = config.threshold_for(args.identity_id)
    try:
        report = run_identity(args.identity_id, params, config)
    except IdentitySkipped as e:
        print(f"identity:         {args.identity_id}")
        print(f"result:           SKIP ({e.reason})")
        return EXIT_OK

    print(report.format_block(threshold))
    if args.out:
        report.save(args.out)
    return EXIT_OK if report.passed(threshold) else EXIT_FAILED


def cmd_suite(args: argparse.Namespace, config: VerifyConfig) -> int:
    if args.from_report:
        suite = SuiteConfig.from_report(args.suite_path)
    else:
        suite = SuiteConfig.load(args.suite_path, seed=args.seed)

    fmt = _report_format(args)
    output_path = args.out or f"suite_report.{fmt}"
    result = SuiteRunner(config, jobs=args.jobs).run(suite)
    result.save(output_path, fmt)
    for record in result.errors():
        print(f"Error: {record.identity_id} entry={record.entry} sample={record.sample}: {record.notes}", file=sys.stderr)
    print(result.summary())
    return result.exit_code()


COMMANDS = {"eval": cmd_eval, "check": cmd_check, "suite": cmd_suite}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = _load_config(args)
        _setup_logging(args.log_level or config.log_level, args.log_file or config.log_file)
        return COMMANDS[args.command](args, config)
    except BudgetExceededError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except NonConvergenceError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_FAILED
    except (SpecialFunctionError, SuiteConfigError, ValueError, ArithmeticError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
