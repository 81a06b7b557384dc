"""
Command-Line Entry Point
========================
argparse front end with subcommands dist, sweep-tau, sweep-beta, sample
and validate.

Exit codes:
    0  success
    1  computation error (undefined result, precondition)
    2  usage error (bad flags, unusable config or input files)
    3  validation failure or rejected goodness-of-fit test
    4  sampled values outside the exact support
"""

import argparse
import json
import sys
from typing import Any, Callable, Dict, List, Optional

import pandas as pd
from pydantic import ValidationError

from otto_engine.cli.commands import cmd_dist, cmd_sample, cmd_sweep_beta, cmd_sweep_tau, cmd_validate
from otto_engine.cli.config import RunConfig, load_config
from otto_engine.cli.models import ValidationReport
from otto_engine.config import get_settings
from otto_engine.utils.errors import (
    CheckFailedError,
    ConfigError,
    InvalidInputError,
    OttoEngineError,
    SupportViolationError,
)
from otto_engine.utils.logging_config import get_logger, setup_logging

logger = get_logger("cli.main")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_SUPPORT = 4

COMMANDS: Dict[str, Callable[[RunConfig], Any]] = {
    "dist": cmd_dist,
    "sweep-tau": cmd_sweep_tau,
    "sweep-beta": cmd_sweep_beta,
    "sample": cmd_sample,
    "validate": cmd_validate,
}

# flag dest -> dotted config key
OVERRIDES = {
    "gamma1": "twolevel.gamma1",
    "gamma2": "twolevel.gamma2",
    "tau": "twolevel.tau",
    "omega": "twolevel.omega",
    "beta1": "twolevel.beta1",
    "beta2": "twolevel.beta2",
    "grouping_tol": "grouping_tol",
    "steps_per_unit": "steps_per_unit",
    "output_dir": "output_dir",
    "output": "output",
    "n_samples": "sample.n_samples",
    "seed": "sample.seed",
    "workers": "sample.workers",
    "chunk": "sample.chunk",
    "reference_beta1": "sample.reference_beta_cold",
    "reference_beta2": "sample.reference_beta_hot",
    "ratio": "sweep_beta.ratio",
}


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per command."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", "-c", help="JSON run-config file")
    common.add_argument("--output", "-o", help="Artifact path (default <output-dir>/<command>.<ext>)")
    common.add_argument("--output-dir", help="Artifact directory (default $OTTO_OUTPUT_DIR or ./output)")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    common.add_argument("--structured-logs", action="store_true", help="JSON log lines on stderr")
    common.add_argument("--log-file", help="Also write structured logs to this file")
    common.add_argument("--quiet", "-q", action="store_true", help="No console summary")

    model = common.add_argument_group("two-level parameters (override the config file)")
    for name in ("gamma1", "gamma2", "tau", "omega", "beta1", "beta2"):
        model.add_argument(f"--{name}", type=float, default=None)
    common.add_argument("--grouping-tol", type=float, default=None, help="Atom grouping tolerance")

    parser = argparse.ArgumentParser(
        prog="otto",
        description="Efficiency statistics of quantum Otto engines",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Efficiency distribution at the nonadiabatic demonstration point
  python run_otto.py dist

  # Same engine driven adiabatically
  python run_otto.py dist --config configs/adiabatic.json

  # Engine window and efficiencies over stroke durations
  python run_otto.py sweep-tau --config configs/sweep_tau.json

  # One million sampled cycles with a fixed seed
  python run_otto.py sample --n-samples 1000000 --seed 42
        """,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    subparsers.add_parser("dist", parents=[common], help="Exact efficiency distribution (JSON)")
    subparsers.add_parser("sweep-tau", parents=[common], help="Sweep the stroke duration (CSV)")
    sweep_beta = subparsers.add_parser("sweep-beta", parents=[common], help="Sweep the cold inverse temperature (CSV)")
    sweep_beta.add_argument("--ratio", type=float, default=None, help="beta1 / beta2 (default 10)")

    sample = subparsers.add_parser("sample", parents=[common], help="Monte Carlo estimate with goodness of fit (JSON)")
    sample.add_argument("--n-samples", type=int, default=None, help="Number of cycles (default 1e6)")
    sample.add_argument("--seed", type=int, default=None, help="Root seed (default 42)")
    sample.add_argument("--workers", type=int, default=None, help="Sampling threads (default 1)")
    sample.add_argument("--chunk", type=int, default=None, help="Cycles per seed stream")
    sample.add_argument("--reference-beta1", type=float, default=None, help="Compare against this beta1")
    sample.add_argument("--reference-beta2", type=float, default=None, help="Compare against this beta2")

    validate = subparsers.add_parser("validate", parents=[common], help="Run the cross-check suite")
    validate.add_argument("--steps-per-unit", type=float, default=None, help="Propagator resolution")
    return parser


def collect_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Dotted config overrides from the parsed flags that were given."""
    return {
        dotted: getattr(args, dest)
        for dest, dotted in OVERRIDES.items()
        if getattr(args, dest, None) is not None
    }


def print_summary(command: str, result: Any) -> None:
    """Short console summary of a finished command."""
    if isinstance(result, pd.DataFrame):
        print(f"✅ {command}: {len(result)} rows")
        print(result.head(10).to_string(index=False))
    elif isinstance(result, ValidationReport):
        for check in result.checks:
            mark = "✅" if check.passed else "❌"
            print(f"{mark} {check.name:32s} residual={check.residual!s:24s} tol={check.tolerance:.1e}")
    elif isinstance(result, dict):
        print(f"✅ {command}")
        shown = {k: v for k, v in result.items() if k in ("support", "moments", "goodness_of_fit")}
        print(json.dumps(shown, indent=2))


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one command and return its exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    setup_logging(
        level=args.log_level or get_settings().log_level,
        log_file=args.log_file,
        structured=args.structured_logs,
    )

    try:
        config = load_config(args.config, collect_overrides(args))
        result = COMMANDS[args.command](config)
    except ConfigError as e:
        logger.error(f"Usage error: {e}")
        return EXIT_USAGE
    except (InvalidInputError, ValidationError) as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_USAGE
    except SupportViolationError as e:
        logger.error(f"Support violation: {e}", extra={"extra_data": e.to_dict()})
        print(json.dumps(e.to_dict(), indent=2), file=sys.stderr)
        return EXIT_SUPPORT
    except CheckFailedError as e:
        logger.error(f"Validation failed: {e}")
        if not args.quiet:
            print(f"❌ {e}")
        return EXIT_VALIDATION
    except OttoEngineError as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_FAILURE

    if not args.quiet:
        print_summary(args.command, result)
    return EXIT_OK


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    run()
