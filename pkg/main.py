#!/usr/bin/env python3
"""
Main entry point for the critical intermittency laboratory
"""

import asyncio
import argparse
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv
from loguru import logger

sys.path.insert(0, str(Path(__file__).parent))

from src.exceptions import ConfigError, HypothesisViolation, LabError
from src.integration.lab_runner import COMMANDS, PRESETS, LabRunner
from src.processors.artifact_writer import ArtifactWriter, LabResult, dumps
from src.validators.config_validator import ConfigValidator

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_HYPOTHESIS = 3
EXIT_RUNTIME = 4
EXIT_INTERRUPTED = 130

JSON_COMMANDS = ("classify-lambda", "linearize")


def setup_logging(debug: bool = False):
    """Setup logging configuration"""
    log_level = "DEBUG" if debug else os.getenv("LOG_LEVEL", "INFO").upper()

    logger.remove()  # Remove default handler
    logger.add(
        sys.stderr,
        level=log_level,
        format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
    )

    # Add file logging
    logger.add(
        "logs/intermittency_lab.log",
        rotation="10 MB",
        retention="10 days",
        level=log_level,
        format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Critical intermittency laboratory for random iterations of two rational maps",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py classify-lambda --re 0 --im 0.5      # Closure class of {2^m lambda^n}
  python main.py linearize --map f0 --order 12        # Koenigs series of f0
  python main.py occupation --config data/experiments/occupation.json
  python main.py coverage --re 0.5 --im 0 --force     # Real-lambda negative control
  python main.py logistic --threads 4                 # Logistic cross-check, both probabilities
        """
    )

    parser.add_argument("--debug", action="store_true", help="Enable debug logging")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Run configuration JSON")
    common.add_argument("--re", type=float, help="Real part of lambda (or mu for the mobius family)")
    common.add_argument("--im", type=float, help="Imaginary part of lambda (or mu)")
    common.add_argument("--p0", type=float, help="Probability of the first map")
    common.add_argument("--steps", type=int, help="Orbit length per trial")
    common.add_argument("--trials", type=int, help="Independent trials")
    common.add_argument("--map", choices=["f0", "f1"], help="Map to linearize")
    common.add_argument("--order", type=int, help="Series truncation order")
    common.add_argument("--qmax", type=int, help="Largest denominator in rational detection")
    common.add_argument("--tol", type=float, help="Tolerance of rational detection")
    common.add_argument("--samples", type=int, help="Return-time samples, or curve samples for curve")
    common.add_argument("--threads", type=int, help="Worker processes for independent trials")
    common.add_argument("--output", help="Output directory")
    common.add_argument("--seed", type=int, help="Master seed")
    common.add_argument("--force", action="store_true", help="Run even when theorem hypotheses fail")

    subparsers = parser.add_subparsers(dest="command", help="Available commands")
    descriptions = {
        "simulate": "Orbit trace and finite-time Lyapunov exponent",
        "occupation": "Occupation fractions of B(0, epsilon)",
        "sojourn": "Laminar and burst decomposition with the occupation identity",
        "kac": "Return times to the fundamental annulus",
        "tail": "Hill tail index of laminar durations",
        "measure": "Empirical Cesaro measure on an equal-area grid",
        "coverage": "Semigroup-orbit coverage of the sphere",
        "classify-lambda": "Classify the closure of {2^m lambda^n}",
        "linearize": "Koenigs linearizer and simultaneous-linearization residual",
        "curve": "Image of the unit circle under f1 in w = z + 1",
        "invariants-check": "Candidate invariant sets of f1",
        "probe-nonnormal": "Growth of |v_n|/|z_n| along the cone word policy",
        "mobius": "Mobius preset: measure and occupation near the neutral fixed point",
        "logistic": "Logistic preset: occupation with both probability assignments",
    }
    for command in COMMANDS:
        subparsers.add_parser(command, parents=[common], help=descriptions[command])
    return parser


def collect_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Config layer made from the CLI flags that were given"""
    overrides: Dict[str, Dict[str, Any]] = {"system": {}, "run": {}, "probe": {}, "output": {}}
    pairs = [
        ("system", "p0", args.p0),
        ("run", "n_steps", args.steps),
        ("run", "trials", args.trials),
        ("run", "threads", args.threads),
        ("run", "seed", args.seed),
        ("probe", "map", args.map),
        ("probe", "K_series", args.order),
        ("probe", "qmax", args.qmax),
        ("probe", "tol", args.tol),
        ("output", "directory", args.output),
    ]
    if args.samples is not None:
        block, key = ("probe", "curve_samples") if args.command == "curve" else ("run", "samples")
        pairs.append((block, key, args.samples))
    for block, key, value in pairs:
        if value is not None:
            overrides[block][key] = value
    return {block: values for block, values in overrides.items() if values}


async def run_command(args: argparse.Namespace) -> LabResult:
    validator = ConfigValidator()
    parameter = None
    if args.re is not None or args.im is not None:
        parameter = (args.re or 0.0, args.im or 0.0)
    config = await validator.validate_config(
        args.config, collect_overrides(args), parameter, PRESETS.get(args.command)
    )

    runner = LabRunner(config, validator, force=args.force)
    result = await runner.run(args.command)

    writer = ArtifactWriter(config.output.directory, config.output.formats)
    writer.emit(result, config.resolved(), config.config_hash())
    return result


async def main(argv: Optional[List[str]] = None) -> int:
    """Main application entry point; returns the process exit code"""
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)

    # Create logs directory
    Path("logs").mkdir(exist_ok=True)

    # Setup logging
    setup_logging(args.debug)

    if not args.command:
        parser.print_help()
        return EXIT_CONFIG

    logger.info(f"Starting critical intermittency lab: {args.command}")

    try:
        result = await run_command(args)
        if args.command in JSON_COMMANDS:
            print(dumps(next(iter(result.documents.values()))), end="")
        else:
            print_result(result)
        return EXIT_OK

    except KeyboardInterrupt:
        logger.info("Received interrupt signal, shutting down...")
        return EXIT_INTERRUPTED
    except ConfigError as e:
        logger.error(f"Configuration error: {str(e)}")
        return EXIT_CONFIG
    except HypothesisViolation as e:
        logger.error(f"Hypothesis violation: {str(e)}")
        return EXIT_HYPOTHESIS
    except (LabError, ArithmeticError, FloatingPointError, OSError) as e:
        logger.error(f"Application error: {str(e)}")
        if args.debug:
            raise
        return EXIT_RUNTIME


def dispatch(argv: Optional[List[str]] = None) -> int:
    return asyncio.run(main(argv))


def print_result(result: LabResult):
    """Pretty print experiment results"""
    print(f"\n🔍 EXPERIMENT: {result.command}")

    if result.summary:
        print("\n📊 SUMMARY:")
        for key, value in result.summary.items():
            if isinstance(value, dict):
                print(f"  {key}:")
                for inner_key, inner_value in value.items():
                    print(f"    {inner_key}: {inner_value}")
            else:
                print(f"  {key}: {value}")

    if result.hypothesis:
        print(f"\n📋 REGIME: {result.hypothesis.get('regime')}")
        for warning in result.hypothesis.get("warnings", []):
            print(f"  ⚠️  {warning}")

    names = [f"{name}.csv" for name in result.frames] + [f"{name}.json" for name in result.documents]
    print(f"\n💾 Artifacts: {', '.join(sorted(names))}")


if __name__ == "__main__":
    sys.exit(dispatch())
