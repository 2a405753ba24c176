"""Command-line entry point for the tree spectra toolkit."""

import argparse
import json
import logging
import sys
from typing import Callable, Dict, List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from ..realization.builders import RealizationError
from ..realization.certify import CertificationError
from ..treespectra.arith import RationalParseError, TreeSpectraError
from ..treespectra.charpoly import PolynomialError
from ..treespectra.config import ToolkitSettings, configure_logging
from ..treespectra.diagonalize import LevelRangeError
from ..treespectra.matrix import InvalidMatrixError, MatrixFormatError
from ..treespectra.models import SeedId
from ..treespectra.trees import InvalidTreeError, TreeFormatError
from ..verifier.suites import SUITE_NAMES, UnknownSuiteError
from ..verifier.sweeps import BackendMismatchError
from .commands import (
    CommandResult,
    cmd_charpoly,
    cmd_diag,
    cmd_probe,
    cmd_realize,
    cmd_verify,
    render,
)
from .models import CommandConfig, ExitCode, OutputFormat, ProbeTarget


logger = logging.getLogger(__name__)

Handler = Callable[[CommandConfig, argparse.Namespace, ToolkitSettings], CommandResult]

USAGE_ERRORS = (
    RationalParseError,
    MatrixFormatError,
    TreeFormatError,
    PolynomialError,
    RealizationError,
    BackendMismatchError,
    UnknownSuiteError,
    ValidationError,
    json.JSONDecodeError,
    OSError,
)
INVARIANT_ERRORS = (InvalidMatrixError, InvalidTreeError, LevelRangeError)


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", dest="output_format", choices=[f.value for f in OutputFormat], default="json")
    parser.add_argument("--threads", type=int, default=None, help="Worker cap (default TREESPECTRA_THREADS)")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per command."""
    parser = argparse.ArgumentParser(
        prog="treespectra",
        description="Exact spectra of symmetric matrices supported on trees",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    diag = subparsers.add_parser("diag", help="Diagonalize a tree matrix at one point")
    diag.add_argument("matrix", help="Matrix JSON file")
    point = diag.add_mutually_exclusive_group(required=True)
    point.add_argument("--at", dest="at", help="Eigenvalue candidate lambda (runs at x = -lambda)")
    point.add_argument("--x", dest="x", help="Diagonal shift x")
    diag.add_argument("--backend", choices=["exact", "float"], default="exact")
    diag.add_argument("--tol", type=float, default=None, help="Float zero tolerance")
    diag.add_argument("--level", type=int, default=None, help="Add the level-zero table of T_j")
    diag.add_argument("--candidates", nargs="+", default=None, help="Candidates for the N count")
    _common(diag)

    realize = subparsers.add_parser("realize", help="Assemble and certify an unfolding matrix")
    realize.add_argument("--seed", required=True, choices=[s.value for s in SeedId])
    realize.add_argument("--spec", default=None, help="UnfoldingSpec JSON (default: the counterexample)")
    realize.add_argument("--coupling2", default=None, help="Entry on the second-family edges")
    realize.add_argument("--out-matrix", dest="out_matrix", default=None)
    realize.add_argument("--out-certificate", dest="out_certificate", default=None)
    realize.add_argument("--oracle-max-n", dest="oracle_max_n", type=int, default=None)
    _common(realize)

    verify = subparsers.add_parser("verify", help="Run a verification suite")
    verify.add_argument("--suite", required=True, choices=list(SUITE_NAMES))
    verify.add_argument("--samples", type=int, default=None)
    verify.add_argument("--seed", dest="rng_seed", type=int, default=0)
    verify.add_argument("--tol", type=float, default=None, help="Clustering tolerance")
    verify.add_argument("--backend", choices=["exact", "float"], default="float")
    _common(verify)

    probe = subparsers.add_parser(
        "probe",
        help="Distinct-eigenvalue histogram over random matrices (forest-T1T3 adds the property-c evidence)",
    )
    probe.add_argument("--tree", required=True, choices=[t.value for t in ProbeTarget])
    probe.add_argument("--samples", type=int, default=None)
    probe.add_argument("--seed", dest="rng_seed", type=int, default=0)
    probe.add_argument("--tol", type=float, default=None, help="Clustering tolerance (0 counts exactly)")
    _common(probe)

    poly = subparsers.add_parser("charpoly", help="Exact characteristic polynomial")
    poly.add_argument("matrix", help="Matrix JSON file")
    poly.add_argument("--count-in", dest="count_in", nargs=2, metavar=("A", "B"), default=None)
    poly.add_argument("--multiplicity-at", dest="multiplicity_at", default=None)
    poly.add_argument("--spectrum", action="store_true", help="Add the sorted real spectrum")
    _common(poly)

    return parser


HANDLERS: Dict[str, Handler] = {
    "diag": cmd_diag,
    "realize": cmd_realize,
    "verify": cmd_verify,
    "probe": cmd_probe,
    "charpoly": cmd_charpoly,
}


def build_config(args: argparse.Namespace, settings: ToolkitSettings) -> CommandConfig:
    """Merge parsed flags over environment settings."""
    return CommandConfig(
        subcommand=args.command,
        matrix_path=getattr(args, "matrix", None),
        spec_path=getattr(args, "spec", None),
        at=getattr(args, "at", None),
        x=getattr(args, "x", None),
        backend=getattr(args, "backend", "exact"),
        tolerance=getattr(args, "tol", None),
        rng_seed=getattr(args, "rng_seed", 0),
        samples=getattr(args, "samples", None),
        threads=args.threads if args.threads is not None else settings.threads,
        output_format=args.output_format,
        candidates=getattr(args, "candidates", None),
    )


def run(argv: Optional[List[str]] = None) -> int:
    """Parse, dispatch and print; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return ExitCode.OK if e.code == 0 else ExitCode.USAGE

    try:
        settings = ToolkitSettings.from_env()
    except ValueError as e:
        configure_logging()
        logger.error(f"Invalid environment settings: {e}")
        return ExitCode.USAGE
    configure_logging(settings.log_level)

    try:
        config = build_config(args, settings)
        result = HANDLERS[config.subcommand](config, args, settings)
    except CertificationError as e:
        logger.error(f"Certification failed: {e}")
        return ExitCode.CERTIFICATION
    except INVARIANT_ERRORS as e:
        logger.error(f"Invariant violation: {e}")
        return ExitCode.INVARIANT
    except USAGE_ERRORS as e:
        logger.error(f"Invalid input: {e}")
        return ExitCode.USAGE
    except TreeSpectraError as e:
        logger.error(f"Invariant violation: {e}")
        return ExitCode.INVARIANT

    sys.stdout.write(render(result, config.output_format) + "\n")
    return int(result.exit_code)


def main(argv: Optional[List[str]] = None) -> None:
    """Console-script entry point."""
    load_dotenv()
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
