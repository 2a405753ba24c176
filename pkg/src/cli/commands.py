"""Subcommand handlers; each returns a JSON-ready payload and an exit code."""

import argparse
import json
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from ..realization.builders import RealizationError, assemble
from ..realization.certify import certify
from ..treespectra.arith import BackendMode, ScalarBackend, format_rational, parse_rational
from ..treespectra.charpoly import RootCounter, charpoly, count_roots, float_spectrum, gershgorin_bound
from ..treespectra.config import ToolkitSettings
from ..treespectra.diagonalize import count_N, diagonalize, level_zero_table
from ..treespectra.matrix import WeightedTreeMatrix
from ..treespectra.models import SeedId, UnfoldingSpec
from ..treespectra.unfolding import counterexample_spec
from ..verifier.probes import (
    DEFAULT_CLUSTER_TOLERANCE,
    probe_counterexample,
    property_c_counterexample,
)
from ..verifier.suites import run_suite
from .models import SCHEMA_VERSION, CommandConfig, ExitCode, OutputFormat, ProbeTarget


logger = logging.getLogger(__name__)


@dataclass
class CommandResult:
    """Payload printed on stdout plus the process exit code."""
    payload: Dict[str, Any]
    exit_code: ExitCode = ExitCode.OK


def dump_json(data: Any) -> str:
    """Deterministic JSON rendering used for stdout and output files."""
    return json.dumps(data, indent=2, sort_keys=True)


def load_json(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def write_json(path: str, data: Any) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dump_json(data) + "\n")
    logger.info(f"Wrote {path}")


def _envelope(command: str, **body: Any) -> Dict[str, Any]:
    return {"schema": SCHEMA_VERSION, "command": command, **body}


def _backend(config: CommandConfig, default_tolerance: float) -> ScalarBackend:
    if config.backend == BackendMode.EXACT:
        return ScalarBackend.exact()
    return ScalarBackend.floating(config.tolerance or default_tolerance)


def render_text(payload: Dict[str, Any]) -> str:
    """Flatten a payload to ``dotted.key: value`` lines in sorted key order."""
    lines: List[str] = []

    def walk(prefix: str, value: Any) -> None:
        if isinstance(value, dict):
            for key in sorted(value):
                walk(f"{prefix}.{key}" if prefix else str(key), value[key])
        elif isinstance(value, list) and any(isinstance(item, (dict, list)) for item in value):
            for index, item in enumerate(value):
                walk(f"{prefix}[{index}]", item)
        else:
            lines.append(f"{prefix}: {json.dumps(value)}")

    walk("", payload)
    return "\n".join(lines)


def render(result: CommandResult, output_format: OutputFormat) -> str:
    if output_format == OutputFormat.TEXT:
        return render_text(result.payload)
    return dump_json(result.payload)


def cmd_diag(config: CommandConfig, args: argparse.Namespace, settings: ToolkitSettings) -> CommandResult:
    """Diagonalize a matrix file at one point."""
    backend = _backend(config, settings.zero_tolerance)
    M = WeightedTreeMatrix.from_json(load_json(config.matrix_path), backend)
    if config.at is not None:
        lam = parse_rational(config.at)
        x = -lam
    else:
        x = parse_rational(config.x)
        lam = -x
    outcome = diagonalize(M, x, backend)
    body: Dict[str, Any] = {
        "n": M.n,
        "backend": backend.mode.value,
        "x": format_rational(x),
        "lambda": format_rational(lam),
        "outcome": outcome.to_dict(exact=backend.is_exact),
    }
    if args.level is not None:
        table = level_zero_table(M, args.level, lam, backend)
        body["level_zero_table"] = {"level": args.level, "zeros": {str(k): v for k, v in table.items()}}
    if config.candidates:
        points = [parse_rational(c) for c in config.candidates]
        body["count_N"] = {
            "candidates": [format_rational(p) for p in sorted(set(points))],
            "N": count_N(M, points, backend),
        }
    logger.info(f"diag n={M.n} at lambda={lam}: inertia {outcome.inertia}")
    return CommandResult(_envelope("diag", **body))


def _load_spec(seed: SeedId, spec_path: Optional[str]) -> UnfoldingSpec:
    if spec_path is None:
        return counterexample_spec(seed)
    spec = UnfoldingSpec.model_validate(load_json(spec_path))
    if spec.seed != seed:
        logger.error(f"Spec file is for {spec.seed.value}, --seed says {seed.value}")
        raise RealizationError(f"Spec seed {spec.seed.value} does not match --seed {seed.value}")
    return spec


def cmd_realize(config: CommandConfig, args: argparse.Namespace, settings: ToolkitSettings) -> CommandResult:
    """Assemble and certify the matrix of one unfolding."""
    seed = SeedId(args.seed)
    spec = _load_spec(seed, config.spec_path)
    coupling2 = parse_rational(args.coupling2) if args.coupling2 is not None else None
    M = assemble(spec, coupling2)
    oracle_max_n = args.oracle_max_n if args.oracle_max_n is not None else settings.oracle_max_n
    certificate = certify(M, spec, coupling2, oracle_max_n=oracle_max_n)

    matrix_json = M.to_json()
    certificate_json = certificate.model_dump(mode="json")
    if args.out_matrix:
        write_json(args.out_matrix, matrix_json)
    if args.out_certificate:
        write_json(args.out_certificate, certificate_json)
    return CommandResult(_envelope("realize", matrix=matrix_json, certificate=certificate_json))


def cmd_verify(config: CommandConfig, args: argparse.Namespace, settings: ToolkitSettings) -> CommandResult:
    """Run one named verification suite."""
    backend = _backend(config, settings.sweep_tolerance)
    report = run_suite(
        args.suite,
        samples=config.samples,
        rng_seed=config.rng_seed,
        backend=backend,
        tolerance=DEFAULT_CLUSTER_TOLERANCE if config.tolerance is None else config.tolerance,
        threads=config.threads,
        oracle_max_n=settings.oracle_max_n,
    )
    exit_code = ExitCode.OK if report.passed else ExitCode.VERIFICATION
    if not report.passed:
        logger.error(f"Suite {report.suite} failed {report.details.get('failure_count', '')} checks")
    return CommandResult(_envelope("verify", report=report.model_dump(mode="json")), exit_code)


def cmd_probe(config: CommandConfig, args: argparse.Namespace, settings: ToolkitSettings) -> CommandResult:
    """Histogram distinct-eigenvalue counts on a counterexample tree or the witness forest."""
    target = ProbeTarget(args.tree)
    samples = 10_000 if config.samples is None else config.samples
    tolerance = DEFAULT_CLUSTER_TOLERANCE if config.tolerance is None else config.tolerance
    if target == ProbeTarget.FOREST:
        evidence = property_c_counterexample(samples, config.rng_seed, tolerance=tolerance, threads=config.threads)
        exit_code = ExitCode.OK if evidence.passed else ExitCode.VERIFICATION
        if not evidence.passed:
            logger.error(f"Witness forest evidence failed: union {evidence.union_distinct}, floor {evidence.floor}")
        return CommandResult(
            _envelope(
                "probe",
                report=evidence.probe.model_dump(mode="json"),
                property_c=evidence.model_dump(mode="json", exclude={"probe"}),
            ),
            exit_code,
        )

    report = probe_counterexample(
        SeedId(target.value), samples, config.rng_seed, tolerance=tolerance, threads=config.threads
    )
    exit_code = ExitCode.OK if report.floor_respected else ExitCode.VERIFICATION
    return CommandResult(_envelope("probe", report=report.model_dump(mode="json")), exit_code)


def cmd_charpoly(config: CommandConfig, args: argparse.Namespace, settings: ToolkitSettings) -> CommandResult:
    """Exact characteristic polynomial with optional Sturm queries."""
    M = WeightedTreeMatrix.from_json(load_json(config.matrix_path))
    p = charpoly(M)
    counter = RootCounter(p)
    bound = gershgorin_bound(M)
    body: Dict[str, Any] = {
        "n": M.n,
        "coefficients": p.to_json(),
        "polynomial": str(p),
        "distinct_count": counter.distinct(-bound, bound),
        "gershgorin_bound": bound,
    }
    if args.count_in is not None:
        a, b = (parse_rational(v) for v in args.count_in)
        body["count_in"] = {
            "interval": [format_rational(a), format_rational(b)],
            "with_multiplicity": count_roots(p, a, b),
            "distinct": counter.distinct(a, b),
        }
    if args.multiplicity_at is not None:
        lam = parse_rational(args.multiplicity_at)
        body["multiplicity_at"] = {"lambda": format_rational(lam), "multiplicity": counter.multiplicity(lam)}
    if args.spectrum:
        body["spectrum"] = float_spectrum(M)
    return CommandResult(_envelope("charpoly", **body))

