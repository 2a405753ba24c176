"""Verification suites dispatched by name."""

import logging
from typing import Optional

from ..treespectra.arith import ScalarBackend, TreeSpectraError
from .ledgers import lemma41_suite, lemma42_suite, lemma43_suite, theorem41_suite
from .models import SuiteReport
from .probes import DEFAULT_CLUSTER_TOLERANCE, property_c_counterexample
from .sweeps import extremes_sweep, lemma31_sweep, lemma32_sweep, oracle_sweep, random_tree_corpus
from .trace import check_exclusivity


logger = logging.getLogger(__name__)

SUITE_NAMES = (
    "lemma41",
    "lemma42",
    "lemma43",
    "lemma31",
    "lemma32",
    "exclusivity",
    "property-c",
    "theorem41",
    "oracle",
    "extremes",
)

DEFAULT_SAMPLES = {
    "lemma41": 50,
    "lemma42": 50,
    "lemma43": 20,
    "lemma31": 200,
    "lemma32": 200,
    "exclusivity": 10_000,
    "property-c": 10_000,
    "theorem41": 100,
    "oracle": 1000,
    "extremes": 200,
}


class UnknownSuiteError(TreeSpectraError, ValueError):
    """Raised for a suite name outside SUITE_NAMES."""
    pass


def run_suite(
    name: str,
    samples: Optional[int] = None,
    rng_seed: int = 0,
    backend: Optional[ScalarBackend] = None,
    tolerance: float = DEFAULT_CLUSTER_TOLERANCE,
    threads: Optional[int] = None,
    oracle_max_n: Optional[int] = None,
) -> SuiteReport:
    """
    Run one suite.

    Args:
        name: One of SUITE_NAMES
        samples: Instance count (suite default when omitted)
        rng_seed: Base seed for every random draw
        backend: Float backend for the random-tree sweeps
        tolerance: Clustering tolerance for the property-c probe
        threads: Worker cap
        oracle_max_n: Oracle size cap for certification

    Returns:
        SuiteReport; ``passed`` is False on any failing check
    """
    if name not in SUITE_NAMES:
        raise UnknownSuiteError(f"Unknown suite: {name}; expected one of {', '.join(SUITE_NAMES)}")
    count = DEFAULT_SAMPLES[name] if samples is None else samples
    backend = backend or ScalarBackend.floating(1e-7)
    logger.info(f"Running suite {name} with {count} samples, seed {rng_seed}")

    if name == "lemma41":
        return lemma41_suite(count, rng_seed)
    elif name == "lemma42":
        return lemma42_suite(count, rng_seed)
    elif name == "lemma43":
        return lemma43_suite(count, rng_seed)
    elif name == "lemma31":
        return lemma31_sweep(random_tree_corpus(count, rng_seed), backend, threads)
    elif name == "lemma32":
        return lemma32_sweep(random_tree_corpus(count, rng_seed), backend, threads)
    elif name == "extremes":
        return extremes_sweep(random_tree_corpus(count, rng_seed), backend, threads)
    elif name == "oracle":
        return oracle_sweep(count, rng_seed, threads=threads)
    elif name == "theorem41":
        return theorem41_suite(count, rng_seed, threads=threads, oracle_max_n=oracle_max_n)
    elif name == "exclusivity":
        report = check_exclusivity(samples=count, rng_seed=rng_seed)
        return SuiteReport(
            suite=name,
            passed=report.passed,
            checks=report.samples,
            failures=[{"values": values} for values in report.counterexamples],
            details=report.model_dump(mode="json"),
        )
    else:
        report = property_c_counterexample(count, rng_seed, tolerance=tolerance, threads=threads)
        return SuiteReport(
            suite=name,
            passed=report.passed,
            checks=report.probe.samples + report.exclusivity.samples,
            evidence_only=True,
            details=report.model_dump(mode="json"),
        )
