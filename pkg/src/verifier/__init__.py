"""Exact ledgers, sweeps, trace algebra and randomized probes."""

from .models import EntryDistribution, ExclusivityReport, ProbeReport, PropertyCReport, SuiteReport
from .probes import (
    cluster_eigenvalues,
    count_distinct,
    defectiveness_probe,
    probe_counterexample,
    property_c_counterexample,
)
from .suites import SUITE_NAMES, UnknownSuiteError, run_suite
from .sweeps import BackendMismatchError, lemma31_sweep, lemma32_sweep, random_tree_corpus
from .trace import (
    PairingVariant,
    UnsortedSpectrumError,
    check_exclusivity,
    check_trace_identity_T1,
    forced_extra_eigenvalue,
)

__all__ = [
    "EntryDistribution",
    "ExclusivityReport",
    "ProbeReport",
    "PropertyCReport",
    "SuiteReport",
    "cluster_eigenvalues",
    "count_distinct",
    "defectiveness_probe",
    "probe_counterexample",
    "property_c_counterexample",
    "SUITE_NAMES",
    "UnknownSuiteError",
    "run_suite",
    "BackendMismatchError",
    "lemma31_sweep",
    "lemma32_sweep",
    "random_tree_corpus",
    "PairingVariant",
    "UnsortedSpectrumError",
    "check_exclusivity",
    "check_trace_identity_T1",
    "forced_extra_eigenvalue",
]
