"""Tests for trace identities, sweeps, ledgers, probes and the suite registry."""

from fractions import Fraction

import numpy as np
import pytest

from src.treespectra.arith import ScalarBackend
from src.treespectra.models import SeedId
from src.treespectra.trees import RootedForest
from src.verifier.ledgers import lemma41_suite, lemma42_suite, lemma43_suite, random_spec, theorem41_suite
from src.verifier.models import EntryDistribution
from src.verifier.probes import (
    cluster_eigenvalues,
    count_distinct,
    defectiveness_probe,
    probe_counterexample,
    property_c_counterexample,
    sample_matrix,
    witness_forest_matrix,
)
from src.verifier.suites import SUITE_NAMES, UnknownSuiteError, run_suite
from src.verifier.sweeps import (
    BackendMismatchError,
    exact_root_zero_statistics,
    extremes_sweep,
    lemma31_sweep,
    lemma32_sweep,
    oracle_sweep,
    random_tree_corpus,
    root_zero_statistics,
)
from src.verifier.trace import (
    PairingVariant,
    UnsortedSpectrumError,
    check_exclusivity,
    check_trace_identity_T1,
    forced_difference,
    forced_extra_eigenvalue,
    linear_form,
    render_form,
)


def test_trace_identity():
    """Test the pair-sum identity on sorted five-value spectra."""
    assert check_trace_identity_T1([1, 2, 3, 4, 5])
    assert check_trace_identity_T1([Fraction(-3), Fraction(-1), 0, 1, 3])
    assert not check_trace_identity_T1([0, 1, 2, 3, 5])


@pytest.mark.parametrize("values", [[1, 2, 3, 4], [1, 3, 2, 4, 5], [1, 1, 2, 3, 4]])
def test_trace_identity_rejects(values):
    """Test unsorted or wrongly sized inputs raise UnsortedSpectrumError."""
    with pytest.raises(UnsortedSpectrumError):
        check_trace_identity_T1(values)


def test_forced_extra_eigenvalue():
    """Test both pairings determine the extra value."""
    values = [0, 1, 2, 3, 5]
    assert forced_extra_eigenvalue(values, PairingVariant.PAIRED_WITH_SECOND) == 4
    assert forced_extra_eigenvalue(values, "fourth") == 2


def test_forced_difference():
    """Test each pairing minus the trace identity leaves the excluded difference."""
    assert forced_difference(PairingVariant.PAIRED_WITH_SECOND) == linear_form(ls=1, l4=-1)
    assert forced_difference(PairingVariant.PAIRED_WITH_FOURTH) == linear_form(ls=1, l2=-1)
    assert render_form(forced_difference(PairingVariant.PAIRED_WITH_SECOND)) == "- l4 + l*"
    assert render_form({}) == "0"


def test_check_exclusivity():
    """Test the sampled check passes and half the samples obey the identity."""
    report = check_exclusivity(samples=200, rng_seed=1)
    assert report.passed
    assert report.samples == 200
    assert report.satisfying_samples >= 100
    assert report.counterexamples == []
    assert set(report.symbolic) == {"second", "fourth"}


def test_cluster_eigenvalues():
    """Test neighbours within the relative gap merge."""
    clusters = cluster_eigenvalues([2.0, 0.0, 1e-9, 1.0], 1e-6)
    assert [len(c) for c in clusters] == [2, 1, 1]
    assert cluster_eigenvalues([], 1e-6) == []


def test_count_distinct(broom):
    """Test clustered and exact distinct counts agree."""
    assert count_distinct(broom, 1e-6) == 5
    assert count_distinct(broom, 0) == 5


def test_sample_matrix_range():
    """Test sampled entries follow the eighths distribution."""
    forest = RootedForest.from_parents([2, 2, None])
    M = sample_matrix(forest, np.random.default_rng(0), EntryDistribution.EIGHTHS)
    assert all(-2 <= value <= 2 and (value * 8).denominator == 1 for value in M.diag)
    assert all(w2 is None or 0 < w2 <= 2 for w2 in M.sq_weight)


def test_probe_without_samples():
    """Test an empty probe reports an empty histogram."""
    report = defectiveness_probe(RootedForest.from_parents([1, None]), 0, 0, floor=2)
    assert report.histogram == {}
    assert report.min_distinct_found is None
    assert report.floor_respected


def test_probe_independent_of_threads():
    """Test reports do not depend on the worker count."""
    forest = RootedForest.from_parents([3, 3, 3, None])
    one = defectiveness_probe(forest, 6, 11, floor=2, threads=1)
    four = defectiveness_probe(forest, 6, 11, floor=2, threads=4)
    assert one.model_dump() == four.model_dump()
    assert sum(one.histogram.values()) == 6


def test_probe_counterexample():
    """Test random matrices on the 32-vertex tree need at least eight values."""
    report = probe_counterexample(SeedId.S7_8, 2, 0, tolerance=0)
    assert report.n == 32
    assert report.designed_sample_distinct == 8
    assert report.min_distinct_found >= 8
    assert report.floor_respected


def test_witness_forest():
    """Test the union of two five-value witnesses has six values."""
    witness = witness_forest_matrix()
    assert witness.n == 15
    assert len(witness.forest.roots) == 2


def test_property_c_counterexample():
    """Test the forest needs more values than either component."""
    report = property_c_counterexample(3, 0, tolerance=0)
    assert report.component_distinct == {"double-broom": 5, "double-broom-plus-pendant": 5}
    assert report.union_distinct == 6
    assert report.probe.designed_sample_distinct == 6
    assert report.passed


def test_random_tree_corpus_reproducible():
    """Test corpus instances depend only on the seed and index."""
    assert random_tree_corpus(5, 3) == random_tree_corpus(5, 3)
    assert random_tree_corpus(3, 3) == random_tree_corpus(5, 3)[:3]
    assert all(M.forest.is_tree and M.forest.height <= 4 for M in random_tree_corpus(10, 0))


def test_root_zero_statistics_need_float(broom):
    """Test float-candidate statistics refuse the exact backend."""
    with pytest.raises(BackendMismatchError):
        root_zero_statistics(broom, ScalarBackend.exact())


def test_exact_root_zero_statistics(broom, broom_plus_pendant):
    """Test three root values and two at the level below."""
    assert exact_root_zero_statistics(broom) == (3, 2)
    assert exact_root_zero_statistics(broom_plus_pendant) == (3, 2)


def test_root_zero_statistics_float(broom):
    """Test float candidates reproduce the exact statistics."""
    assert root_zero_statistics(broom, ScalarBackend.floating(1e-7)) == (3, 2)


def test_lemma31_families_pass():
    """Test the family instances of the root-zero sweep."""
    report = lemma31_sweep(random_tree_corpus(4, 0), ScalarBackend.floating(1e-7))
    assert report.checks == 10
    assert not any("family" in failure for failure in report.failures)
    assert report.evidence_only
    assert report.passed


def test_lemma32_sweep_random_corpus():
    """Test every seeded random tree has at least depth + 1 root-zero values."""
    report = lemma32_sweep(random_tree_corpus(40, 3), ScalarBackend.floating(1e-7))
    assert report.checks == 46
    assert report.passed
    assert report.details["failure_count"] == 0


def test_extremes_sweep_random_corpus():
    """Test only the root ends at zero at the extreme eigenvalues of seeded random trees."""
    report = extremes_sweep(random_tree_corpus(40, 3), ScalarBackend.floating(1e-7))
    assert report.checks == 40
    assert report.passed
    assert report.details["failure_count"] == 0


@pytest.mark.parametrize("suite, checks", [("lemma31", 206), ("lemma32", 206), ("extremes", 200)])
def test_random_tree_suites_have_no_failures(suite, checks):
    """Test the 200-tree sweeps record zero failures under seed 0."""
    report = run_suite(suite, samples=200, rng_seed=0)
    assert report.checks == checks
    assert report.passed
    assert report.details["failure_count"] == 0


def test_extremes_sweep(broom, broom_plus_pendant):
    """Test the extreme-eigenvalue property on the families."""
    report = extremes_sweep([broom, broom_plus_pendant], ScalarBackend.floating(1e-7))
    assert report.passed
    assert report.checks == 2


def test_oracle_sweep():
    """Test the engine agrees with Sturm counts on random rational trees."""
    report = oracle_sweep(3, 0, points_per_tree=4)
    assert report.passed
    assert report.checks == 12


def test_oracle_sweep_larger_corpus():
    """Test locate and Sturm counts agree on forty seeded rational trees."""
    report = oracle_sweep(40, 5, points_per_tree=6)
    assert report.passed
    assert report.checks == 240
    assert report.details["failure_count"] == 0


def test_ledger_suites():
    """Test the block ledgers hold on pinned and random parameters."""
    assert lemma41_suite(3, 0).passed
    assert lemma42_suite(3, 0).passed
    report = lemma43_suite(2, 0)
    assert report.passed
    assert report.details["instances"] == 9


def test_random_spec_respects_seed():
    """Test random specs carry the parameters their seed uses."""
    rng = np.random.default_rng(5)
    spec = random_spec(SeedId.S7_9, rng, limit=2)
    assert spec.s0_params.s0 is None
    assert spec.s0_params.s is not None
    assert all(1 <= t <= 2 for b in spec.branch1_params for t in b.t)


def test_theorem41_suite():
    """Test random unfoldings and the counterexamples certify."""
    report = theorem41_suite(1, 0, oracle_max_n=0)
    assert report.passed
    assert report.details["random_specs"] == 3


def test_run_suite_dispatch():
    """Test suites run by name."""
    assert "property-c" in SUITE_NAMES
    report = run_suite("exclusivity", samples=20)
    assert report.suite == "exclusivity"
    assert report.passed
    with pytest.raises(UnknownSuiteError):
        run_suite("lemma99")
    with pytest.raises(BackendMismatchError):
        run_suite("lemma32", samples=2, backend=ScalarBackend.exact())
