"""Root-zero counting sweeps over random trees and the rational-spectrum families."""

import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..realization.builders import build_T1_matrix, build_T2_matrix
from ..realization.certify import LEDGER_POINTS, rational_spectrum
from ..treespectra.arith import ScalarBackend, TreeSpectraError
from ..treespectra.charpoly import RootCounter, charpoly, gershgorin_bound
from ..treespectra.diagonalize import count_N, extreme_root_check, locate, root_zero_count
from ..treespectra.matrix import WeightedTreeMatrix
from ..treespectra.parallel import parallel_map
from ..treespectra.trees import RootedForest
from .models import SuiteReport
from .probes import DEFAULT_CLUSTER_TOLERANCE, cluster_eigenvalues


logger = logging.getLogger(__name__)

MAX_REPORTED_FAILURES = 5


class BackendMismatchError(TreeSpectraError, ValueError):
    """Raised when a float-only operation is requested with the exact backend."""
    pass


def _random_parents(rng: np.random.Generator, n: int, max_depth: int) -> List[Optional[int]]:
    parents: List[Optional[int]] = [None]
    depth = [0]
    for _ in range(1, n):
        eligible = [v for v in range(len(parents)) if depth[v] < max_depth]
        parent = int(rng.choice(eligible))
        parents.append(parent)
        depth.append(depth[parent] + 1)
    return parents


def random_tree(rng: np.random.Generator, max_depth: int = 4, max_n: int = 14) -> WeightedTreeMatrix:
    """Integer diagonals in [-2, 2] and squared weights in 1..5."""
    n = int(rng.integers(1, max_n + 1))
    parents = _random_parents(rng, n, max_depth)
    diag = tuple(Fraction(int(v)) for v in rng.integers(-2, 3, size=n))
    weights = tuple(
        Fraction(int(w)) if p is not None else None for w, p in zip(rng.integers(1, 6, size=n), parents)
    )
    return WeightedTreeMatrix(RootedForest(tuple(parents)), diag, weights)


def random_rational_tree(rng: np.random.Generator, max_n: int = 12) -> WeightedTreeMatrix:
    """Entries with numerators and denominators of absolute value at most 9."""
    n = int(rng.integers(1, max_n + 1))
    parents = _random_parents(rng, n, max_depth=n)

    def rational(low: int) -> Fraction:
        return Fraction(int(rng.integers(low, 10)), int(rng.integers(1, 10)))

    diag = tuple(rational(-9) for _ in range(n))
    weights = tuple(rational(1) if p is not None else None for p in parents)
    return WeightedTreeMatrix(RootedForest(tuple(parents)), diag, weights)


def random_tree_corpus(
    count: int, rng_seed: int, max_depth: int = 4, max_n: int = 14
) -> List[WeightedTreeMatrix]:
    """Instance i is drawn from ``default_rng([rng_seed, i])``."""
    return [
        random_tree(np.random.default_rng([rng_seed, index]), max_depth, max_n) for index in range(count)
    ]


def _float_candidates(M: WeightedTreeMatrix) -> List[float]:
    clusters = cluster_eigenvalues(M.eigenvalues(), DEFAULT_CLUSTER_TOLERANCE)
    return [sum(c) / len(c) for c in clusters]


def _require_float(backend: ScalarBackend) -> None:
    if backend.is_exact:
        logger.error("Random-tree sweep requested with the exact backend")
        raise BackendMismatchError(
            "Random-tree sweeps take candidates from float eigenvalues; use the float backend"
        )


def root_zero_statistics(M: WeightedTreeMatrix, backend: ScalarBackend) -> Tuple[int, int]:
    """
    ``(m_kk, N)`` on the float backend with eigenvalue candidates.

    Root zeros are counted over the eigenvalues of M; level ``k-1`` zeros
    over the eigenvalues of the truncation to levels ``0..k-1``.
    """
    _require_float(backend)
    m_kk = root_zero_count(M, _float_candidates(M), backend)
    k = M.forest.height
    if k == 0:
        return m_kk, 0
    truncated, _ = M.truncate(k - 1)
    return m_kk, count_N(M, _float_candidates(truncated), backend)


def exact_root_zero_statistics(
    M: WeightedTreeMatrix, candidates: Sequence[Any] = LEDGER_POINTS
) -> Tuple[int, int]:
    """
    ``(m_kk, N)`` over rational candidates, after checking they are complete.

    Completeness means the candidates carry every eigenvalue of M and of its
    depth ``k-1`` truncation.
    """
    rational_spectrum(M, candidates)
    k = M.forest.height
    if k > 0:
        rational_spectrum(M.truncate(k - 1)[0], candidates)
    return root_zero_count(M, candidates), count_N(M, candidates)


def _describe(M: WeightedTreeMatrix, **extra: Any) -> Dict[str, Any]:
    return {"matrix": M.to_json(), **extra}


def _report(
    suite: str, checks: int, failures: List[Dict[str, Any]], evidence_only: bool, **details: Any
) -> SuiteReport:
    passed = not failures
    logger.info(f"Suite {suite}: {checks} checks, {len(failures)} failures")
    return SuiteReport(
        suite=suite,
        passed=passed,
        checks=checks,
        failures=failures[:MAX_REPORTED_FAILURES],
        evidence_only=evidence_only,
        details={"failure_count": len(failures), **details},
    )


FAMILY_INSTANCES: Tuple[Tuple[str, Any], ...] = (
    ("T1(1)", lambda: build_T1_matrix([1])),
    ("T1(2,2)", lambda: build_T1_matrix([2, 2])),
    ("T1(2,3,1)", lambda: build_T1_matrix([2, 3, 1])),
    ("T2(1;1)", lambda: build_T2_matrix(1, [1])),
    ("T2(1;2,2)", lambda: build_T2_matrix(1, [2, 2])),
    ("T2(2;1,3)", lambda: build_T2_matrix(2, [1, 3])),
)


def _family_checks(predicate) -> Tuple[int, List[Dict[str, Any]]]:
    failures = []
    for name, build in FAMILY_INSTANCES:
        M = build()
        m_kk, n_count = exact_root_zero_statistics(M)
        if not predicate(M, m_kk, n_count):
            failures.append({"family": name, "m_kk": m_kk, "N": n_count})
    return len(FAMILY_INSTANCES), failures


def lemma31_sweep(
    corpus: Sequence[WeightedTreeMatrix],
    backend: ScalarBackend,
    threads: Optional[int] = None,
) -> SuiteReport:
    """Root-zero count equals ``N + 1`` on every corpus tree and exactly on the families."""
    _require_float(backend)
    stats = parallel_map(lambda M: root_zero_statistics(M, backend), corpus, threads)
    failures = [
        _describe(M, m_kk=m_kk, N=n_count) for M, (m_kk, n_count) in zip(corpus, stats) if m_kk != n_count + 1
    ]
    family_checks, family_failures = _family_checks(lambda M, m_kk, n_count: m_kk == n_count + 1 == 3)
    return _report(
        "lemma31",
        len(corpus) + family_checks,
        family_failures + failures,
        evidence_only=True,
        zero_tolerance=backend.zero_tolerance,
    )


def lemma32_sweep(
    corpus: Sequence[WeightedTreeMatrix],
    backend: ScalarBackend,
    threads: Optional[int] = None,
) -> SuiteReport:
    """At least ``k + 1`` distinct values leave a zero at the root of a depth-k tree."""
    _require_float(backend)
    stats = parallel_map(lambda M: root_zero_statistics(M, backend), corpus, threads)
    failures = [
        _describe(M, m_kk=m_kk, depth=M.forest.height)
        for M, (m_kk, _) in zip(corpus, stats)
        if m_kk < M.forest.height + 1
    ]
    family_checks, family_failures = _family_checks(
        lambda M, m_kk, _: m_kk >= M.forest.height + 1 and m_kk == 3
    )
    return _report(
        "lemma32",
        len(corpus) + family_checks,
        family_failures + failures,
        evidence_only=True,
        zero_tolerance=backend.zero_tolerance,
    )


def extremes_sweep(
    corpus: Sequence[WeightedTreeMatrix],
    backend: ScalarBackend,
    threads: Optional[int] = None,
) -> SuiteReport:
    """At the smallest and largest eigenvalue only the root becomes zero."""
    _require_float(backend)
    results = parallel_map(lambda M: extreme_root_check(M, backend), corpus, threads)
    failures = [_describe(M) for M, ok in zip(corpus, results) if not ok]
    return _report("extremes", len(corpus), failures, evidence_only=True)


def oracle_sweep(
    samples: int,
    rng_seed: int,
    points_per_tree: int = 10,
    threads: Optional[int] = None,
) -> SuiteReport:
    """
    Exact agreement of ``locate`` with Sturm counts of the characteristic polynomial.

    Half of the points are random rationals, half are diagonal entries of the
    matrix (which are often eigenvalues).
    """

    def run(index: int) -> List[Dict[str, Any]]:
        rng = np.random.default_rng([rng_seed, index])
        M = random_rational_tree(rng)
        counter = RootCounter(charpoly(M))
        bound = gershgorin_bound(M)
        mismatches = []
        for j in range(points_per_tree):
            if j % 2:
                lam = M.diag[int(rng.integers(0, M.n))]
            else:
                lam = Fraction(int(rng.integers(-30, 31)), int(rng.integers(1, 10)))
            engine, oracle = locate(M, lam), counter.locate(lam, bound)
            if engine != oracle:
                mismatches.append(
                    _describe(M, at=str(lam), engine=list(engine), oracle=list(oracle))
                )
        return mismatches

    failures = [item for batch in parallel_map(run, range(samples), threads) for item in batch]
    return _report("oracle", samples * points_per_tree, failures, evidence_only=False)
