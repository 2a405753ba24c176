"""Randomized distinct-eigenvalue probes on the counterexample trees and the witness forest."""

import logging
from collections import Counter
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from ..realization.builders import assemble, t1_branch, t2_branch
from ..treespectra.charpoly import exact_distinct_count
from ..treespectra.matrix import WeightedTreeMatrix
from ..treespectra.models import SeedId
from ..treespectra.parallel import parallel_map
from ..treespectra.trees import RootedForest
from ..treespectra.unfolding import build_counterexample, counterexample_spec, t1_shape, t2_shape
from .models import EntryDistribution, ProbeReport, PropertyCReport
from .trace import check_exclusivity


logger = logging.getLogger(__name__)

DEFAULT_CLUSTER_TOLERANCE = 1e-6
COUNTEREXAMPLE_FLOOR = 8
FOREST_FLOOR = 6
FOREST_ID = "forest-T1T3"


def cluster_eigenvalues(values: Sequence[float], tolerance: float) -> List[List[float]]:
    """
    Single-linkage clusters of sorted values.

    Neighbours closer than ``tolerance * (1 + spectral radius)`` share a cluster.
    """
    ordered = sorted(float(v) for v in values)
    if not ordered:
        return []
    gap = tolerance * (1 + max(abs(ordered[0]), abs(ordered[-1])))
    clusters = [[ordered[0]]]
    for value in ordered[1:]:
        if value - clusters[-1][-1] > gap:
            clusters.append([value])
        else:
            clusters[-1].append(value)
    return clusters


def count_distinct(M: WeightedTreeMatrix, tolerance: float) -> int:
    """Clustered float count, or the exact count when ``tolerance`` is 0."""
    if tolerance == 0:
        return exact_distinct_count(M)
    return len(cluster_eigenvalues(M.eigenvalues(), tolerance))


def sample_matrix(
    forest: RootedForest,
    rng: np.random.Generator,
    distribution: EntryDistribution = EntryDistribution.EIGHTHS,
) -> WeightedTreeMatrix:
    """Draw exact rational entries for ``forest`` from a named distribution."""
    if EntryDistribution(distribution) != EntryDistribution.EIGHTHS:
        raise ValueError(f"Unknown entry distribution: {distribution}")
    diag_numerators = rng.integers(-16, 17, size=forest.n)
    weight_numerators = rng.integers(1, 17, size=forest.n)
    diag = tuple(Fraction(int(k), 8) for k in diag_numerators)
    weights = tuple(
        Fraction(int(k), 8) if p is not None else None
        for k, p in zip(weight_numerators, forest.parents)
    )
    return WeightedTreeMatrix(forest, diag, weights)


def defectiveness_probe(
    forest: RootedForest,
    samples: int,
    rng_seed: int,
    distribution: EntryDistribution = EntryDistribution.EIGHTHS,
    tolerance: float = DEFAULT_CLUSTER_TOLERANCE,
    floor: int = COUNTEREXAMPLE_FLOOR,
    tree_id: str = "custom",
    designed: Optional[WeightedTreeMatrix] = None,
    threads: Optional[int] = None,
) -> ProbeReport:
    """
    Histogram of distinct-eigenvalue counts over random matrices on ``forest``.

    Sample i draws from ``default_rng([rng_seed, i])``, so reports do not
    depend on the thread count.

    Args:
        forest: Tree or forest to probe
        samples: Number of random matrices
        rng_seed: Base seed
        distribution: Entry distribution id
        tolerance: Relative clustering gap (0 counts exactly)
        floor: Smallest count the structure theory allows
        tree_id: Name recorded in the report
        designed: Optional certified matrix counted alongside the samples
        threads: Worker cap

    Returns:
        ProbeReport with ``evidence_only`` set
    """
    if samples < 0:
        raise ValueError(f"Sample count must be non-negative, got {samples}")

    def run(index: int) -> int:
        rng = np.random.default_rng([rng_seed, index])
        return count_distinct(sample_matrix(forest, rng, distribution), tolerance)

    counts = parallel_map(run, range(samples), threads)
    histogram = Counter(counts)
    smallest = min(histogram) if histogram else None
    respected = smallest is None or smallest >= floor
    if not respected:
        logger.error(f"Probe on {tree_id} found {smallest} distinct eigenvalues, below floor {floor}")
    designed_count = count_distinct(designed, tolerance) if designed is not None else None
    logger.info(f"Probe {tree_id}: {samples} samples, min distinct {smallest}")
    return ProbeReport(
        tree_id=tree_id,
        n=forest.n,
        samples=samples,
        rng_seed=rng_seed,
        distribution=distribution,
        clustering_tolerance=tolerance,
        histogram={str(k): v for k, v in sorted(histogram.items())},
        min_distinct_found=smallest,
        floor=floor,
        floor_respected=respected,
        designed_sample_distinct=designed_count,
    )


def probe_counterexample(
    seed: SeedId,
    samples: int,
    rng_seed: int,
    tolerance: float = DEFAULT_CLUSTER_TOLERANCE,
    threads: Optional[int] = None,
) -> ProbeReport:
    """Probe a non-diminimal unfolding, with its certified matrix as designed sample."""
    seed = SeedId(seed)
    return defectiveness_probe(
        build_counterexample(seed),
        samples,
        rng_seed,
        tolerance=tolerance,
        floor=COUNTEREXAMPLE_FLOOR,
        tree_id=seed.value,
        designed=assemble(counterexample_spec(seed)),
        threads=threads,
    )


def witness_forest_matrix() -> WeightedTreeMatrix:
    """Double broom and its pendant-extended companion, each with five distinct eigenvalues."""
    return WeightedTreeMatrix.from_shapes([t1_branch([2, 2]), t2_branch(1, [2, 2])])


def property_c_counterexample(
    samples: int,
    rng_seed: int,
    tolerance: float = DEFAULT_CLUSTER_TOLERANCE,
    threads: Optional[int] = None,
) -> PropertyCReport:
    """
    Evidence that the two-component forest needs more distinct eigenvalues than either component.

    Each component has an exact 5-value witness while the forest's floor is 6.
    """
    witness = witness_forest_matrix()
    root_of = witness.forest.root_of
    first_root = witness.forest.roots[0]
    first, _ = witness.restrict([v for v in range(witness.n) if root_of[v] == first_root])
    second, _ = witness.restrict([v for v in range(witness.n) if root_of[v] != first_root])
    component_distinct = {
        "double-broom": exact_distinct_count(first),
        "double-broom-plus-pendant": exact_distinct_count(second),
    }
    union_distinct = exact_distinct_count(witness)

    forest = RootedForest.from_shapes([t1_shape([2, 2]), t2_shape(1, [2, 2])])
    probe = defectiveness_probe(
        forest,
        samples,
        rng_seed,
        tolerance=tolerance,
        floor=FOREST_FLOOR,
        tree_id=FOREST_ID,
        designed=witness,
        threads=threads,
    )
    exclusivity = check_exclusivity(samples=max(samples, 1), rng_seed=rng_seed)
    passed = (
        probe.floor_respected
        and exclusivity.passed
        and union_distinct >= FOREST_FLOOR
        and max(component_distinct.values()) < FOREST_FLOOR
    )
    return PropertyCReport(
        component_distinct=component_distinct,
        union_distinct=union_distinct,
        floor=FOREST_FLOOR,
        probe=probe,
        exclusivity=exclusivity,
        passed=passed,
    )
