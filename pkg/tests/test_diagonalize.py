"""Tests for tree matrices and the diagonalization engine."""

import random
from fractions import Fraction

import numpy as np
import pytest

from src.realization.builders import build_T1_matrix, build_T2_matrix
from src.realization.certify import LEDGER_POINTS
from src.treespectra.arith import ScalarBackend, TreeSpectraError
from src.treespectra.diagonalize import (
    LevelRangeError,
    LocateResult,
    count_N,
    diagonalize,
    extreme_root_check,
    level_zero_table,
    locate,
    root_zero_count,
    root_zero_distance,
)
from src.treespectra.matrix import InvalidMatrixError, MatrixFormatError, WeightedTreeMatrix
from src.treespectra.trees import InvalidTreeError, RootedForest
from src.verifier.sweeps import random_tree_corpus


def test_matrix_validation():
    """Test roots carry no weight and every edge carries a positive one."""
    forest = RootedForest.from_parents([1, None])
    with pytest.raises(InvalidMatrixError):
        WeightedTreeMatrix(forest, (Fraction(0), Fraction(0)), (None, None))
    with pytest.raises(InvalidMatrixError):
        WeightedTreeMatrix(forest, (Fraction(0), Fraction(0)), (Fraction(-1), None))
    with pytest.raises(InvalidMatrixError):
        WeightedTreeMatrix(forest, (Fraction(0), Fraction(0)), (Fraction(1), Fraction(1)))
    with pytest.raises(InvalidMatrixError):
        WeightedTreeMatrix(forest, (Fraction(0),), (Fraction(1), None))


def test_from_edges_rejects_cycles():
    """Test cyclic edge lists are refused."""
    diag = [Fraction(0)] * 3
    edges = [(0, 1, Fraction(1)), (1, 2, Fraction(1)), (2, 0, Fraction(1))]
    with pytest.raises(InvalidMatrixError):
        WeightedTreeMatrix.from_edges(diag, edges, roots=[0])


def test_from_edges_requires_reachability():
    """Test every vertex must hang from a listed root."""
    with pytest.raises(InvalidMatrixError):
        WeightedTreeMatrix.from_edges([Fraction(0)] * 3, [(0, 1, Fraction(1))], roots=[0])


def test_json_round_trip(integer_tree):
    """Test matrix JSON keeps fraction strings and orientation."""
    data = integer_tree.to_json()
    assert data["root"] == 3
    assert data["diag"] == ["1", "-1", "2", "0"]
    assert WeightedTreeMatrix.from_json(data) == integer_tree


@pytest.mark.parametrize(
    "data",
    [
        {"edges": [], "root": 0},
        {"diag": ["0"], "edges": []},
        {"diag": ["1/0"], "edges": [], "root": 0},
        {"diag": ["0", "0"], "edges": [{"u": 0, "w2": "1"}], "root": 1},
    ],
)
def test_from_json_rejects(data):
    """Test malformed matrix JSON raises MatrixFormatError."""
    with pytest.raises(MatrixFormatError):
        WeightedTreeMatrix.from_json(data)


def test_restrict_and_truncate(broom):
    """Test principal submatrices keep entries and report the id map."""
    truncated, mapping = broom.truncate(1)
    assert truncated.n == 6
    assert all(broom.forest.levels[old] <= 1 for old in mapping)
    assert broom.truncate(0)[0].n == 4
    smaller, mapping = broom.delete_vertex(broom.forest.root)
    assert smaller.n == 6
    assert len(smaller.forest.roots) == 2
    assert broom.forest.root not in mapping


def test_to_numpy_symmetric(integer_tree):
    """Test the dense matrix carries signed square roots of the weights."""
    dense = integer_tree.to_numpy()
    assert np.allclose(dense, dense.T)
    assert dense[2, 1] == 3.0
    flipped = integer_tree.to_numpy(signs=[1, -1, 1, 1])
    assert flipped[1, 3] == -2.0


def test_path_zero_child(path_matrix):
    """Test a zero leaf is paired with its parent."""
    outcome = diagonalize(path_matrix, 0)
    assert outcome.d == (Fraction(2), Fraction(-1, 2))
    assert outcome.inertia == (1, 1, 0)
    assert outcome.deleted_edges == ()


def test_broom_root_value():
    """Test the first-family root value at lambda = 2."""
    for t in ([1], [2, 2], [5, 1, 3], [4, 4, 4, 4, 4]):
        M = build_T1_matrix(t)
        outcome = diagonalize(M, -2)
        assert outcome.root_values[M.forest.root] == Fraction(10, 3)


def test_broom_plus_pendant_root_value():
    """Test the second-family root value at lambda = 1."""
    for t0, t in ((1, [1]), (1, [2, 2]), (3, [1, 2, 3])):
        M = build_T2_matrix(t0, t)
        assert diagonalize(M, -1).root_values[M.forest.root] == Fraction(-4)


def test_outcome_to_dict(broom):
    """Test exact outcomes render fraction strings."""
    data = diagonalize(broom, -2).to_dict()
    assert data["root_values"][str(broom.forest.root)] == "10/3"
    assert data["inertia"] == {"positive": 1, "negative": 6, "zero": 0}
    assert sum(data["zeros_by_level"].values()) == 0


def test_float_backend_root_value(broom):
    """Test the float backend agrees with the exact run."""
    outcome = diagonalize(broom, -2, ScalarBackend.floating())
    assert outcome.root_values[broom.forest.root] == pytest.approx(10 / 3)


@pytest.mark.parametrize("t", [[1], [2, 2], [2, 3, 1]])
def test_broom_multiplicities(t):
    """Test the first-family spectrum ledger."""
    M = build_T1_matrix(t)
    p = len(t)
    assert locate(M, 0).mult == M.n - 2 * p
    assert locate(M, 1).mult == p - 1
    assert locate(M, -1).mult == p - 1
    assert locate(M, 3) == LocateResult(below=M.n - 1, mult=1, above=0)
    assert locate(M, -3) == LocateResult(below=0, mult=1, above=M.n - 1)


@pytest.mark.parametrize("t0, t", [(1, [1]), (1, [2, 2]), (2, [1, 3])])
def test_broom_plus_pendant_multiplicities(t0, t):
    """Test the second-family spectrum ledger."""
    M = build_T2_matrix(t0, t)
    p = len(t)
    assert locate(M, -1).mult == p - 1 + t0
    assert locate(M, 2).mult == p - 1
    assert locate(M, 0).mult == 1 + sum(t) - p
    assert locate(M, 3).mult == 1
    assert locate(M, -3).mult == 1


def test_locate_far_outside(broom):
    """Test points beyond the spectrum see every eigenvalue on one side."""
    assert locate(broom, -100) == LocateResult(below=0, mult=0, above=broom.n)
    assert locate(broom, 100) == LocateResult(below=broom.n, mult=0, above=0)


def test_inertia_independent_of_chooser(broom):
    """Test any zero-child choice yields the same inertia."""
    rng = random.Random(3)
    for lam in LEDGER_POINTS:
        reference = diagonalize(broom, -lam)
        for _ in range(5):
            outcome = diagonalize(broom, -lam, choose_zero_child=rng.choice)
            assert outcome.inertia == reference.inertia


@pytest.mark.parametrize("M", random_tree_corpus(30, 11))
def test_level_table_independent_of_chooser(M):
    """Test smallest, largest and random zero-child choices give the same level table."""
    rng = random.Random(M.n)
    for lam in range(-4, 5):
        low = diagonalize(M, -lam, choose_zero_child=min)
        high = diagonalize(M, -lam, choose_zero_child=max)
        drawn = diagonalize(M, -lam, choose_zero_child=rng.choice)
        assert low.zeros_by_level == high.zeros_by_level == drawn.zeros_by_level
        assert low.inertia == high.inertia == drawn.inertia


def test_chooser_must_pick_zero_child(broom):
    """Test a chooser returning an outsider is rejected."""
    with pytest.raises(TreeSpectraError):
        diagonalize(broom, 0, choose_zero_child=lambda kids: -1)


def test_root_zero_counts(broom, broom_plus_pendant):
    """Test three root-zero values, one more than the level below."""
    for M in (broom, broom_plus_pendant):
        assert root_zero_count(M, LEDGER_POINTS) == 3
        assert count_N(M, LEDGER_POINTS) == 2


def test_level_zero_table(broom):
    """Test zeros of the depth-one truncation sit at its top level for lambda = 1."""
    table = level_zero_table(broom, 1, 1)
    assert set(table) == {0, 1}
    assert table[1] > 0
    with pytest.raises(LevelRangeError):
        level_zero_table(broom, 3, 0)
    with pytest.raises(LevelRangeError):
        level_zero_table(broom, -1, 0)


def test_root_zero_distance(broom):
    """Test distance is 0 at a root eigenvalue and None off the spectrum."""
    assert root_zero_distance(broom, 3) == 0
    assert root_zero_distance(broom, Fraction(1, 2)) is None
    forest = WeightedTreeMatrix(
        RootedForest.from_parents([None, None]), (Fraction(0), Fraction(0)), (None, None)
    )
    with pytest.raises(InvalidTreeError):
        root_zero_distance(forest, 0)


def test_extreme_root_check(broom, broom_plus_pendant):
    """Test only the root vanishes at the extreme eigenvalues."""
    assert extreme_root_check(broom)
    assert extreme_root_check(broom_plus_pendant)
