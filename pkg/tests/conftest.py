"""Shared fixtures."""

from fractions import Fraction

import pytest

from src.realization.builders import build_T1_matrix, build_T2_matrix
from src.treespectra.matrix import WeightedTreeMatrix


@pytest.fixture
def path_matrix():
    """Two vertices, zero diagonal, unit squared weight, rooted at vertex 1."""
    return WeightedTreeMatrix.from_edges(
        [Fraction(0), Fraction(0)], [(0, 1, Fraction(1))], roots=[1]
    )


@pytest.fixture
def integer_tree():
    """Four vertices with square weights, so the dense matrix has integer entries."""
    return WeightedTreeMatrix.from_edges(
        [Fraction(1), Fraction(-1), Fraction(2), Fraction(0)],
        [(0, 3, Fraction(1)), (1, 3, Fraction(4)), (2, 1, Fraction(9))],
        roots=[3],
    )


@pytest.fixture
def broom():
    """First-family branch with two children carrying two leaves each."""
    return build_T1_matrix([2, 2])


@pytest.fixture
def broom_plus_pendant():
    """Second-family branch with one pendant and two children carrying two leaves each."""
    return build_T2_matrix(1, [2, 2])
