"""Core engines: exact scalars, rooted trees, tree matrices, diagonalization and the Sturm oracle."""

from .arith import (
    BackendMode,
    FieldArithmeticError,
    RationalParseError,
    ScalarBackend,
    TreeSpectraError,
    field_op,
    format_rational,
    parse_rational,
)
from .charpoly import (
    PolynomialError,
    RationalPoly,
    RootCounter,
    brute_force_determinant,
    charpoly,
    count_roots,
    exact_distinct_count,
    float_spectrum,
    gershgorin_bound,
    multiplicity_exact,
    sturm_count,
)
from .config import ToolkitSettings, configure_logging
from .diagonalize import (
    DiagOutcome,
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
from .matrix import Entry, InvalidMatrixError, MatrixFormatError, WeightedTreeMatrix
from .models import SeedId, SeedPartKind, UnfoldingSpec
from .parallel import parallel_map
from .trees import (
    DiameterChangeError,
    InvalidTreeError,
    RootedForest,
    ShapeNode,
    TreeFormatError,
    branches_at,
    canonical_form,
    cbd,
    diameter,
    parse_tree,
    serialize,
)
from .unfolding import build_counterexample, counterexample_spec, realize_unfolding, seed_spec

__all__ = [
    "BackendMode",
    "FieldArithmeticError",
    "RationalParseError",
    "ScalarBackend",
    "TreeSpectraError",
    "field_op",
    "format_rational",
    "parse_rational",
    "PolynomialError",
    "RationalPoly",
    "RootCounter",
    "brute_force_determinant",
    "charpoly",
    "count_roots",
    "exact_distinct_count",
    "float_spectrum",
    "gershgorin_bound",
    "multiplicity_exact",
    "sturm_count",
    "ToolkitSettings",
    "configure_logging",
    "DiagOutcome",
    "LevelRangeError",
    "LocateResult",
    "count_N",
    "diagonalize",
    "extreme_root_check",
    "level_zero_table",
    "locate",
    "root_zero_count",
    "root_zero_distance",
    "Entry",
    "InvalidMatrixError",
    "MatrixFormatError",
    "WeightedTreeMatrix",
    "SeedId",
    "SeedPartKind",
    "UnfoldingSpec",
    "parallel_map",
    "DiameterChangeError",
    "InvalidTreeError",
    "RootedForest",
    "ShapeNode",
    "TreeFormatError",
    "branches_at",
    "canonical_form",
    "cbd",
    "diameter",
    "parse_tree",
    "serialize",
    "build_counterexample",
    "counterexample_spec",
    "realize_unfolding",
    "seed_spec",
]
