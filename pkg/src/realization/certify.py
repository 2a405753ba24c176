"""Certification of assembled matrices: exact multiplicity ledgers and extreme-eigenvalue counts."""

import logging
from fractions import Fraction
from typing import Any, Dict, Iterable, Optional, Tuple

from pydantic import ValidationError

from ..treespectra.arith import TreeSpectraError, format_rational
from ..treespectra.charpoly import (
    RationalPoly,
    RootCounter,
    charpoly,
    gershgorin_bound,
    sign_variations,
    squarefree_part,
    sturm_chain,
)
from ..treespectra.config import ToolkitSettings
from ..treespectra.diagonalize import locate
from ..treespectra.matrix import WeightedTreeMatrix
from ..treespectra.models import SeedId, UnfoldingSpec
from ..treespectra.unfolding import realize_unfolding
from .builders import RealizationError, build_T0_matrix, build_T1_matrix, build_T2_matrix, coerce_coupling
from .models import MAX_DISTINCT, PanelWeights, RealizationCertificate


logger = logging.getLogger(__name__)

LEDGER_POINTS: Tuple[Fraction, ...] = tuple(Fraction(v) for v in (-3, -1, 0, 1, 2, 3))


class CertificationError(TreeSpectraError):
    """Raised when an assembled matrix fails its certificate."""
    pass


def rational_spectrum(M: WeightedTreeMatrix, candidates: Iterable[Any]) -> Dict[Fraction, int]:
    """
    Exact multiplicities at ``candidates``; they must account for all n eigenvalues.

    Returns:
        Map from each candidate to its multiplicity (zeros included)
    """
    points = sorted({Fraction(c) for c in candidates})
    spectrum = {lam: locate(M, lam).mult for lam in points}
    total = sum(spectrum.values())
    if total != M.n:
        raise CertificationError(
            f"Candidates {[format_rational(p) for p in points]} carry {total} of {M.n} eigenvalues"
        )
    return spectrum


def extreme_counts(
    p: RationalPoly, bound: int, known: Optional[Dict[Fraction, int]] = None
) -> Tuple[int, int]:
    """
    Distinct roots of ``p`` in ``(3, bound]`` and in ``[-bound, -3)``.

    ``known`` multiplicities are divided out first and must divide ``p``
    exactly; one Sturm chain of the square-free remainder then serves both
    intervals. Every root must lie strictly inside ``(-bound, bound)``.
    """
    residual = p
    for lam, m in (known or {}).items():
        for _ in range(m):
            residual, rest = divmod(residual, RationalPoly.linear_root(lam))
            if not rest.is_zero:
                logger.error(f"(x - {lam})^{m} does not divide the characteristic polynomial")
                raise CertificationError(f"Multiplicity {m} at {format_rational(lam)} is not a factor")
    if residual.degree <= 0:
        return 0, 0
    chain = sturm_chain(squarefree_part(residual))
    above = sign_variations(chain, 3) - sign_variations(chain, bound)
    below = sign_variations(chain, -bound) - sign_variations(chain, -3)
    if residual.evaluate(-3) == 0:
        below -= 1
    return above, below


def certify(
    M: WeightedTreeMatrix,
    spec: UnfoldingSpec,
    coupling2: Any = None,
    oracle_max_n: Optional[int] = None,
) -> RealizationCertificate:
    """
    Re-derive the eigenvalue ledger of an assembled matrix.

    Multiplicities at -3, -1, 0, 1, 2, 3 come from exact diagonalization.
    Those multiplicities must divide the characteristic polynomial; the
    counts beyond ±3 are distinct-root Sturm counts on what remains and must
    equal the diagonalization counts, so those eigenvalues are simple. For n up to ``oracle_max_n`` every
    ledger point is also checked against the full multiplicity oracle.

    Args:
        M: Matrix produced by ``assemble``
        spec: The spec it was assembled from
        coupling2: Coupling entry used, recorded in the certificate
        oracle_max_n: Oracle size cap (defaults to TREESPECTRA_ORACLE_MAX_N)

    Returns:
        Certificate with ``distinct_count_bound <= 8``
    """
    if oracle_max_n is None:
        oracle_max_n = ToolkitSettings.from_env().oracle_max_n
    if M.forest.parents != realize_unfolding(spec).parents:
        raise CertificationError(f"Matrix is not supported on the {spec.seed.value} unfolding")

    located = {lam: locate(M, lam) for lam in LEDGER_POINTS}
    multiplicities = {lam: result.mult for lam, result in located.items()}
    bound = gershgorin_bound(M)
    p = charpoly(M)
    above, below = extreme_counts(p, bound, multiplicities)
    engine_extremes = (located[Fraction(3)].above, located[Fraction(-3)].below)
    if (above, below) != engine_extremes:
        logger.error(f"Sturm counts beyond ±3 {(above, below)} disagree with diagonalization {engine_extremes}")
        raise CertificationError(
            f"Eigenvalues above 3 / below -3: Sturm {(above, below)}, diagonalization {engine_extremes}"
        )

    oracle_checked = False
    if M.n <= oracle_max_n:
        counter = RootCounter(p)
        for lam, result in located.items():
            oracle = counter.locate(lam, bound)
            if oracle != result:
                logger.error(f"Oracle disagrees at {lam}: engine {result}, Sturm {oracle}")
                raise CertificationError(f"Engine and Sturm oracle disagree at {lam}: {result} vs {oracle}")
        oracle_checked = True

    accounted = sum(multiplicities.values()) + above + below
    if accounted != M.n:
        raise CertificationError(f"Ledger accounts for {accounted} of {M.n} eigenvalues")
    distinct = sum(1 for m in multiplicities.values() if m > 0) + above + below
    if distinct > MAX_DISTINCT:
        logger.error(f"{spec.seed.value} realization admits {distinct} distinct eigenvalues")
        raise CertificationError(f"Distinct eigenvalue bound {distinct} exceeds {MAX_DISTINCT}")

    try:
        certificate = RealizationCertificate(
            spec=spec,
            n=M.n,
            coupling2=format_rational(coerce_coupling(coupling2)),
            rational_multiplicities={format_rational(lam): m for lam, m in multiplicities.items()},
            count_above_3=above,
            count_below_neg3=below,
            distinct_count_bound=distinct,
            gershgorin_bound=bound,
            oracle_checked=oracle_checked,
        )
    except ValidationError as e:
        logger.error(f"Certificate for {spec.seed.value} n={M.n} failed validation: {e}")
        raise CertificationError(f"Certificate failed validation: {e}") from e
    logger.info(f"Certified {spec.seed.value} unfolding n={M.n}: at most {distinct} distinct eigenvalues")
    return certificate


def _mult(M: WeightedTreeMatrix, lam: int) -> int:
    return locate(M, lam).mult


def claim_ledger(
    spec: UnfoldingSpec,
    M: WeightedTreeMatrix,
    weights: Optional[PanelWeights] = None,
) -> Dict[str, Tuple[int, int]]:
    """
    Multiplicities of the assembled S7-8 matrix against its blocks.

    Returns:
        Map from relation name to ``(assembled, predicted from blocks)``
    """
    if spec.seed != SeedId.S7_8:
        raise RealizationError(f"Block ledger is defined for S7-8, not {spec.seed.value}")
    first = [build_T1_matrix(b.t, weights) for b in spec.branch1_params]
    second = [build_T2_matrix(b.t0, b.t, weights) for b in spec.branch2_params]
    s0 = spec.s0_params.s0 or 0

    def block_sum(blocks, lam: int) -> int:
        return sum(_mult(block, lam) for block in blocks)

    return {
        "m(0)": (_mult(M, 0), block_sum(first, 0) + block_sum(second, 0) + s0 - 1),
        "m(-1)": (_mult(M, -1), block_sum(first, -1) + block_sum(second, -1) + 1),
        "m(1)": (_mult(M, 1), block_sum(first, 1)),
        "m(2)": (_mult(M, 2), block_sum(second, 2) + 1),
        "m(3)": (_mult(M, 3), block_sum(first, 3) + block_sum(second, 3) - 1),
        "m(-3)": (_mult(M, -3), block_sum(first, -3) + block_sum(second, -3) - 1),
    }


def central_panel_spectrum(spec: UnfoldingSpec, weights: Optional[PanelWeights] = None) -> Dict[Fraction, int]:
    """Exact spectrum of the central panel over its known eigenvalues."""
    panel = build_T0_matrix(spec.seed, spec.s0_params, weights)
    return rational_spectrum(panel, (-6, -5, -3, -1, 0, 3))
