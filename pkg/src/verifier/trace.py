"""
Trace identities on five-value spectra and their mutual exclusivity.

A 7-vertex double broom (root, two children, two leaves each) realized with
five distinct eigenvalues l1 < ... < l5 must satisfy ``l2 + l4 = l1 + l5``.
The 8-vertex companion (one more pendant at the root) forces an extra value
``l*`` with ``l* + l2 = l1 + l5`` (``l* != l4``) or ``l* + l4 = l1 + l5``
(``l* != l2``). Both pairings contradict the first identity.
"""

import logging
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Sequence

import numpy as np

from ..treespectra.arith import TreeSpectraError, format_rational
from .models import ExclusivityReport


logger = logging.getLogger(__name__)

LinearForm = Dict[str, Fraction]

SYMBOLS = ("l1", "l2", "l3", "l4", "l5")
EXTRA = "l*"


class UnsortedSpectrumError(TreeSpectraError, ValueError):
    """Raised when five values are not strictly increasing."""
    pass


class PairingVariant(str, Enum):
    """Which eigenvalue the extra value pairs with."""
    PAIRED_WITH_SECOND = "second"  # l* + l2 = l1 + l5, l* != l4
    PAIRED_WITH_FOURTH = "fourth"  # l* + l4 = l1 + l5, l* != l2


_FORBIDDEN_PARTNER = {
    PairingVariant.PAIRED_WITH_SECOND: "l4",
    PairingVariant.PAIRED_WITH_FOURTH: "l2",
}


def _check_sorted(values: Sequence[Fraction]) -> List[Fraction]:
    values = [Fraction(v) for v in values]
    if len(values) != 5:
        raise UnsortedSpectrumError(f"Expected five values, got {len(values)}")
    if any(a >= b for a, b in zip(values, values[1:])):
        logger.error(f"Rejected unsorted spectrum {[format_rational(v) for v in values]}")
        raise UnsortedSpectrumError("Values must be strictly increasing")
    return values


def check_trace_identity_T1(values: Sequence[Fraction]) -> bool:
    """True iff ``l2 + l4 == l1 + l5`` for strictly increasing ``values``."""
    l1, l2, _, l4, l5 = _check_sorted(values)
    return l2 + l4 == l1 + l5


def forced_extra_eigenvalue(values: Sequence[Fraction], variant: PairingVariant) -> Fraction:
    """The extra value a pairing identity determines from the five values."""
    l1, l2, _, l4, l5 = _check_sorted(values)
    if PairingVariant(variant) == PairingVariant.PAIRED_WITH_SECOND:
        return l1 + l5 - l2
    return l1 + l5 - l4


def linear_form(**coeffs: int) -> LinearForm:
    """``linear_form(l1=1, l5=-1)``; the extra symbol is spelled ``ls``."""
    form = {}
    for name, c in coeffs.items():
        symbol = EXTRA if name == "ls" else name
        if c:
            form[symbol] = Fraction(c)
    return form


def subtract(a: LinearForm, b: LinearForm) -> LinearForm:
    out = dict(a)
    for symbol, c in b.items():
        out[symbol] = out.get(symbol, Fraction(0)) - c
    return {symbol: c for symbol, c in out.items() if c != 0}


def render_form(form: LinearForm) -> str:
    order = {symbol: i for i, symbol in enumerate(SYMBOLS + (EXTRA,))}
    parts = []
    for symbol in sorted(form, key=lambda s: order.get(s, len(order))):
        c = form[symbol]
        sign = "-" if c < 0 else "+"
        body = symbol if abs(c) == 1 else f"{format_rational(abs(c))}*{symbol}"
        parts.append(f"{sign} {body}")
    text = " ".join(parts) or "0"
    return text[2:] if text.startswith("+ ") else text


TRACE_IDENTITY = linear_form(l2=1, l4=1, l1=-1, l5=-1)

PAIRING_IDENTITY = {
    PairingVariant.PAIRED_WITH_SECOND: linear_form(ls=1, l2=1, l1=-1, l5=-1),
    PairingVariant.PAIRED_WITH_FOURTH: linear_form(ls=1, l4=1, l1=-1, l5=-1),
}


def forced_difference(variant: PairingVariant) -> LinearForm:
    """Pairing identity minus trace identity: what the extra value must equal."""
    return subtract(PAIRING_IDENTITY[PairingVariant(variant)], TRACE_IDENTITY)


def _sample(rng: np.random.Generator, satisfy: bool) -> List[Fraction]:
    denominator = int(rng.integers(1, 9))
    if satisfy:
        start = int(rng.integers(-20, 20))
        gaps = [int(g) for g in rng.integers(1, 10, size=3)]
        l1 = start
        l2 = l1 + gaps[0]
        l3 = l2 + gaps[1]
        l4 = l3 + gaps[2]
        l5 = l2 + l4 - l1
        raw = [l1, l2, l3, l4, l5]
    else:
        raw = sorted(int(v) for v in rng.choice(np.arange(-40, 41), size=5, replace=False))
    return [Fraction(v, denominator) for v in raw]


def check_exclusivity(samples: int = 10_000, rng_seed: int = 0) -> ExclusivityReport:
    """
    Confirm that each pairing identity is incompatible with the trace identity.

    Symbolically, the difference of the identities must reduce to ``l* - partner``
    where ``l* != partner`` is the pairing's side condition. Numerically, every
    sampled spectrum obeying the trace identity must force the excluded value,
    and every other spectrum must leave both pairings consistent.
    """
    symbolic = {variant.value: render_form(forced_difference(variant)) for variant in PairingVariant}
    passed = all(
        forced_difference(variant) == linear_form(ls=1, **{_FORBIDDEN_PARTNER[variant]: -1})
        for variant in PairingVariant
    )

    rng = np.random.default_rng(rng_seed)
    satisfying = 0
    flagged = 0
    counterexamples: List[List[str]] = []
    for index in range(samples):
        values = _sample(rng, satisfy=index % 2 == 0)
        holds = check_trace_identity_T1(values)
        satisfying += holds
        partners = {"l2": values[1], "l4": values[3]}
        for variant in PairingVariant:
            forced = forced_extra_eigenvalue(values, variant)
            repeats_partner = forced == partners[_FORBIDDEN_PARTNER[variant]]
            if repeats_partner:
                flagged += 1
            if repeats_partner != holds:
                passed = False
                if len(counterexamples) < 5:
                    counterexamples.append([format_rational(v) for v in values] + [variant.value])

    logger.info(f"Exclusivity: {samples} samples, {satisfying} obey the trace identity, passed={passed}")
    return ExclusivityReport(
        passed=passed,
        samples=samples,
        rng_seed=rng_seed,
        symbolic=symbolic,
        satisfying_samples=satisfying,
        violations_flagged=flagged,
        counterexamples=counterexamples,
    )

