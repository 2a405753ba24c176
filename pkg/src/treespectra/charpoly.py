"""
Exact characteristic polynomials of tree matrices and Sturm root counting.

This module is an independent oracle for the diagonalization engine: it only
uses rational polynomial arithmetic.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

from .arith import TreeSpectraError, format_rational, parse_rational
from .diagonalize import LocateResult
from .matrix import WeightedTreeMatrix


logger = logging.getLogger(__name__)

SPECTRUM_WIDTH_FACTOR = Fraction(1, 10**10)


class PolynomialError(TreeSpectraError, ValueError):
    """Raised for undefined polynomial operations."""
    pass


@dataclass(frozen=True)
class RationalPoly:
    """Polynomial over the rationals, coefficients lowest degree first."""

    coeffs: Tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        coeffs = [Fraction(c) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def constant(cls, value: Any) -> "RationalPoly":
        return cls((Fraction(value),))

    @classmethod
    def linear_root(cls, root: Any) -> "RationalPoly":
        """The monic polynomial ``x - root``."""
        return cls((-Fraction(root), Fraction(1)))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __add__(self, other: "RationalPoly") -> "RationalPoly":
        size = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (size - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (size - len(other.coeffs))
        return RationalPoly(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "RationalPoly":
        return RationalPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "RationalPoly") -> "RationalPoly":
        return self + (-other)

    def __mul__(self, other: "RationalPoly") -> "RationalPoly":
        if self.is_zero or other.is_zero:
            return RationalPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPoly(tuple(out))

    def scale(self, factor: Any) -> "RationalPoly":
        factor = Fraction(factor)
        return RationalPoly(tuple(c * factor for c in self.coeffs))

    def __divmod__(self, other: "RationalPoly") -> Tuple["RationalPoly", "RationalPoly"]:
        if other.is_zero:
            raise PolynomialError("Polynomial division by zero")
        remainder = list(self.coeffs)
        quotient = [Fraction(0)] * max(len(remainder) - len(other.coeffs) + 1, 0)
        lead = other.leading
        for shift in range(len(quotient) - 1, -1, -1):
            factor = remainder[shift + other.degree] / lead
            quotient[shift] = factor
            if factor:
                for i, c in enumerate(other.coeffs):
                    remainder[shift + i] -= factor * c
        return RationalPoly(tuple(quotient)), RationalPoly(tuple(remainder))

    def __floordiv__(self, other: "RationalPoly") -> "RationalPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "RationalPoly") -> "RationalPoly":
        return divmod(self, other)[1]

    def derivative(self) -> "RationalPoly":
        return RationalPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def evaluate(self, x: Any) -> Fraction:
        x = Fraction(x)
        total = Fraction(0)
        for c in reversed(self.coeffs):
            total = total * x + c
        return total

    def monic(self) -> "RationalPoly":
        if self.is_zero:
            return self
        return self.scale(1 / self.leading)

    def to_json(self) -> List[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[Any]) -> "RationalPoly":
        try:
            return cls(tuple(parse_rational(c) if isinstance(c, str) else Fraction(c) for c in data))
        except (TypeError, ValueError) as e:
            raise PolynomialError(f"Invalid polynomial coefficients: {e}") from e

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for power in range(self.degree, -1, -1):
            c = self.coeffs[power]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            magnitude = abs(c)
            body = "" if magnitude == 1 and power else format_rational(magnitude)
            var = "" if power == 0 else ("x" if power == 1 else f"x^{power}")
            terms.append(f"{sign} {body}{'*' if body and var else ''}{var}")
        text = " ".join(terms)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


ONE = RationalPoly.constant(1)
X = RationalPoly((Fraction(0), Fraction(1)))


def poly_gcd(a: RationalPoly, b: RationalPoly) -> RationalPoly:
    """Monic greatest common divisor (zero when both inputs are zero)."""
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def squarefree_part(p: RationalPoly) -> RationalPoly:
    """Product of the distinct irreducible factors of ``p``, made monic."""
    if p.is_zero:
        raise PolynomialError("Zero polynomial has no square-free part")
    if p.degree <= 0:
        return ONE
    return (p // poly_gcd(p, p.derivative())).monic()


def gcd_tower(p: RationalPoly) -> List[RationalPoly]:
    """
    ``[p, gcd(p, p'), gcd of that with its derivative, ...]`` down to a constant.

    A root of multiplicity m divides the first m entries.
    """
    if p.is_zero:
        raise PolynomialError("Zero polynomial has no gcd tower")
    tower = [p]
    while tower[-1].degree > 0:
        g = tower[-1]
        tower.append(poly_gcd(g, g.derivative()))
    return tower[:-1] if len(tower) > 1 else tower


def sturm_chain(p: RationalPoly) -> List[RationalPoly]:
    if p.is_zero:
        raise PolynomialError("Sturm chain of the zero polynomial")
    chain = [p, p.derivative()]
    while not chain[-1].is_zero:
        chain.append(-(chain[-2] % chain[-1]))
    return chain[:-1]


def sign_variations(chain: Sequence[RationalPoly], x: Any) -> int:
    signs = [v > 0 for v in (q.evaluate(x) for q in chain) if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: RationalPoly, a: Any, b: Any) -> int:
    """
    Number of distinct real roots of ``p`` in ``(a, b]``.

    Args:
        p: Nonzero polynomial
        a: Open lower end
        b: Closed upper end, ``a < b``

    Returns:
        Distinct root count
    """
    if p.is_zero:
        raise PolynomialError("Cannot count roots of the zero polynomial")
    a, b = Fraction(a), Fraction(b)
    if not a < b:
        raise PolynomialError(f"Empty interval ({a}, {b}]")
    if p.degree == 0:
        return 0
    chain = sturm_chain(squarefree_part(p))
    return sign_variations(chain, a) - sign_variations(chain, b)


def multiplicity_exact(p: RationalPoly, lam: Any) -> int:
    """Largest m with ``(x - lam)^m`` dividing ``p``, by synthetic division."""
    if p.is_zero:
        raise PolynomialError("Every point is a root of the zero polynomial")
    lam = Fraction(lam)
    count = 0
    coeffs = list(p.coeffs)
    while len(coeffs) > 1:
        # Horner from the top yields the quotient and the remainder p(lam)
        quotient = [Fraction(0)] * (len(coeffs) - 1)
        carry = Fraction(0)
        for i in range(len(coeffs) - 1, 0, -1):
            carry = carry * lam + coeffs[i]
            quotient[i - 1] = carry
        if carry * lam + coeffs[0] != 0:
            break
        coeffs = quotient
        count += 1
    return count


class RootCounter:
    """Sturm chains of every level of a polynomial's gcd tower, built once."""

    def __init__(self, p: RationalPoly):
        if p.is_zero:
            raise PolynomialError("Cannot count roots of the zero polynomial")
        self.poly = p
        self.tower = gcd_tower(p)
        self.chains = [sturm_chain(squarefree_part(g)) for g in self.tower if g.degree > 0]

    def distinct(self, a: Any, b: Any) -> int:
        """Distinct roots in ``(a, b]``."""
        if not self.chains:
            return 0
        chain = self.chains[0]
        return sign_variations(chain, a) - sign_variations(chain, b)

    def count(self, a: Any, b: Any) -> int:
        """Roots in ``(a, b]`` counted with multiplicity."""
        return sum(sign_variations(chain, a) - sign_variations(chain, b) for chain in self.chains)

    def multiplicity(self, lam: Any) -> int:
        return sum(1 for g in self.tower if g.degree > 0 and g.evaluate(lam) == 0)

    def locate(self, lam: Any, bound: Any) -> LocateResult:
        """Roots below, at and above ``lam``; every root must lie in ``(-bound, bound)``."""
        lam = Fraction(lam)
        lo = min(-Fraction(bound), lam) - 1
        hi = max(Fraction(bound), lam) + 1
        mult = self.multiplicity(lam)
        return LocateResult(below=self.count(lo, lam) - mult, mult=mult, above=self.count(lam, hi))


def count_roots(p: RationalPoly, a: Any, b: Any) -> int:
    """Roots in ``(a, b]`` counted with multiplicity."""
    if not Fraction(a) < Fraction(b):
        raise PolynomialError(f"Empty interval ({a}, {b}]")
    return RootCounter(p).count(a, b)


def _exact(value: Any) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


def charpoly(M: WeightedTreeMatrix) -> RationalPoly:
    """
    ``det(xI - M)`` by eliminating subtrees bottom-up.

    For a vertex v with children c, ``P(v) = (x - m_vv) Q(v) - sum_c w2_c Q(c) prod_{c' != c} P(c')``
    where ``Q(v)`` is the product of the children's ``P``.
    """
    forest = M.forest
    P: List[Optional[RationalPoly]] = [None] * forest.n
    Q: List[Optional[RationalPoly]] = [None] * forest.n
    for v in forest.order:
        kids = forest.children[v]
        child_polys = [P[c] for c in kids]
        prefix = [ONE]
        for poly in child_polys:
            prefix.append(prefix[-1] * poly)  # type: ignore[operator]
        suffix = [ONE]
        for poly in reversed(child_polys):
            suffix.append(poly * suffix[-1])  # type: ignore[operator]
        suffix.reverse()

        q = prefix[-1]
        p = (X - RationalPoly.constant(_exact(M.diag[v]))) * q
        for i, c in enumerate(kids):
            others = prefix[i] * suffix[i + 1]
            p = p - (Q[c] * others).scale(_exact(M.sq_weight[c]))  # type: ignore[operator]
        P[v], Q[v] = p, q

    result = ONE
    for r in forest.roots:
        result = result * P[r]  # type: ignore[operator]
    return result


def gershgorin_bound(M: WeightedTreeMatrix) -> int:
    """An integer strictly larger than every Gershgorin disc endpoint in absolute value."""
    radius = [abs(_exact(value)) for value in M.diag]
    for v, p in M.forest.edges:
        w2 = _exact(M.sq_weight[v])
        # sqrt(a/b) = sqrt(ab)/b < (isqrt(ab) + 1)/b
        upper = Fraction(math.isqrt(w2.numerator * w2.denominator) + 1, w2.denominator)
        radius[v] += upper
        radius[p] += upper
    return math.floor(max(radius, default=Fraction(0))) + 1


def float_spectrum(M: WeightedTreeMatrix) -> List[float]:
    """
    Sorted eigenvalues, each repeated by multiplicity.

    Distinct roots are isolated by bisection on Sturm counts with dyadic
    endpoints until each enclosure is narrower than ``1e-10 * (1 + B)``.
    """
    if M.n == 0:
        return []
    bound = gershgorin_bound(M)
    counter = RootCounter(charpoly(M))
    width = SPECTRUM_WIDTH_FACTOR * (1 + bound)

    spectrum: List[float] = []
    pending = [(Fraction(-bound), Fraction(bound))]
    while pending:
        lo, hi = pending.pop()
        found = counter.distinct(lo, hi)
        if found == 0:
            continue
        if found == 1 and hi - lo <= width:
            spectrum.extend([float((lo + hi) / 2)] * counter.count(lo, hi))
            continue
        mid = (lo + hi) / 2
        pending.append((lo, mid))
        pending.append((mid, hi))
    spectrum.sort()
    if len(spectrum) != M.n:
        raise PolynomialError(f"Isolated {len(spectrum)} of {M.n} eigenvalues")
    return spectrum


def exact_distinct_count(M: WeightedTreeMatrix) -> int:
    """Number of distinct eigenvalues, all of which are real for a symmetric matrix."""
    if M.n == 0:
        return 0
    return squarefree_part(charpoly(M)).degree


def _exact_sqrt(value: Fraction) -> Fraction:
    num, den = math.isqrt(value.numerator), math.isqrt(value.denominator)
    if num * num != value.numerator or den * den != value.denominator:
        raise PolynomialError(f"Squared weight {value} has no rational square root")
    return Fraction(num, den)


def brute_force_determinant(
    M: WeightedTreeMatrix, x: Any, signs: Optional[Sequence[int]] = None
) -> Fraction:
    """
    ``det(xI - M)`` by Gaussian elimination on the dense matrix.

    Needs squared weights that are rational squares; ``signs[v]`` flips the
    entry on the edge from v to its parent.
    """
    n = M.n
    x = Fraction(x)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for v in range(n):
        rows[v][v] = x - _exact(M.diag[v])
    for v, p in M.forest.edges:
        entry = _exact_sqrt(_exact(M.sq_weight[v])) * (signs[v] if signs is not None else 1)
        rows[v][p] = rows[p][v] = -entry

    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        for r in range(col + 1, n):
            factor = rows[r][col] / rows[col][col]
            if factor:
                for c in range(col, n):
                    rows[r][c] -= factor * rows[col][c]
    return det
