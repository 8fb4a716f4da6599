"""Closed forms for Sigma^2_{p/q}, type-k candidate points and known constants."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .rational import small_v
from .series import RatioPair

__all__ = [
    "SigmaClass",
    "SigmaClassification",
    "KnownConstant",
    "IRRATIONAL_SIGMA_SQ",
    "SIGMA_SQ_MINUS_TWO",
    "sigma_sq_odd_odd",
    "order_pm1",
    "large_ratio_applies",
    "type_one_point",
    "sigma_sq_large",
    "sigma_sq_q_one_even",
    "candidate_points",
    "known_constants",
    "lookup",
    "classify",
]

# theta with no rational power: Sigma_theta = 1/2
IRRATIONAL_SIGMA_SQ = Fraction(1, 4)
# Sigma_{-2} = sqrt(910)/49; negative p is never computed, only recorded
SIGMA_SQ_MINUS_TWO = Fraction(910, 2401)


class SigmaClass(enum.Enum):
    ODD_ODD = "OddOdd"
    LARGE_RATIO_EVEN = "LargeRatioEven"
    Q_ONE_EVEN_P = "QOneEvenP"
    IRRATIONAL = "Irrational"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class SigmaClassification:
    cls: SigmaClass
    sigma_sq: Optional[Fraction] = None
    type_index: Optional[int] = None
    witness: Optional[Fraction] = None


def sigma_sq_odd_odd(pp: RatioPair) -> Fraction:
    if pp.p % 2 == 0 or pp.q % 2 == 0:
        raise ValueError(f"{pp}: p and q must both be odd")
    r = pp.pq
    return Fraction(r + 1, 4 * (r - 1))


def order_pm1(q: int, m: int) -> int:
    """Least n >= 1 with q^n = +-1 (mod m)."""
    if m < 1:
        raise ValueError("modulus must be >= 1")
    if math.gcd(q, m) != 1:
        raise ValueError(f"gcd({q}, {m}) != 1")
    if m <= 2:
        return 1
    power = q % m
    n = 1
    while power not in (1, m - 1):
        power = power * q % m
        n += 1
    return n


def large_ratio_applies(pp: RatioPair) -> bool:
    p, q = pp.p, pp.q
    if p % 2 == 1 and q % 2 == 0:
        return 4 * p >= 9 * q
    if p % 2 == 0 and q % 2 == 1:
        return p >= 4 * q
    return False


def type_one_point(pp: RatioPair) -> Fraction:
    """(p - q - 1) / (2 (p - q)), the type-I maximizer."""
    return Fraction(pp.p - pp.q - 1, 2 * (pp.p - pp.q))


def sigma_sq_large(pp: RatioPair) -> Fraction:
    """Square of the large-ratio closed form (mixed parity, p/q above threshold)."""
    if not large_ratio_applies(pp):
        raise ValueError(f"{pp} is outside the large-ratio thresholds")
    r = pp.pq
    a = type_one_point(pp)
    n = order_pm1(pp.q, pp.p - pp.q)
    rn = r**n
    value = Fraction(rn + 1, rn - 1) * small_v(a)
    tail = sum(
        (small_v(pp.q**m * a) / r**m for m in range(1, n)), Fraction(0)
    )
    return value + Fraction(2 * rn, rn - 1) * tail


def sigma_sq_q_one_even(p: int) -> Fraction:
    """(p+1) p (p-2) / (4 (p-1)^3) for even p >= 4, theta = p."""
    if p % 2 or p < 4:
        raise ValueError("need an even p >= 4")
    return Fraction((p + 1) * p * (p - 2), 4 * (p - 1) ** 3)


def candidate_points(pp: RatioPair, k: int, *, exclude_lower: bool = False) -> List[Fraction]:
    """n / (p^k - q^k) in (0, 1/2], lowest terms, sorted.

    ``exclude_lower`` drops points already produced by some smaller k.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    den = pp.p**k - pp.q**k
    points = {Fraction(n, den) for n in range(1, den // 2 + 1)}
    if exclude_lower:
        for j in range(1, k):
            dj = pp.p**j - pp.q**j
            points.difference_update(Fraction(n, dj) for n in range(1, dj // 2 + 1))
    return sorted(points)


@dataclass(frozen=True)
class KnownConstant:
    p: int
    q: int
    type_index: int
    witness: Fraction
    sigma_sq: Optional[Fraction] = None

    @property
    def pair(self) -> RatioPair:
        return RatioPair(self.p, self.q)


_ETA_3_2 = Fraction(
    1222685807050467558645782547163492,
    4561296506512477081905890170847375,
)

_KNOWN: Tuple[KnownConstant, ...] = (
    KnownConstant(13, 6, 1, Fraction(3, 7), Fraction(948, 3773)),
    KnownConstant(4, 3, 2, Fraction(3, 7)),
    KnownConstant(8, 3, 2, Fraction(24, 55)),
    KnownConstant(10, 3, 2, Fraction(40, 91)),
    KnownConstant(12, 5, 2, Fraction(55, 119)),
    KnownConstant(17, 8, 2, Fraction(101, 225)),
    KnownConstant(19, 10, 3, Fraction(2879, 5859)),
    KnownConstant(12, 7, 4, Fraction(8717, 18335)),
    KnownConstant(8, 5, 5, Fraction(13690, 29643)),
    KnownConstant(2, 1, 2, Fraction(1, 3), Fraction(14, 27)),
    KnownConstant(3, 2, 6, Fraction(277, 665), _ETA_3_2),
)


def known_constants() -> Tuple[KnownConstant, ...]:
    return _KNOWN


_BY_PAIR: Dict[Tuple[int, int], KnownConstant] = {(c.p, c.q): c for c in _KNOWN}


def lookup(p: int, q: int) -> Optional[KnownConstant]:
    return _BY_PAIR.get((p, q))


def classify(pp: RatioPair) -> SigmaClassification:
    """Which closed form (if any) gives Sigma^2 for this pair.

    Pairs with no closed form come back as UNKNOWN; their table witness and
    type, when the pair is tabulated, are attached but no value is claimed.
    """
    p, q = pp.p, pp.q
    if p % 2 == 1 and q % 2 == 1:
        return SigmaClassification(SigmaClass.ODD_ODD, sigma_sq_odd_odd(pp), 1, Fraction(1, 2))
    if q == 1 and p >= 4:
        return SigmaClassification(
            SigmaClass.Q_ONE_EVEN_P, sigma_sq_q_one_even(p), 1, type_one_point(pp)
        )
    if large_ratio_applies(pp):
        return SigmaClassification(
            SigmaClass.LARGE_RATIO_EVEN, sigma_sq_large(pp), 1, type_one_point(pp)
        )
    known = lookup(p, q)
    if known is not None:
        return SigmaClassification(SigmaClass.UNKNOWN, None, known.type_index, known.witness)
    return SigmaClassification(SigmaClass.UNKNOWN)


def irrational_classification() -> SigmaClassification:
    return SigmaClassification(SigmaClass.IRRATIONAL, IRRATIONAL_SIGMA_SQ)
