"""Exact and enclosed evaluation of the limit-variance function.

For theta = p/q (p > q >= 1, coprime) the function is

    sigma^2(x) = V(<x>, <x>) + 2 * sum_{k>=1} V(<p^k x>, <q^k x>) / (pq)^k

with V(x, xi) = min(x, xi) - x*xi.  Rational x have eventually periodic
orbits, so sigma^2(x) is itself rational and can be summed in closed form.
The truncation tau_N^2 (terms k <= N) is piecewise quadratic; the pieces are
separated by breakpoints m/p^k, m/q^k and by the points where <p^k x> and
<q^k x> swap order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .rational import as_rational

__all__ = [
    "RatioPair",
    "BoundPair",
    "Quadratic",
    "CycleInfo",
    "PieceError",
    "orbit_cycle",
    "sigma_sq_exact",
    "tau_sq",
    "tail_width",
    "derivative_tail_width",
    "sigma_sq_truncated",
    "breakpoints",
    "order_change_points",
    "is_piece",
    "level_terms",
    "tau_quadratic",
    "quad_max_on",
    "derivative_enclosure",
]


class PieceError(ValueError):
    """An interval is not a single quadratic piece at the requested level."""


@dataclass(frozen=True)
class RatioPair:
    p: int
    q: int

    def __post_init__(self):
        if not (isinstance(self.p, int) and isinstance(self.q, int)):
            raise TypeError("p and q must be integers")
        if not (self.p > self.q >= 1):
            raise ValueError(f"need p > q >= 1, got p={self.p}, q={self.q}")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"p={self.p} and q={self.q} are not coprime")

    @property
    def pq(self) -> int:
        return self.p * self.q

    @property
    def theta(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


@dataclass(frozen=True)
class BoundPair:
    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"empty enclosure [{self.lower}, {self.upper}]")

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def contains(self, value: Fraction) -> bool:
        return self.lower <= value <= self.upper


@dataclass(frozen=True)
class Quadratic:
    """x -> A x^2 + B x + C with exact coefficients."""

    A: Fraction
    B: Fraction
    C: Fraction

    @classmethod
    def from_linear_product(cls, a1, b1, a2, b2, weight=1) -> "Quadratic":
        """weight * (a1 x + b1) * (a2 x + b2)."""
        w = Fraction(weight)
        return cls(w * a1 * a2, w * (a1 * b2 + a2 * b1), w * b1 * b2)

    def __call__(self, x: Fraction) -> Fraction:
        return (self.A * x + self.B) * x + self.C

    def __add__(self, other: "Quadratic") -> "Quadratic":
        return Quadratic(self.A + other.A, self.B + other.B, self.C + other.C)

    def __sub__(self, other: "Quadratic") -> "Quadratic":
        return Quadratic(self.A - other.A, self.B - other.B, self.C - other.C)

    def scaled(self, factor) -> "Quadratic":
        f = Fraction(factor)
        return Quadratic(self.A * f, self.B * f, self.C * f)

    def slope(self, x: Fraction) -> Fraction:
        return 2 * self.A * x + self.B

    @property
    def axis(self) -> Fraction | None:
        if self.A == 0:
            return None
        return -self.B / (2 * self.A)


ZERO_QUAD = Quadratic(Fraction(0), Fraction(0), Fraction(0))


@dataclass(frozen=True)
class CycleInfo:
    preperiod: int
    period: int


def _check_unit(x: Fraction) -> Fraction:
    x = as_rational(x)
    if not 0 <= x <= 1:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    return x


def _orbit_weights(pp: RatioPair, x: Fraction, n_terms: int | None):
    """Integer V-numerators over den^2 along the orbit of x.

    Returns (den, w0, weights, cycle_start) where weights[k-1] is
    den^2 * V(<p^k x>, <q^k x>).  With ``n_terms`` set, exactly that many
    terms are produced and cycle_start is None; otherwise iteration stops at
    the first repeated state and cycle_start is the 1-based index where the
    cycle begins (so the cycle is weights[cycle_start-1:]).
    """
    d = x.denominator
    a = x.numerator % d
    w0 = a * (d - a)
    u = w = a
    weights: List[int] = []
    seen = {}
    k = 0
    while True:
        if n_terms is not None and k >= n_terms:
            return d, w0, weights, None
        k += 1
        u = u * pp.p % d
        w = w * pp.q % d
        if n_terms is None:
            state = (u, w)
            if state in seen:
                return d, w0, weights, seen[state]
            seen[state] = k
        weights.append(min(u, w) * d - u * w)


def orbit_cycle(pp: RatioPair, x: Fraction) -> CycleInfo:
    """Minimal (preperiod, period) of k -> (<p^k x>, <q^k x>), k >= 1."""
    x = _check_unit(x)
    _, _, weights, start = _orbit_weights(pp, x, None)
    return CycleInfo(preperiod=start, period=len(weights) - start + 1)


def sigma_sq_exact(pp: RatioPair, x: Fraction) -> Fraction:
    """Exact sigma^2_{p/q}(x) for rational x in [0, 1].

    The preperiodic part is summed directly; one period is summed and
    multiplied by the geometric factor r^L / (r^L - 1), r = pq.
    """
    x = _check_unit(x)
    d, w0, weights, start = _orbit_weights(pp, x, None)
    r = pp.pq
    pre = 0
    for wk in weights[: start - 1]:
        pre = pre * r + wk
    cyc = 0
    for wk in weights[start - 1:]:
        cyc = cyc * r + wk
    period = len(weights) - start + 1
    scale = r ** (start - 1)
    series = Fraction(pre, scale) + Fraction(cyc, scale * (r ** period - 1))
    return (w0 + 2 * series) / (d * d)


def tau_sq(pp: RatioPair, x: Fraction, N: int) -> Fraction:
    """Truncated sum tau_N^2(x), evaluated term by term."""
    x = _check_unit(x)
    if N < 0:
        raise ValueError("N must be >= 0")
    d, w0, weights, _ = _orbit_weights(pp, x, N)
    r = pp.pq
    acc = 0
    for wk in weights:
        acc = acc * r + wk
    return (w0 + Fraction(2 * acc, r ** N)) / (d * d)


def tail_width(pp: RatioPair, N: int) -> Fraction:
    """Bound on 2 * sum_{n>=N} V(...)/(pq)^n, uniform in x (uses V <= 1/4)."""
    if N < 1:
        raise ValueError("tail_width needs N >= 1")
    r = pp.pq
    return Fraction(1, 2 * (r - 1) * r ** (N - 1))


def derivative_tail_width(pp: RatioPair, N: int) -> Fraction:
    """Bound on |2 * sum_{n>=N} d/dx V(...)/(pq)^n| (per-term slope <= p^n).

    The geometric argument needs q >= 2.
    """
    if pp.q == 1:
        raise ValueError("no derivative tail bound for q = 1: the series diverges")
    if N < 1:
        raise ValueError("derivative_tail_width needs N >= 1")
    return Fraction(2, (pp.q - 1) * pp.q ** (N - 1))


def sigma_sq_truncated(pp: RatioPair, x: Fraction, N: int) -> BoundPair:
    if N < 1:
        raise ValueError("N must be >= 1")
    tau = tau_sq(pp, x, N)
    t = tail_width(pp, N + 1)
    return BoundPair(max(tau - t, Fraction(0)), tau + t)


def _check_interval(lo: Fraction, hi: Fraction) -> Tuple[Fraction, Fraction]:
    lo = as_rational(lo)
    hi = as_rational(hi)
    if not lo < hi:
        raise ValueError(f"degenerate interval [{lo}, {hi}]")
    return lo, hi


def _bases(pp: RatioPair, N: int):
    for k in range(1, N + 1):
        yield k, pp.p ** k, pp.q ** k


def breakpoints(pp: RatioPair, lo: Fraction, hi: Fraction, N: int) -> List[Fraction]:
    """All m/p^k and m/q^k (1 <= k <= N) strictly inside (lo, hi)."""
    lo, hi = _check_interval(lo, hi)
    found = set()
    for _, pk, qk in _bases(pp, N):
        for base in (pk, qk):
            first = math.floor(lo * base) + 1
            last = math.ceil(hi * base) - 1
            for m in range(first, last + 1):
                found.add(Fraction(m, base))
    return sorted(found)


def _order_roots(pp: RatioPair, lo: Fraction, hi: Fraction, N: int) -> List[Fraction]:
    # (lo, hi) is breakpoint-free here, so each difference is linear
    mid = (lo + hi) / 2
    roots = []
    for _, pk, qk in _bases(pp, N):
        root = Fraction(math.floor(pk * mid) - math.floor(qk * mid), pk - qk)
        if lo < root < hi:
            roots.append(root)
    return roots


def order_change_points(pp: RatioPair, lo: Fraction, hi: Fraction, N: int) -> List[Fraction]:
    """Points in (lo, hi) where <p^k x> - <q^k x> changes sign, k <= N.

    Intervals containing breakpoints are handled piece by piece.
    """
    lo, hi = _check_interval(lo, hi)
    cuts = [lo, *breakpoints(pp, lo, hi, N), hi]
    found = set()
    for a, b in zip(cuts, cuts[1:]):
        found.update(_order_roots(pp, a, b, N))
    return sorted(found)


def is_piece(pp: RatioPair, lo: Fraction, hi: Fraction, N: int) -> bool:
    """True when tau_N^2 is a single quadratic on [lo, hi]."""
    lo, hi = _check_interval(lo, hi)
    return not breakpoints(pp, lo, hi, N) and not _order_roots(pp, lo, hi, N)


def level_terms(pp: RatioPair, lo: Fraction, hi: Fraction, N: int) -> List[Quadratic]:
    """Per-level quadratics on a piece: index 0 is V(x, x), index k the k-th
    weighted term 2 V(<p^k x>, <q^k x>) / (pq)^k.  Their partial sums are the
    tau_L^2 pieces for every L <= N.
    """
    lo, hi = _check_interval(lo, hi)
    if not is_piece(pp, lo, hi, N):
        raise PieceError(f"[{lo}, {hi}] is not a level-{N} piece for {pp}")
    mid = (lo + hi) / 2
    a0 = math.floor(mid)
    terms = [Quadratic.from_linear_product(1, -a0, -1, 1 + a0)]
    r = pp.pq
    for k, pk, qk in _bases(pp, N):
        a = math.floor(pk * mid)
        b = math.floor(qk * mid)
        # u = pk x - a, w = qk x - b; V = min * (1 - max)
        if pk * mid - a < qk * mid - b:
            term = Quadratic.from_linear_product(pk, -a, -qk, 1 + b, Fraction(2, r ** k))
        else:
            term = Quadratic.from_linear_product(qk, -b, -pk, 1 + a, Fraction(2, r ** k))
        terms.append(term)
    return terms


def tau_quadratic(pp: RatioPair, lo: Fraction, hi: Fraction, N: int) -> Quadratic:
    """The quadratic equal to tau_N^2 on the closed piece [lo, hi]."""
    total = ZERO_QUAD
    for term in level_terms(pp, lo, hi, N):
        total = total + term
    return total


def quad_max_on(quad: Quadratic, lo: Fraction, hi: Fraction) -> Tuple[Fraction, Fraction]:
    """Exact (argmax, max) over [lo, hi]; ties go to the smallest x."""
    lo, hi = _check_interval(lo, hi)
    candidates: Sequence[Fraction] = [lo, hi]
    axis = quad.axis
    if quad.A < 0 and lo < axis < hi:
        candidates = [lo, axis, hi]
    best_x, best_v = lo, quad(lo)
    for x in candidates[1:]:
        v = quad(x)
        if v > best_v:
            best_x, best_v = x, v
    return best_x, best_v


def derivative_enclosure(pp: RatioPair, lo: Fraction, hi: Fraction, N: int) -> BoundPair:
    """Enclosure of d/dx sigma^2 a.e. on a level-N piece (q >= 2 only)."""
    if pp.q == 1:
        raise ValueError("derivative_enclosure is unavailable for q = 1")
    quad = tau_quadratic(pp, lo, hi, N)
    s_lo, s_hi = quad.slope(as_rational(lo)), quad.slope(as_rational(hi))
    dt = derivative_tail_width(pp, N + 1)
    return BoundPair(min(s_lo, s_hi) - dt, max(s_lo, s_hi) + dt)
