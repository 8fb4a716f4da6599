"""Desk-scale experiments: exact orbits of <(p/q)^k x>, extreme discrepancy,
and the iterated-logarithm ratio N D_N / sqrt(2 N log log N).
"""

from __future__ import annotations

import bisect
import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from .rational import as_rational
from .series import RatioPair

__all__ = [
    "OrbitPoint",
    "DiscrepancyResult",
    "iter_orbit",
    "orbit",
    "orbit_floats",
    "discrepancy",
    "discrepancy_bruteforce",
    "lil_ratio",
    "lil_experiment",
    "to_csv",
]


@dataclass(frozen=True)
class OrbitPoint:
    k: int
    value: Fraction


@dataclass(frozen=True)
class DiscrepancyResult:
    N: int
    d_n: float
    lil_ratio: float
    running_max: float
    checkpoints: Tuple[Tuple[int, float, float], ...] = field(default=(), repr=False)


def _orbit_state(pp: RatioPair, x: Fraction, N: int) -> Iterator[Tuple[int, int, int]]:
    """Yield (k, r_k, D_k) with <(p/q)^k x> = r_k / D_k, D_k = den(x) q^k.

    Carries the full integer part Q_k: the next remainder needs p Q_k mod q.
    """
    x = as_rational(x)
    if not 0 <= x < 1:
        raise ValueError(f"x must lie in [0, 1), got {x}")
    p, q = pp.p, pp.q
    r, d, whole = x.numerator, x.denominator, 0
    for k in range(1, N + 1):
        t, s = divmod(p * whole, q)
        z = s * d + p * r
        d *= q
        e, r = divmod(z, d)
        whole = t + e
        yield k, r, d


def iter_orbit(pp: RatioPair, x: Fraction, N: int) -> Iterator[OrbitPoint]:
    for k, r, d in _orbit_state(pp, x, N):
        yield OrbitPoint(k, Fraction(r, d))


def orbit(pp: RatioPair, x: Fraction, N: int) -> List[OrbitPoint]:
    """Exact points <(p/q)^k x> for k = 1..N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return list(iter_orbit(pp, x, N))


def orbit_floats(pp: RatioPair, x: Fraction, N: int) -> np.ndarray:
    """Nearest binary64 of each exact orbit point (int / int rounds correctly)."""
    out = np.empty(N, dtype=np.float64)
    for k, r, d in _orbit_state(pp, x, N):
        v = r / d
        # rounding can only reach 1.0 from just below it
        out[k - 1] = v if v < 1.0 else math.nextafter(1.0, 0.0)
    return out


def discrepancy(points: Sequence[float]) -> float:
    """Extreme discrepancy over [a, b) via the sorted-points formula D+ + D-."""
    xs = np.sort(np.asarray(points, dtype=np.float64))
    n = xs.size
    if n == 0:
        raise ValueError("need at least one point")
    if xs[0] < 0 or xs[-1] >= 1:
        raise ValueError("points must lie in [0, 1)")
    i = np.arange(1, n + 1, dtype=np.float64)
    d_plus = max(float(np.max(i / n - xs)), 0.0)
    d_minus = max(float(np.max(xs - (i - 1) / n)), 0.0)
    return d_plus + d_minus


def discrepancy_bruteforce(points: Sequence[float]) -> float:
    """O(N^2 log N) reference: sup over [a, b) with ends at 0, 1 and the points.

    Overcounting is approached with [x_i, x_j + 0); undercounting with
    a in {0} or just above a point, b at a point (excluded) or at 1.
    """
    xs = sorted(float(v) for v in points)
    n = len(xs)
    if n == 0:
        raise ValueError("need at least one point")
    if xs[0] < 0 or xs[-1] >= 1:
        raise ValueError("points must lie in [0, 1)")
    best = 0.0
    for i in range(n):
        for j in range(i, n):
            count = bisect.bisect_right(xs, xs[j]) - bisect.bisect_left(xs, xs[i])
            best = max(best, count / n - (xs[j] - xs[i]))
    lefts = [(0.0, True)] + [(v, False) for v in xs]
    rights = xs + [1.0]
    for a, closed in lefts:
        start = bisect.bisect_left(xs, a) if closed else bisect.bisect_right(xs, a)
        for b in rights:
            if b <= a:
                continue
            count = bisect.bisect_left(xs, b) - start
            best = max(best, (b - a) - count / n)
    return best


def lil_ratio(N: int, d_n: float) -> float:
    if N < 3:
        raise ValueError("log log N needs N >= 3")
    return N * d_n / math.sqrt(2 * N * math.log(math.log(N)))


def lil_experiment(pp: RatioPair, x: Fraction, N: int) -> DiscrepancyResult:
    """Orbit of length N; LIL ratio at checkpoints 2^j (j >= 4) up to N."""
    if N < 16:
        raise ValueError("N must be >= 16")
    pts = orbit_floats(pp, x, N)
    rows = []
    running = 0.0
    j = 4
    while 2**j <= N:
        n = 2**j
        d = discrepancy(pts[:n])
        ratio = lil_ratio(n, d)
        running = max(running, ratio)
        rows.append((n, d, ratio))
        j += 1
    n, d, ratio = rows[-1]
    return DiscrepancyResult(n, d, ratio, running, tuple(rows))


def to_csv(rows: Sequence[Sequence], header: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else
                         str(v) for v in row])
    return buf.getvalue()
