"""Independent verification of supremum certificates.

Nothing here imports the search or the series module: every quantity is
recomputed from (p, q, cstar) and the line boundaries using only the
rational kernels.  Quadratic pieces are rebuilt by interpolating direct
term-by-term sums at three interior points, which is a different route from
the product-form expansion used by the certifier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .certifier import BoundStyle, Certificate, CertLine, LineKind
from .rational import frac, small_v, vee

__all__ = ["Verdict", "check"]

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    line_index: Optional[int] = None
    check: str = ""
    reason: str = ""

    def __bool__(self) -> bool:
        return self.accepted

    def __str__(self) -> str:
        if self.accepted:
            return "Accepted"
        where = "-" if self.line_index is None else str(self.line_index)
        return f"Rejected(line {where}, {self.check}: {self.reason})"


class _Reject(Exception):
    def __init__(self, index, check, reason):
        super().__init__(reason)
        self.verdict = Verdict(False, index, check, reason)


def _sigma_sq(p: int, q: int, x: Fraction) -> Fraction:
    """sigma^2(x) by following the orbit of (<p^k x>, <q^k x>) as Fractions."""
    r = p * q
    head = small_v(x) if x != 1 else Fraction(0)
    seen = {}
    terms: List[Fraction] = []
    a = b = frac(x)
    k = 0
    while True:
        k += 1
        a = frac(p * a)
        b = frac(q * b)
        if (a, b) in seen:
            start = seen[(a, b)]
            break
        seen[(a, b)] = k
        terms.append(vee(a, b))
    total = Fraction(0)
    for i, t in enumerate(terms[: start - 1], start=1):
        total += t / Fraction(r) ** i
    period = len(terms) - start + 1
    cycle = sum((t / Fraction(r) ** (start + j) for j, t in enumerate(terms[start - 1:])),
                Fraction(0))
    total += cycle * Fraction(r**period, r**period - 1)
    return head + 2 * total


def _tau(p: int, q: int, x: Fraction, n: int) -> Fraction:
    r = p * q
    total = small_v(x)
    for k in range(1, n + 1):
        total += 2 * vee(frac(p**k * x), frac(q**k * x)) / Fraction(r) ** k
    return total


def _no_integer_between(a: Fraction, b: Fraction) -> bool:
    return math.floor(a) + 1 >= b


def _is_piece(p: int, q: int, lo: Fraction, hi: Fraction, n: int) -> Tuple[bool, str]:
    if not _no_integer_between(lo, hi):
        return False, "fractional-part break of <x>"
    mid = (lo + hi) / 2
    for k in range(1, n + 1):
        pk, qk = p**k, q**k
        if not _no_integer_between(pk * lo, pk * hi):
            return False, f"break of <{p}^{k} x> inside"
        if not _no_integer_between(qk * lo, qk * hi):
            return False, f"break of <{q}^{k} x> inside"
        shift = math.floor(pk * mid) - math.floor(qk * mid)
        d_lo = (pk - qk) * lo - shift
        d_hi = (pk - qk) * hi - shift
        if (d_lo < 0 < d_hi) or (d_hi < 0 < d_lo):
            return False, f"order change of level {k} inside"
    return True, ""


def _interpolate(f, lo: Fraction, hi: Fraction) -> Tuple[Fraction, Fraction, Fraction]:
    """Coefficients (A, B, C) of the quadratic through f at 1/4, 1/2, 3/4 of [lo, hi]."""
    h = (hi - lo) / 4
    x0, x1, x2 = lo + h, lo + 2 * h, lo + 3 * h
    y0, y1, y2 = f(x0), f(x1), f(x2)
    d1 = (y1 - y0) / h
    d2 = (y2 - y1) / h
    A = (d2 - d1) / (2 * h)
    B = d1 - A * (x0 + x1)
    C = y0 - (A * x0 + B) * x0
    return A, B, C


def _evaluate(coeffs, x: Fraction) -> Fraction:
    A, B, C = coeffs
    return (A * x + B) * x + C


def _max_on(coeffs, lo: Fraction, hi: Fraction) -> Fraction:
    A, B, _ = coeffs
    best = max(_evaluate(coeffs, lo), _evaluate(coeffs, hi))
    if A < 0:
        v = -B / (2 * A)
        if lo < v < hi:
            best = max(best, _evaluate(coeffs, v))
    return best


def _nonneg_on(coeffs, lo: Fraction, hi: Fraction) -> bool:
    # a quadratic is >= 0 on [lo, hi] iff it is at both ends and at an inner vertex
    A, B, _ = coeffs
    pts = [lo, hi]
    if A != 0:
        v = -B / (2 * A)
        if lo < v < hi:
            pts.append(v)
    return all(_evaluate(coeffs, x) >= 0 for x in pts)


def _stored(line: CertLine) -> Tuple[Fraction, Fraction, Fraction]:
    return line.quad.A, line.quad.B, line.quad.C


def _check_tiling(cert: Certificate) -> None:
    lines = cert.lines
    if not lines:
        raise _Reject(None, "b", "coverage gap: no lines")
    if lines[0].lo != 0:
        raise _Reject(0, "b", "coverage gap: first line does not start at 0")
    for i, line in enumerate(lines):
        if not line.lo < line.hi:
            raise _Reject(i, "b", "empty interval")
        if i and lines[i - 1].hi != line.lo:
            raise _Reject(i, "b", "coverage gap" if lines[i - 1].hi < line.lo else "overlap")
    if lines[-1].hi != HALF:
        raise _Reject(len(lines) - 1, "b", "coverage gap: last line does not end at 1/2")
    c = cert.cstar
    if cert.q >= 2:
        left, right = LineKind.DERIV_POS, LineKind.DERIV_NEG
    else:
        left, right = LineKind.PEAK_LEFT, LineKind.PEAK_RIGHT
    flank = [i for i, ln in enumerate(lines) if ln.kind is not LineKind.QUAD_BOUND]
    want = [left] if c == HALF else [left, right]
    if [lines[i].kind for i in flank] != want:
        idx = flank[0] if flank else None
        raise _Reject(idx, "b", f"expected flanking lines {[k.value for k in want]}")
    if lines[flank[0]].hi != c:
        raise _Reject(flank[0], "b", "left flank does not end at cstar")
    if len(flank) == 2 and (lines[flank[1]].lo != c or flank[1] != flank[0] + 1):
        raise _Reject(flank[1], "b", "right flank does not start at cstar")


def _check_line(cert: Certificate, i: int, line: CertLine) -> None:
    p, q, eta, c = cert.p, cert.q, cert.eta, cert.cstar
    n = line.level
    if n < 1:
        raise _Reject(i, "c", "level must be >= 1")
    ok, why = _is_piece(p, q, line.lo, line.hi, n)
    if not ok:
        raise _Reject(i, "c", f"piece: {why}")
    r = p * q
    piece = _interpolate(lambda x: _tau(p, q, x, n), line.lo, line.hi)

    if line.kind is LineKind.QUAD_BOUND:
        stored = _stored(line)
        if line.style is BoundStyle.EXACT_PIECE:
            if stored != piece:
                raise _Reject(i, "c", "quad: stored coefficients differ from the recomputed piece")
        else:
            diff = tuple(s - t for s, t in zip(stored, piece))
            if not _nonneg_on(diff, line.lo, line.hi):
                raise _Reject(i, "c", "quad: stored upper piece does not dominate the true piece")
        value = _max_on(stored, line.lo, line.hi) + Fraction(1, 2 * (r - 1) * r**n)
        if value != line.value or eta - value != line.margin:
            raise _Reject(i, "c", "margin: stored value/margin do not match recomputation")
        if not value < eta:
            raise _Reject(i, "c", "margin: bound is not below eta")
        return

    if line.kind in (LineKind.DERIV_POS, LineKind.DERIV_NEG):
        if q < 2:
            raise _Reject(i, "d", "derivative lines need q >= 2")
        if _stored(line) != piece:
            raise _Reject(i, "d", "quad: stored coefficients differ from the recomputed piece")
        A, B, _ = piece
        slopes = (2 * A * line.lo + B, 2 * A * line.hi + B)
        dtail = Fraction(2, (q - 1) * q**n)
        if line.kind is LineKind.DERIV_POS:
            bound = min(slopes) - dtail
            ok = bound > 0 and line.margin == bound
        else:
            bound = max(slopes) + dtail
            ok = bound < 0 and line.margin == -bound
        if bound != line.value or not ok:
            raise _Reject(i, "d", f"derivative: recomputed bound {bound} does not certify the sign")
        return

    # q = 1 peak lines
    if q != 1:
        raise _Reject(i, "d", "peak lines need q = 1")
    pn = p**n
    if frac(pn * c) != c:
        raise _Reject(i, "d", "peak: cstar is not fixed by x -> <p^N x>")

    def bound_fn(x):
        y = frac(pn * x)
        return _tau(p, q, x, n) + (eta - small_v(y) + 2 * abs(x - y) / (p - 1)) / pn

    F = _interpolate(bound_fn, line.lo, line.hi)
    if _stored(line) != F:
        raise _Reject(i, "d", "peak: stored coefficients differ from the recomputed bound")
    if _evaluate(F, c) != eta or line.value != eta:
        raise _Reject(i, "d", "peak: bound does not equal eta at cstar")
    A, B, _ = F
    slope_c = 2 * A * c + B
    if line.kind is LineKind.PEAK_LEFT:
        at_far = A * (line.lo - c) + slope_c
        ok = at_far > 0 and slope_c >= 0 and line.margin == at_far
    else:
        at_far = A * (line.hi - c) + slope_c
        ok = at_far < 0 and slope_c <= 0 and line.margin == -at_far
    if not ok:
        raise _Reject(i, "d", "peak: bound is not strictly below eta away from cstar")


def check(cert: Certificate) -> Verdict:
    """Accept iff every stored fact is reproduced and the facts cover [0, 1/2]."""
    try:
        if not (cert.p > cert.q >= 1 and math.gcd(cert.p, cert.q) == 1):
            raise _Reject(None, "a", "invalid (p, q)")
        if not 0 < cert.cstar <= HALF:
            raise _Reject(None, "a", "cstar outside (0, 1/2]")
        # structure first: a tampered cstar breaks the flank adjacency, and
        # summing its orbit could take as long as its denominator is large
        _check_tiling(cert)
        if _sigma_sq(cert.p, cert.q, cert.cstar) != cert.eta:
            raise _Reject(None, "a", "eta does not equal sigma^2(cstar)")
        for i, line in enumerate(cert.lines):
            _check_line(cert, i, line)
        right = _sigma_sq(cert.p, cert.q, HALF)
        if right != cert.right_endpoint_value:
            raise _Reject(None, "e", "right endpoint value does not equal sigma^2(1/2)")
        if cert.cstar != HALF and not right < cert.eta:
            raise _Reject(None, "e", "sigma^2(1/2) is not below eta")
    except _Reject as rej:
        return rej.verdict
    return Verdict(True)
