"""Automated certificates that sigma^2_{p/q} peaks at a claimed point on [0, 1/2].

A certificate is a tiling of [0, 1/2) by half-open intervals, each carrying
one exact fact:

* ``QuadBound``: on a level-N piece, tau_N^2 is the stored quadratic, and
  its maximum over the closed interval plus the uniform tail bound is
  strictly below eta = sigma^2(cstar).
* ``DerivPos`` / ``DerivNeg`` (q >= 2): on the piece ending / starting at
  cstar the derivative of sigma^2 has a certified sign a.e.
* ``PeakLeft`` / ``PeakRight`` (q = 1): when <p^N cstar> = cstar the tail
  beyond level N is bounded through sigma^2 itself,

      R_N(x) <= p^-N (M - v(y) + 2|x - y| / (p - 1)),   y = <p^N x>,

  with M = max sigma^2.  Substituting eta for M gives a quadratic F with
  F(cstar) = eta; if F < eta elsewhere on the piece then M = eta follows
  (a maximizer outside every other line would violate the bound) and
  sigma^2 < eta on the piece.

The search refines level by level and tries the lowest valid level on
every sub-piece first, then bisects once ``max_level`` is reached.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

from .rational import RationalFormatError, format_rational, parse_rational
from .series import (
    Quadratic,
    RatioPair,
    breakpoints,
    derivative_tail_width,
    level_terms,
    order_change_points,
    quad_max_on,
    sigma_sq_exact,
    tail_width,
)

__all__ = [
    "LineKind",
    "BoundStyle",
    "CertLine",
    "Certificate",
    "CertificationFailed",
    "ParseError",
    "certify_supremum",
    "peak_quadratic",
    "serialize",
    "parse",
]

HALF = Fraction(1, 2)


class LineKind(enum.Enum):
    QUAD_BOUND = "QuadBound"
    DERIV_POS = "DerivPos"
    DERIV_NEG = "DerivNeg"
    PEAK_LEFT = "PeakLeft"
    PEAK_RIGHT = "PeakRight"


class BoundStyle(enum.Enum):
    EXACT_PIECE = "exact_piece"
    UPPER_PIECE = "upper_piece"


@dataclass(frozen=True)
class CertLine:
    kind: LineKind
    lo: Fraction
    hi: Fraction
    level: int
    quad: Quadratic
    value: Fraction
    margin: Fraction
    style: BoundStyle = BoundStyle.EXACT_PIECE


@dataclass(frozen=True)
class Certificate:
    p: int
    q: int
    cstar: Fraction
    eta: Fraction
    lines: Tuple[CertLine, ...]
    right_endpoint_value: Fraction

    @property
    def pair(self) -> RatioPair:
        return RatioPair(self.p, self.q)


class CertificationFailed(Exception):
    def __init__(self, lo: Fraction, hi: Fraction, reason: str):
        super().__init__(f"cannot certify [{lo}, {hi}): {reason}")
        self.lo = lo
        self.hi = hi
        self.reason = reason


class ParseError(Exception):
    def __init__(self, line: int, field: str, reason: str):
        super().__init__(f"line {line}, field {field!r}: {reason}")
        self.line = line
        self.field = field
        self.reason = reason


def peak_quadratic(pp: RatioPair, tau: Quadratic, lo: Fraction, hi: Fraction,
                   N: int, eta: Fraction) -> Quadratic:
    """The q = 1 self-similar upper bound F on a level-N piece (see module doc)."""
    if pp.q != 1:
        raise ValueError("peak bounds are only used for q = 1")
    p = pp.p
    pn = p**N
    mid = (lo + hi) / 2
    j = math.floor(pn * mid)
    # y = pn x - j;  v(y) = (pn x - j)(1 + j - pn x);  x - y = j - (pn - 1) x
    v_y = Quadratic.from_linear_product(pn, -j, -pn, 1 + j)
    sign = 1 if j - (pn - 1) * mid > 0 else -1
    dist = Quadratic(Fraction(0), Fraction(-sign * (pn - 1)), Fraction(sign * j))
    bracket = Quadratic(Fraction(0), Fraction(0), eta) - v_y + dist.scaled(Fraction(2, p - 1))
    return tau + bracket.scaled(Fraction(1, pn))


class _Search:
    def __init__(self, pp: RatioPair, cstar: Fraction, eta: Fraction,
                 max_level: int, max_depth: int):
        self.pp = pp
        self.cstar = cstar
        self.eta = eta
        self.max_level = max_level
        self.max_depth = max_depth
        self.lines: List[CertLine] = []
        self.pieces_tried = 0

    def split(self, lo: Fraction, hi: Fraction, level: int) -> List[Tuple[Fraction, Fraction]]:
        cuts = set(breakpoints(self.pp, lo, hi, level))
        cuts.update(order_change_points(self.pp, lo, hi, level))
        if lo < self.cstar < hi:
            cuts.add(self.cstar)
        pts = [lo, *sorted(cuts), hi]
        return list(zip(pts, pts[1:]))

    def try_line(self, lo: Fraction, hi: Fraction, L: int, quad: Quadratic) -> Optional[CertLine]:
        pp, eta, c = self.pp, self.eta, self.cstar
        if hi == c or lo == c:
            left = hi == c
            if pp.q == 1:
                if Fraction(pp.p**L * c.numerator % c.denominator, c.denominator) != c:
                    return None
                F = peak_quadratic(pp, quad, lo, hi, L, eta)
                if F(c) != eta:
                    return None
                # F - eta = (x - c)(A (x - c) + F'(c))
                far = lo if left else hi
                at_far = F.A * (far - c) + F.slope(c)
                at_c = F.slope(c)
                if left and at_far > 0 and at_c >= 0:
                    return CertLine(LineKind.PEAK_LEFT, lo, hi, L, F, eta, at_far)
                if not left and at_far < 0 and at_c <= 0:
                    return CertLine(LineKind.PEAK_RIGHT, lo, hi, L, F, eta, -at_far)
                return None
            dt = derivative_tail_width(pp, L + 1)
            s_lo, s_hi = quad.slope(lo), quad.slope(hi)
            if left:
                bound = min(s_lo, s_hi) - dt
                if bound > 0:
                    return CertLine(LineKind.DERIV_POS, lo, hi, L, quad, bound, bound)
            else:
                bound = max(s_lo, s_hi) + dt
                if bound < 0:
                    return CertLine(LineKind.DERIV_NEG, lo, hi, L, quad, bound, -bound)
            return None
        _, qmax = quad_max_on(quad, lo, hi)
        value = qmax + tail_width(pp, L + 1)
        if value < eta:
            return CertLine(LineKind.QUAD_BOUND, lo, hi, L, quad, value, eta - value)
        return None

    def handle(self, lo: Fraction, hi: Fraction, n: int, depth: int) -> None:
        self.pieces_tried += 1
        terms = level_terms(self.pp, lo, hi, n)
        quad = terms[0]
        for L in range(1, n + 1):
            quad = quad + terms[L]
            line = self.try_line(lo, hi, L, quad)
            if line is not None:
                self.lines.append(line)
                return
        if n < self.max_level:
            for a, b in self.split(lo, hi, n + 1):
                self.handle(a, b, n + 1, depth)
        elif depth < self.max_depth:
            mid = (lo + hi) / 2
            self.handle(lo, mid, n, depth + 1)
            self.handle(mid, hi, n, depth + 1)
        else:
            raise CertificationFailed(lo, hi, f"no bound up to level {n}, depth {depth}")


def _merge(lines: Iterable[CertLine], eta: Fraction) -> List[CertLine]:
    merged: List[CertLine] = []
    for line in lines:
        prev = merged[-1] if merged else None
        if (prev is not None and line.kind is LineKind.QUAD_BOUND
                and prev.kind is LineKind.QUAD_BOUND and prev.hi == line.lo
                and prev.level == line.level and prev.quad == line.quad):
            value = max(prev.value, line.value)
            merged[-1] = replace(prev, hi=line.hi, value=value, margin=eta - value)
        else:
            merged.append(line)
    return merged


def certify_supremum(pp: RatioPair, cstar: Fraction, max_level: int = 14,
                     max_depth: int = 40) -> Certificate:
    """Search for a certificate that sigma^2 < sigma^2(cstar) on [0, 1/2] minus cstar.

    Raises CertificationFailed naming the first interval that resists every
    level up to ``max_level`` and ``max_depth`` bisections; this is what
    happens whenever cstar is not the maximizer.
    """
    cstar = Fraction(cstar)
    if not 0 < cstar <= HALF:
        raise ValueError("cstar must lie in (0, 1/2]")
    if max_level < 1 or max_depth < 0:
        raise ValueError("max_level >= 1 and max_depth >= 0 required")
    eta = sigma_sq_exact(pp, cstar)
    right = sigma_sq_exact(pp, HALF)
    search = _Search(pp, cstar, eta, max_level, max_depth)
    for a, b in search.split(Fraction(0), HALF, 1):
        search.handle(a, b, 1, 0)
    lines = sorted(search.lines, key=lambda ln: ln.lo)
    return Certificate(pp.p, pp.q, cstar, eta, tuple(_merge(lines, eta)), right)


# -- serialization -----------------------------------------------------------

_HEADER_FIELDS = ("type", "p", "q", "cstar", "eta", "right_endpoint_value", "count")
_LINE_FIELDS = ("type", "kind", "lo", "hi", "level", "A", "B", "C", "value", "margin", "style")
_RATIONAL_FIELDS = {"cstar", "eta", "right_endpoint_value", "lo", "hi", "A", "B", "C",
                    "value", "margin"}


def _dump(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=True)


def serialize(cert: Certificate) -> str:
    """Canonical JSON-lines text: one header object, then one object per line."""
    r = format_rational
    out = [_dump({
        "type": "certificate",
        "p": cert.p,
        "q": cert.q,
        "cstar": r(cert.cstar),
        "eta": r(cert.eta),
        "right_endpoint_value": r(cert.right_endpoint_value),
        "count": len(cert.lines),
    })]
    for ln in cert.lines:
        out.append(_dump({
            "type": "line",
            "kind": ln.kind.value,
            "lo": r(ln.lo),
            "hi": r(ln.hi),
            "level": ln.level,
            "A": r(ln.quad.A),
            "B": r(ln.quad.B),
            "C": r(ln.quad.C),
            "value": r(ln.value),
            "margin": r(ln.margin),
            "style": ln.style.value,
        }))
    return "\n".join(out) + "\n"


def _load(raw: str, lineno: int, fields: Tuple[str, ...], kind: str) -> dict:
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(lineno, "<json>", f"malformed object: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise ParseError(lineno, "<json>", "expected an object")
    if tuple(obj) != fields:
        missing = [f for f in fields if f not in obj]
        extra = [f for f in obj if f not in fields]
        name = (missing or extra or ["<order>"])[0]
        raise ParseError(lineno, name, "missing" if missing else
                         "unexpected" if extra else "fields out of canonical order")
    if obj["type"] != kind:
        raise ParseError(lineno, "type", f"expected {kind!r}")
    for name in fields:
        value = obj[name]
        if name in _RATIONAL_FIELDS:
            if not isinstance(value, str):
                raise ParseError(lineno, name, "rational must be a string")
            try:
                obj[name] = parse_rational(value)
            except RationalFormatError as exc:
                raise ParseError(lineno, name, str(exc)) from None
        elif name in ("p", "q", "level", "count"):
            if not isinstance(value, int) or isinstance(value, bool):
                raise ParseError(lineno, name, "expected an integer")
    return obj


def parse(text: str) -> Certificate:
    if not text.strip():
        raise ParseError(1, "<input>", "empty certificate")
    rows = text.split("\n")
    if rows[-1] == "":
        rows.pop()
    else:
        raise ParseError(len(rows), "<json>", "missing final newline (truncated?)")
    head = _load(rows[0], 1, _HEADER_FIELDS, "certificate")
    if head["count"] != len(rows) - 1:
        raise ParseError(len(rows), "count",
                         f"header announces {head['count']} lines, found {len(rows) - 1}")
    lines = []
    for i, raw in enumerate(rows[1:], start=2):
        obj = _load(raw, i, _LINE_FIELDS, "line")
        try:
            kind = LineKind(obj["kind"])
        except ValueError:
            raise ParseError(i, "kind", f"unknown kind {obj['kind']!r}") from None
        try:
            style = BoundStyle(obj["style"])
        except ValueError:
            raise ParseError(i, "style", f"unknown style {obj['style']!r}") from None
        lines.append(CertLine(kind, obj["lo"], obj["hi"], obj["level"],
                              Quadratic(obj["A"], obj["B"], obj["C"]),
                              obj["value"], obj["margin"], style))
    return Certificate(head["p"], head["q"], head["cstar"], head["eta"], tuple(lines),
                       head["right_endpoint_value"])
