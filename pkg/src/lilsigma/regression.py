"""Regression vectors for theta = 3/2: every displayed constant of the
hand proof that the supremum of sigma^2 sits at 277/665.

The quadratics are rebuilt here from their product forms, independently of
:func:`lilsigma.series.tau_quadratic`, so a drift on either side shows up.
All constants live in this one table.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as F
from typing import Dict, List, Optional, Tuple

from .series import Quadratic, RatioPair, quad_max_on, sigma_sq_exact, tail_width

PP = RatioPair(3, 2)
CSTAR = F(277, 665)
ETA = F(
    1222685807050467558645782547163492,
    4561296506512477081905890170847375,
)
SIGMA_RADICAND = F(305671451762616889661445636790873, 10314424798490535546171949055)
SIGMA_PREFACTOR = F(2, 665)


def _term(k: int, f1: Tuple[int, int], f2: Tuple[int, int]) -> Quadratic:
    # (2 / 6^k) (a1 x + b1)(a2 x + b2)
    return Quadratic.from_linear_product(f1[0], f1[1], f2[0], f2[1], F(2, 6**k))


def _g_functions() -> Dict[str, Quadratic]:
    g: Dict[str, Quadratic] = {}
    g["g0"] = Quadratic.from_linear_product(1, 0, -1, 1)
    g["g1"] = g["g0"] + _term(1, (3, -1), (-2, 1))
    g["g2"] = g["g1"] + _term(2, (4, -1), (-9, 4))
    g["g3"] = g["g2"] + _term(3, (27, -11), (-8, 4))
    g["g4"] = g["g3"] + _term(4, (16, -6), (-81, 34))
    g["g5"] = g["g4"] + _term(5, (243, -101), (-32, 14))
    g["g6-"] = g["g5"] + _term(6, (729, -303), (-64, 27))
    g["g6+"] = g["g5"] + _term(6, (64, -26), (-729, 304))
    seven = _term(7, (128, -53), (-2187, 911))
    g["g7-"] = g["g6-"] + seven
    g["g7+"] = g["g6+"] + seven
    g["g8-"] = g["g7-"] + _term(8, (256, -106), (-6561, 2733))
    g["g9-"] = g["g8-"] + _term(9, (512, -213), (-19683, 8199))
    g["g10-"] = g["g9-"] + _term(10, (59049, -24596), (-1024, 427))
    g["g11-"] = g["g10-"] + _term(11, (177147, -73789), (-2048, 854))
    return g


G = _g_functions()


@dataclass(frozen=True)
class HandBound:
    """One displayed interval bound: quad(point) + tail - eta == expected."""

    tag: str
    lo: F
    hi: F
    level: int
    quad: Quadratic
    point: F
    axis: F
    expected: F

    @property
    def tail(self) -> F:
        return tail_width(PP, self.level + 1)


def _b(tag, lo, hi, level, base, extra, point, axis, num, den) -> HandBound:
    quad = G[base]
    for k, f1, f2 in extra:
        quad = quad + _term(k, f1, f2)
    return HandBound(tag, lo, hi, level, quad, point, axis, F(-num, den))


# fmt: off
BOUNDS: List[HandBound] = [
    _b("bound-01", F(0), F(1, 3), 1, "g0", [(1, (2, 0), (-3, 1))], F(5, 18), F(5, 18),
       4903660393458055269333329257473743, 246310011351673762422918069225758250),
    _b("bound-02", F(1, 3), F(3, 8), 1, "g1", [], F(3, 8), F(4, 9),
       5778590326763421748314562478852239, 875768929250395599725930912802696000),
    _b("bound-26", F(4, 9), F(1, 2), 2, "g1", [(2, (9, -4), (-4, 2))], F(41, 90), F(41, 90),
       15967737560279378662084583483719591, 2955720136220085149075016830709099000),
    _b("bound-03", F(3, 8), F(2, 5), 3, "g1", [(2, (9, -3), (-4, 2)), (3, (8, -3), (-27, 11))],
       F(2, 5), F(91, 216),
       40623864934079027775310823389107, 72980744104199633310494242733558000),
    _b("bound-04", F(2, 5), F(11, 27), 3, "g2", [(3, (8, -3), (-27, 11))], F(607, 1512), F(607, 1512),
       115305379420414389410460002655935827, 212811849807846130733401211811055128000),
    _b("bound-05", F(11, 27), F(87, 211), 3, "g3", [], F(87, 211), F(317, 756),
       4087562128846726808409665149171701983, 29242581374367646871548627626666621462000),
    _b("bound-25", F(28, 65), F(4, 9), 3, "g2", [(3, (8, -3), (-27, 12))], F(28, 65), F(205, 504),
       62145572531001959682866090587826537, 25616241180574071291983479199478858000),
    _b("bound-24", F(8, 19), F(28, 65), 4, "g2", [(3, (8, -3), (-27, 12)), (4, (81, -34), (-16, 7))],
       F(8, 19), F(4801, 11664),
       638551936297453983963801188142263, 3940960181626780198766689107612132000),
    _b("bound-23", F(34, 81), F(8, 19), 4, "g3", [(4, (81, -34), (-16, 7))], F(8, 19), F(4915, 11664),
       638551936297453983963801188142263, 3940960181626780198766689107612132000),
    _b("bound-06", F(87, 211), F(302, 729), 5, "g3",
       [(4, (81, -33), (-16, 7)), (5, (32, -13), (-243, 101))], F(302, 729), F(35785, 85536),
       13250661085528974219050820575468766883, 155139838509919829304649483410259188312000),
    _b("bound-07", F(302, 729), F(276, 665), 6, "g3",
       [(4, (81, -33), (-16, 7)), (5, (32, -13), (-243, 101)), (6, (729, -302), (-64, 27))],
       F(276, 665), F(19517, 46656),
       9623392693609973991877849224521309, 425623699615692261466802423622110256000),
    _b("bound-08", F(276, 665), F(27, 65), 6, "g3",
       [(4, (81, -33), (-16, 7)), (5, (32, -13), (-243, 101)), (6, (64, -26), (-729, 303))],
       F(27, 65), F(1318, 3159),
       1906349521544493873261549971920349, 425623699615692261466802423622110256000),
    _b("bound-09", F(27, 65), F(101, 243), 6, "g4",
       [(5, (32, -13), (-243, 101)), (6, (64, -26), (-729, 303))], F(27, 65), F(20893, 50544),
       1906349521544493873261549971920349, 425623699615692261466802423622110256000),
    _b("bound-22", F(278, 665), F(34, 81), 5, "g4", [(5, (32, -13), (-243, 102))],
       F(278, 665), F(11809, 28512),
       5091905468453476674801592843459949, 70937283269282043577800403937018376000),
    _b("bound-21", F(88, 211), F(278, 665), 6, "g4",
       [(5, (32, -13), (-243, 102)), (6, (729, -304), (-64, 27))], F(88, 211), F(251701, 606528),
       56411054147338655852222279153714125703, 6316397576863411724254503567359990235792000),
    _b("bound-20", F(304, 729), F(88, 211), 6, "g5", [(6, (729, -304), (-64, 27))],
       F(88, 211), F(19459, 46656),
       56411054147338655852222279153714125703, 6316397576863411724254503567359990235792000),
    _b("bound-19", F(858, 2059), F(304, 729), 6, "g6+", [], F(858, 2059), F(126119, 303264),
       245734830243268354941082685853561543661, 200491509741159404926171222855543067801904000),
    _b("bound-18", F(2627, 6305), F(858, 2059), 7, "g6+", [(7, (2187, -911), (-128, 54))],
       F(2627, 6305), F(874067, 2099520),
       296152864180283626343198670531396721, 357807656810258627806425237458320688544000),
    _b("bound-17", F(911, 2187), F(2627, 6305), 8, "g6+",
       [(7, (2187, -911), (-128, 54)), (8, (6561, -2733), (-256, 107))],
       F(911, 2187), F(3963493, 9517824),
       2903244137571860267233333557802343701, 11170068372714227709934762805538661558464000),
    _b("bound-10", F(101, 243), F(857, 2059), 6, "g6-", [], F(857, 2059), F(84301, 202176),
       5169596011476730532177386324915893190949, 1804423587670434644335541005699887610217136000),
    _b("bound-11", F(857, 2059), F(202, 485), 7, "g7-", [], F(202, 485), F(1749937, 4199040),
       103698794723921201659167205767313, 3058185100942381434242950747507014432000),
    _b("bound-12", F(202, 485), F(7985, 19171), 8, "g8-", [], F(7985, 19171), F(247807, 594864),
       47689069442943750663023590748245592189, 15599498462223969356869812416770378735394496000),
    _b("bound-13", F(7985, 19171), F(24169, 58025), 9, "g9-", [], F(24169, 58025), F(2954029, 7091712),
       5902470452852577000431786200645894683457, 2476280506033531932376735578547810572039895680000),
    _b("bound-14", F(24169, 58025), F(24596, 59049), 10, "g9-",
       [(10, (1024, -426), (-59049, 24596))], F(24169, 58025), F(18889067, 45349632),
       11899418967263802834461455793906308311731, 4952561012067063864753471157095621144079791360000),
    _b("bound-15", F(24596, 59049), F(72935, 175099), 10, "g10-", [],
       F(72935, 175099), F(528952925, 1269789696),
       92702352365411529614480198024779430800965409,
       16912123272164340374273932618342897873352232696576000),
    _b("bound-16", F(72935, 175099), F(73789, 177147), 11, "g10-",
       [(11, (2048, -853), (-177147, 73789))], F(73789, 177147), F(3475943813, 8344332288),
       29347546710908416454761350780039732607, 65143838749669376004339536681901474208962048000),
]
# fmt: on
BOUNDS.sort(key=lambda b: b.lo)


@dataclass(frozen=True)
class HandSlope:
    """A one-sided derivative bound flanking the maximizer."""

    tag: str
    lo: F
    hi: F
    level: int
    base: str
    slope_const: F
    slope_coeff: F
    expected: F

    @property
    def quad(self) -> Quadratic:
        return G[self.base]


SLOPES: List[HandSlope] = [
    HandSlope("slope-right", CSTAR, F(911, 2187), 7, "g7+", F(1745947, 139968), F(-30),
               F(-62497, 9307872)),
    HandSlope("slope-left", F(73789, 177147), CSTAR, 11, "g11-", F(27157195, 1417176), F(-46),
               F(122591869, 120630021120)),
]


@dataclass
class Row:
    tag: str
    ok: bool
    detail: str


def check_bound(b: HandBound, eta: F = ETA) -> Row:
    value = b.quad(b.point) + b.tail - eta
    axis_ok = b.quad.axis == b.axis
    argmax, _ = quad_max_on(b.quad, b.lo, b.hi)
    ok = value == b.expected and axis_ok and argmax == b.point
    detail = f"h <= {value}"
    if not axis_ok:
        detail += f" (axis {b.quad.axis} != stated {b.axis})"
    if argmax != b.point:
        detail += f" (argmax on interval is {argmax}, not {b.point})"
    return Row(b.tag, ok, detail)


def check_slope(s: HandSlope) -> Row:
    from .series import derivative_tail_width

    quad = s.quad
    form_ok = 2 * quad.A == s.slope_coeff and quad.B == s.slope_const
    dt = derivative_tail_width(PP, s.level + 1)
    if s.expected < 0:
        value = quad.slope(CSTAR) + dt
    else:
        value = quad.slope(CSTAR) - dt
    ok = form_ok and value == s.expected
    detail = f"slope bound {value}"
    if not form_ok:
        detail += f" (derivative is {2 * quad.A}x + {quad.B})"
    return Row(s.tag, ok, detail)


def reproduce(eta: Optional[F] = None) -> List[Row]:
    """Recompute every displayed constant; ``eta`` defaults to the exact sum."""
    rows: List[Row] = []
    computed = sigma_sq_exact(PP, CSTAR) if eta is None else eta
    rows.append(Row("eta", computed == ETA, f"sigma^2(277/665) = {computed}"))
    closed = SIGMA_PREFACTOR**2 * SIGMA_RADICAND
    rows.append(Row("radicand", closed == computed, f"(2/665)^2 * radicand = {closed}"))
    rows.extend(check_bound(b, computed) for b in BOUNDS)
    rows.extend(check_slope(s) for s in SLOPES)
    return rows


# the hand proof as a certificate, in left-to-right order
_TILING = [
    "bound-01",
    "bound-02",
    "bound-03",
    "bound-04",
    "bound-05",
    "bound-06",
    "bound-07",
    "bound-08",
    "bound-09",
    "bound-10",
    "bound-11",
    "bound-12",
    "bound-13",
    "bound-14",
    "bound-15",
    "bound-16",
    "slope-left",
    "slope-right",
    "bound-17",
    "bound-18",
    "bound-19",
    "bound-20",
    "bound-21",
    "bound-22",
    "bound-23",
    "bound-24",
    "bound-25",
    "bound-26",
]


def hand_certificate():
    """Certificate whose lines are exactly the intervals, levels and quadratics
    of the hand proof for 3/2."""
    from .certifier import Certificate, CertLine, LineKind
    from .series import derivative_tail_width

    by_tag = {b.tag: b for b in BOUNDS}
    slopes = {s.tag: s for s in SLOPES}
    lines = []
    for tag in _TILING:
        if tag in slopes:
            s = slopes[tag]
            dt = derivative_tail_width(PP, s.level + 1)
            if s.hi == CSTAR:
                bound = min(s.quad.slope(s.lo), s.quad.slope(s.hi)) - dt
                lines.append(CertLine(LineKind.DERIV_POS, s.lo, s.hi, s.level, s.quad,
                                      bound, bound))
            else:
                bound = max(s.quad.slope(s.lo), s.quad.slope(s.hi)) + dt
                lines.append(CertLine(LineKind.DERIV_NEG, s.lo, s.hi, s.level, s.quad,
                                      bound, -bound))
            continue
        b = by_tag[tag]
        _, qmax = quad_max_on(b.quad, b.lo, b.hi)
        value = qmax + b.tail
        lines.append(CertLine(LineKind.QUAD_BOUND, b.lo, b.hi, b.level, b.quad, value,
                              ETA - value))
    return Certificate(3, 2, CSTAR, ETA, tuple(lines), sigma_sq_exact(PP, F(1, 2)))
