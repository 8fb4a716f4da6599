import random
from dataclasses import replace
from fractions import Fraction as F

import pytest

from lilsigma.certifier import (
    BoundStyle,
    CertificationFailed,
    LineKind,
    ParseError,
    certify_supremum,
    parse,
    peak_quadratic,
    serialize,
)
from lilsigma.checker import check
from lilsigma.formulas import classify
from lilsigma.regression import CSTAR, ETA, PP, hand_certificate
from lilsigma.series import RatioPair, sigma_sq_exact, tau_quadratic


@pytest.fixture(scope="module")
def cert32():
    return certify_supremum(PP, CSTAR)


@pytest.fixture(scope="module")
def cert21():
    return certify_supremum(RatioPair(2, 1), F(1, 3))


def test_three_halves(cert32):
    assert cert32.eta == ETA
    assert check(cert32)
    flanks = {ln.kind: ln for ln in cert32.lines if ln.kind is not LineKind.QUAD_BOUND}
    right = flanks[LineKind.DERIV_NEG]
    assert (right.lo, right.hi, right.level) == (CSTAR, F(911, 2187), 7)
    assert right.value == F(-62497, 9307872)
    left = flanks[LineKind.DERIV_POS]
    assert (left.lo, left.hi, left.level) == (F(73789, 3**11), CSTAR, 11)
    assert left.value == F(122591869, 120630021120)


def test_shape_close_to_hand_proof(cert32):
    # same depth of refinement as the hand proof and the same flank pieces
    hand = hand_certificate()
    assert max(ln.level for ln in cert32.lines) == max(ln.level for ln in hand.lines) == 11
    ours = [ln for ln in cert32.lines if ln.kind is not LineKind.QUAD_BOUND]
    theirs = [ln for ln in hand.lines if ln.kind is not LineKind.QUAD_BOUND]
    assert [(a.lo, a.hi, a.level, a.quad) for a in ours] == \
           [(b.lo, b.hi, b.level, b.quad) for b in theirs]
    assert len(cert32.lines) <= 2 * len(hand.lines)


def test_lines_are_consistent(cert32):
    for ln in cert32.lines:
        assert ln.quad == tau_quadratic(PP, ln.lo, ln.hi, ln.level)
        if ln.kind is LineKind.QUAD_BOUND:
            assert ln.margin == ETA - ln.value > 0


def test_two(cert21):
    assert check(cert21)
    kinds = [ln.kind for ln in cert21.lines]
    assert LineKind.PEAK_LEFT in kinds and LineKind.PEAK_RIGHT in kinds


def test_peak_bound_sound(cert21):
    pp = RatioPair(2, 1)
    rng = random.Random(7)
    for ln in cert21.lines:
        if ln.kind not in (LineKind.PEAK_LEFT, LineKind.PEAK_RIGHT):
            continue
        bound = peak_quadratic(pp, tau_quadratic(pp, ln.lo, ln.hi, ln.level), ln.lo, ln.hi,
                               ln.level, cert21.eta)
        assert bound == ln.quad
        for _ in range(40):
            x = ln.lo + (ln.hi - ln.lo) * F(rng.randrange(1, 999), 1000)
            x = x.limit_denominator(5000)
            if not ln.lo <= x < ln.hi or x == cert21.cstar:
                continue
            assert sigma_sq_exact(pp, x) <= bound(x) < cert21.eta


@pytest.mark.parametrize("p,q", [(5, 3), (3, 1), (4, 1), (9, 2), (13, 6), (4, 3), (6, 1), (7, 5)])
def test_other_pairs_certify(p, q):
    pp = RatioPair(p, q)
    cert = certify_supremum(pp, classify(pp).witness)
    assert check(cert)


def test_cstar_half_has_only_left_flank():
    cert = certify_supremum(RatioPair(5, 3), F(1, 2))
    assert [ln.kind for ln in cert.lines][-1] is LineKind.DERIV_POS
    assert sum(ln.kind is not LineKind.QUAD_BOUND for ln in cert.lines) == 1


def test_wrong_peak_fails():
    with pytest.raises(CertificationFailed) as info:
        certify_supremum(PP, F(1, 3))
    assert info.value.lo < info.value.hi


def test_bad_arguments():
    with pytest.raises(ValueError):
        certify_supremum(PP, F(0))
    with pytest.raises(ValueError):
        certify_supremum(PP, F(2, 3))
    with pytest.raises(ValueError):
        certify_supremum(PP, CSTAR, max_level=0)


def test_roundtrip_and_determinism(cert32, cert21):
    for cert in (cert32, cert21, hand_certificate()):
        text = serialize(cert)
        assert parse(text) == cert
        assert serialize(parse(text)) == text
    assert serialize(certify_supremum(RatioPair(2, 1), F(1, 3))) == serialize(cert21)


def test_hand_edited_margin_parses_but_is_rejected(cert21):
    rows = serialize(cert21).splitlines(keepends=True)
    i = next(i for i, r in enumerate(rows) if '"QuadBound"' in r)
    import json
    obj = json.loads(rows[i])
    obj["margin"] = "-" + obj["margin"]
    rows[i] = json.dumps(obj, separators=(",", ":")) + "\n"
    cert = parse("".join(rows))
    verdict = check(cert)
    assert not verdict and verdict.reason.startswith("margin")


def _text(cert21):
    return serialize(cert21)


@pytest.mark.parametrize("mutate,where", [
    (lambda t: "", 1),
    (lambda t: "\n\n", 1),
    (lambda t: t[:-1], None),
    (lambda t: t[: len(t) // 2], None),
    (lambda t: t.replace('"cstar":"1/3"', '"cstar":"04/12"'), 1),
    (lambda t: t.replace('"cstar":"1/3"', '"cstar":"2/6"'), 1),
    (lambda t: t.replace('"count":', '"cnt":'), 1),
    (lambda t: t.replace('"p":2,', '"p":true,'), 1),
    (lambda t: t.replace('"kind":"QuadBound"', '"kind":"Nope"', 1), 2),
    (lambda t: t.replace('"style":"exact_piece"', '"style":"loose"', 1), 2),
    (lambda t: t.replace('"lo":"0"', '"lo":0'), 2),
    (lambda t: t.replace('"type":"line","kind"', '"kind":"x","type"', 1), 2),
    (lambda t: "\n".join(t.split("\n")[:-2]) + "\n", None),
])
def test_parse_errors(cert21, mutate, where):
    with pytest.raises(ParseError) as info:
        parse(mutate(_text(cert21)))
    if where is not None:
        assert info.value.line == where


def test_truncated_final_line_names_line(cert21):
    text = _text(cert21)
    n = text.count("\n")
    with pytest.raises(ParseError) as info:
        parse(text[:-10])
    assert info.value.line == n


def test_upper_piece_style_accepted(cert32):
    i = next(i for i, ln in enumerate(cert32.lines) if ln.kind is LineKind.QUAD_BOUND)
    ln = cert32.lines[i]
    bumped = replace(ln.quad, C=ln.quad.C + F(1, 10**40))
    value = ln.value + F(1, 10**40)
    new = replace(ln, quad=bumped, value=value, margin=ETA - value,
                  style=BoundStyle.UPPER_PIECE)
    lines = list(cert32.lines)
    lines[i] = new
    assert check(replace(cert32, lines=tuple(lines)))
    under = replace(ln.quad, C=ln.quad.C - F(1, 10**40))
    value = ln.value - F(1, 10**40)
    lines[i] = replace(new, quad=under, value=value, margin=ETA - value)
    assert not check(replace(cert32, lines=tuple(lines)))
