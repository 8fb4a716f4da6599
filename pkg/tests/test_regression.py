from fractions import Fraction as F

import pytest

from lilsigma import regression
from lilsigma.checker import check
from lilsigma.series import sigma_sq_exact, tail_width


def test_eta_and_radicand():
    assert sigma_sq_exact(regression.PP, regression.CSTAR) == regression.ETA
    assert regression.SIGMA_PREFACTOR**2 * regression.SIGMA_RADICAND == regression.ETA


@pytest.mark.parametrize("row", regression.reproduce(), ids=lambda r: r.tag)
def test_every_row_passes(row):
    assert row.ok, row.detail


def test_selected_displays():
    by_tag = {b.tag: b for b in regression.BOUNDS}
    first = by_tag["bound-01"]
    assert first.quad(first.point) + first.tail - regression.ETA == \
        F(-4903660393458055269333329257473743, 246310011351673762422918069225758250)
    near = by_tag["bound-22"]
    assert near.point == F(278, 665)
    assert near.quad(near.point) + near.tail - regression.ETA == \
        F(-5091905468453476674801592843459949, 70937283269282043577800403937018376000)
    assert tail_width(regression.PP, 4) == F(1, 10 * 6**3)


def test_wrong_eta_fails_rows():
    rows = regression.reproduce(eta=regression.ETA + F(1, 10**40))
    assert not any(r.ok for r in rows if r.tag != "radicand" and not r.tag.startswith("slope"))


def test_hand_proof_certificate():
    cert = regression.hand_certificate()
    assert len(cert.lines) == 28
    assert check(cert)
