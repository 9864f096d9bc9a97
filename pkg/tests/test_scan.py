from fractions import Fraction as F

import pytest

from banque.scan import fingerprint, scan, value_curve, value_curve_csv


def test_degenerate_range_is_empty():
    res = scan("cce", F(1, 3), F(1, 3))
    assert res.brackets == []


def test_reversed_range_rejected():
    with pytest.raises(ValueError):
        scan("cce", F(1, 2), F(1, 3))


def test_fingerprint_constant_inside_interval():
    assert fingerprint("cce", F(4998, 10000)) == fingerprint("cce", F(1, 2))
    assert fingerprint("cce", F(1, 2)) != fingerprint("cce", F(1, 4))


def test_cce_breakpoints_near_peak():
    res = scan("cce", F(4960, 10000), F(4962, 10000), grid=2, tol=F(1, 10**9))
    assert len(res.brackets) == 2
    # the known breakpoint cubics change sign inside the brackets
    p108 = lambda t: 6844383 - 1189837640 * t + 3546625856 * t**2 - 2370528768 * t**3  # noqa: E731
    p109 = lambda t: 6896169 - 1190915420 * t + 3549548480 * t**2 - 2372477184 * t**3  # noqa: E731
    for br, p in zip(res.brackets, (p108, p109)):
        assert br.width <= F(1, 10**9)
        assert p(br.lo) * p(br.hi) < 0
        assert br.left != br.right
    text = res.to_csv()
    assert text.splitlines()[0].startswith("bracket_lo,bracket_hi")


def test_value_curve_rows():
    rows = value_curve("cce", F(1, 4), F(1, 2), n=2)
    assert [r[0] for r in rows] == [F(1, 4), F(3, 8), F(1, 2)]
    assert rows[-1][1] == F(-16655514960, 181 * 13**9)
    csv_text = value_curve_csv("cce", rows)
    assert csv_text.splitlines()[0] == "theta,value"


def test_ice_curve_has_gap_column():
    rows = value_curve("ice", F(3, 10), F(2, 5), n=1)
    text = value_curve_csv("ice", rows).splitlines()
    assert text[0] == "theta,lower,upper,gap"
    assert text[1].endswith(",0")
