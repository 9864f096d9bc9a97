from fractions import Fraction as F

import pytest

from banque.rules import (
    CARD_WEIGHT,
    NATURAL,
    Q_WEIGHT,
    STAND,
    InfoSet,
    ThetaParam,
    card_value_pmf,
    enumerate_info_sets,
    info_set_index,
    two_card_total_pmf,
)


def test_info_sets():
    sets = enumerate_info_sets()
    assert len(sets) == 1144
    assert InfoSet(NATURAL, NATURAL, 0) not in info_set_index()
    assert InfoSet(STAND, NATURAL, 7) in info_set_index()
    assert all(0 <= s.j <= 7 for s in sets)
    assert InfoSet.parse("(6,10,6)") == InfoSet(6, 10, 6)
    with pytest.raises(ValueError):
        InfoSet.parse("11,11,3")


def test_two_card_totals_from_cards():
    # 13 ranks: ace..9 count face value, ten and court cards count zero
    ranks = list(range(1, 10)) + [0, 0, 0, 0]
    counts = [0] * 10
    for a in ranks:
        for b in ranks:
            counts[(a + b) % 10] += 1
    assert [F(c, 169) for c in counts] == [two_card_total_pmf(i) for i in range(10)]
    assert [F(w, 169) for w in Q_WEIGHT] == [two_card_total_pmf(i) for i in range(10)]
    assert [F(ranks.count(k), 13) for k in range(10)] == [card_value_pmf(k) for k in range(10)]
    assert sum(CARD_WEIGHT) == 13


def test_theta_folding():
    t = ThetaParam.of("3/4")
    assert t.value == F(3, 4) and t.canonical == F(1, 4) and t.swapped
    h = ThetaParam.of(F(1, 2))
    assert h.canonical == F(1, 2) and not h.swapped
    assert ThetaParam.of("0.3").value == F(3, 10)


@pytest.mark.parametrize("bad", ["0", "1", "-1/2", "3/2", "abc"])
def test_theta_rejects_out_of_range(bad):
    with pytest.raises(ValueError):
        ThetaParam.of(bad)


def test_theta_rejects_float():
    with pytest.raises(TypeError):
        ThetaParam.of(0.5)
