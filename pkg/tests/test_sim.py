from fractions import Fraction as F

import numpy as np
import pytest

from banque.cce import solve_cce
from banque.payoff import BankerStrategy, ProductMixture, build_decomposition, expectation_joint
from banque.sim import _merge, exact_q, simulate, total_frequencies


def test_total_frequencies_match_q():
    q = np.array([float(x) for x in exact_q()])
    for cards in (False, True):
        freq = total_frequencies(400_000, seed=1, card_mode=cards)
        se = np.sqrt(q * (1 - q) / 400_000)
        assert np.all(np.abs(freq - q) < 5 * se)


def test_merge_matches_direct_statistics():
    rng = np.random.default_rng(0)
    x = rng.normal(size=1000)
    parts = [x[:300], x[300:710], x[710:]]
    acc = None
    for p in parts:
        s = (len(p), float(p.mean()), float(((p - p.mean()) ** 2).sum()))
        acc = s if acc is None else _merge(acc, s)
    assert acc[0] == 1000
    assert acc[1] == pytest.approx(x.mean(), abs=1e-12)
    assert acc[2] == pytest.approx(((x - x.mean()) ** 2).sum(), rel=1e-12)


def test_reproducible_and_thread_independent():
    res = solve_cce(F(1, 2))
    a = simulate(F(1, 2), res.players_joint, res.banker, 2_100_000, seed=9, workers=1)
    b = simulate(F(1, 2), res.players_joint, res.banker, 2_100_000, seed=9, workers=3)
    assert a.mean == b.mean and a.stderr == b.stderr
    assert a.rounds == 2_100_000


def test_mean_within_four_standard_errors():
    t = F(1, 3)
    d = build_decomposition(t)
    pm = ProductMixture(F(1, 2), F(1, 4))
    banker = BankerStrategy(frozenset(s for s in d.sets if s.j <= 3))
    exact = expectation_joint(d, pm.as_joint(), banker)
    for cards in (False, True):
        r = simulate(t, pm, banker, 1_000_000, seed=4, card_mode=cards)
        assert r.within(exact, 4)


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        simulate(F(1, 2), ProductMixture(F(0), F(0)), BankerStrategy.all_stand(), 0)
    with pytest.raises(TypeError):
        simulate(F(1, 2), (1, 0, 0, 0), BankerStrategy.all_stand(), 10)
