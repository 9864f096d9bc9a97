from fractions import Fraction as F

import pytest

from banque.cce import ConcaveObjective, cce_value, kernel_matrix, maximize_concave, solve_cce
from banque.payoff import JointMixture, build_decomposition, expectation_joint
from banque.response import banker_best_response, render_strategy_table
from banque.rules import InfoSet
from fixtures import KERNEL_HALF, table_half

HALF = F(1, 2)


@pytest.fixture(scope="module")
def cce_half():
    return solve_cce(HALF)


def test_half_players_and_value(cce_half):
    assert cce_half.players_joint.as_tuple() == (0, F(110, 543), F(110, 543), F(323, 543))
    assert cce_half.value == F(-16655514960, 181 * 13**9)
    assert cce_half.verified


def test_half_mixing(cce_half):
    assert cce_half.banker.mixing == {InfoSet(6, 10, 6): F(5121, 5792), InfoSet(10, 6, 6): F(5121, 5792)}


def test_half_table(cce_half):
    table = render_strategy_table(cce_half.banker, cce_half.indifferent_sets)
    assert table.cells == table_half()
    assert table.is_symmetric()


def test_half_kernel_matrix(cce_half):
    d = build_decomposition(HALF)
    sets = [InfoSet(6, 10, 6), InfoSet(10, 6, 6)]
    _, A = kernel_matrix(d, cce_half.banker, sets)
    scale = F(-8, 13**9)
    assert A == [[scale * v for v in row] for row in KERNEL_HALF]


def test_value_is_saddle(cce_half):
    d = build_decomposition(HALF)
    p = cce_half.players_joint
    # Banker cannot do better than his equilibrium strategy against p ...
    br, _ = banker_best_response(d, p)
    assert expectation_joint(d, p, br) == cce_half.value
    # ... and no pure joint strategy beats the value against Banker's mixture
    for u in range(4):
        vertex = JointMixture(*[F(int(i == u)) for i in range(4)])
        assert expectation_joint(d, vertex, cce_half.banker) <= cce_half.value


def test_objective_is_min_over_banker():
    d = build_decomposition(F(2, 7))
    obj = ConcaveObjective.build(d)
    p = JointMixture.of(F(1, 10), F(2, 10), F(3, 10))
    br, _ = banker_best_response(d, p)
    assert obj(p.as_tuple()) == expectation_joint(d, p, br)


def test_exhaustive_search_agrees():
    d = build_decomposition(F(26, 100))
    obj = ConcaveObjective.build(d)
    fast = maximize_concave(obj)
    slow = maximize_concave(obj, exhaustive_exact=True)
    assert fast[1] == slow[1]


def test_swapped_theta_mirrors():
    a = solve_cce(F(1, 4))
    b = solve_cce(F(3, 4))
    assert b.value == a.value
    j = a.players_joint
    assert b.players_joint.as_tuple() == (j.p00, j.p10, j.p01, j.p11)
    assert b.banker == a.banker.mirrored()
    assert "notice" in b.extras


def test_value_dominates_other_mixtures():
    # The CCE value is the best guaranteed value, so it beats the product point (1/2, 1/2)
    for t in (F(1, 10), F(1, 3)):
        d = build_decomposition(t)
        p = JointMixture.of(F(1, 4), F(1, 4), F(1, 4))
        br, _ = banker_best_response(d, p)
        assert expectation_joint(d, p, br) <= cce_value(t)
