import random
from fractions import Fraction as F

import numpy as np
import pytest

from banque.cce import cce_value
from banque.ice import (
    baccara_problem,
    ice_gap,
    intersect_curves,
    maximin_product_check,
    product_maximin,
    solve_ice_lower,
    unconstrained_value,
    upper_value,
)
from banque.numeric import BilinearForm, quadratic, sqrt_exact, to_float
from banque.payoff import build_decomposition
from banque.response import render_strategy_table
from fixtures import table_half

SCALE = 13**9


def closed_form_top_interval(t):
    """Maximin point and lower value on the interval ending at θ = 1/2."""
    s = sqrt_exact((20687 - 1065024 * t * (1 - t)) * (20687 - 1556544 * t * (1 - t)))
    p1 = (-6191 + 932160 * t - 1065024 * t**2 - s) / (32 * (151 - 12928 * t + 8256 * t**2))
    p2 = (139055 - 1197888 * t + 1065024 * t**2 + s) / (32 * (4521 + 3584 * t - 8256 * t**2))
    num = (
        94430296089921
        - 6646323952883456 * t
        - 25262343281817856 * t**2
        + 63817334469402624 * t**3
        - 31908667234701312 * t**4
        - 3 * (980324411 - 4975425984 * t * (1 - t)) * s
    )
    den = 21208998746 * (151 - 12928 * t + 8256 * t**2) * (4521 + 3584 * t - 8256 * t**2)
    return p1, p2, -num / den


@pytest.fixture(scope="module")
def ice_half():
    return solve_ice_lower(F(1, 2))


def test_half_point_and_value(ice_half):
    p = quadratic(F(-319, 224), F(1, 224), 245569)
    assert ice_half.players_product.p1 == p
    assert ice_half.players_product.p2 == p
    assert ice_half.value == 5 * quadratic(-1933207795, 260493, 245569) / (98 * SCALE)
    assert ice_half.verified


def test_half_best_response_is_table(ice_half):
    table = render_strategy_table(ice_half.banker, ice_half.indifferent_sets)
    assert table.cells == table_half()


@pytest.mark.parametrize("t", [F(499, 1000), F(199, 400)])
def test_top_interval_closed_forms(t):
    r = solve_ice_lower(t)
    p1, p2, v = closed_form_top_interval(t)
    assert (r.players_product.p1, r.players_product.p2, r.value) == (p1, p2, v)


def test_closed_form_point_is_not_better_outside_interval():
    t = F(49, 100)
    p1, p2, _ = closed_form_top_interval(t)
    problem, _ = baccara_problem(build_decomposition(t))
    assert problem.value(p1, p2) <= solve_ice_lower(t).value


def test_coincidence_interval():
    t = F(3, 10)
    r = solve_ice_lower(t)
    assert (r.players_product.p1, r.players_product.p2) == (F(9, 11), F(9, 11))
    assert r.value == -16 * (910783169 - 535383252 * t) / 1283144424133
    assert ice_gap(t) == 0


def test_gap_signs():
    assert ice_gap(F(5621, 33696)) == 0
    assert ice_gap(F(1, 10)) > 0
    assert ice_gap(F(1, 2)) > 0


def test_upper_value_is_cce_value():
    assert upper_value(F(1, 2)) == F(-16655514960, 181 * SCALE)


@pytest.mark.parametrize("t", [F(1, 17), F(2, 9), F(9, 20)])
def test_lower_not_above_upper(t):
    assert solve_ice_lower(t).value <= cce_value(t)


def test_random_points_never_beat_maximum():
    t = F(13, 40)
    problem, _ = baccara_problem(build_decomposition(t))
    best = to_float(solve_ice_lower(t).value)
    rng = np.random.default_rng(3)
    vals = problem.value_float(rng.random(20000), rng.random(20000))
    assert vals.max() <= best + 1e-12


def test_bilinear_rectangle_max_on_boundary():
    # On a region where the active piece is fixed E0 is bilinear, hence harmonic
    t = F(1, 2)
    problem, _ = baccara_problem(build_decomposition(t))
    rng = random.Random(4)
    for _ in range(20):
        x0, y0 = F(rng.randint(0, 900), 1000), F(rng.randint(0, 900), 1000)
        h = F(1, 1000)
        g = problem.active_form(x0 + h / 2, y0 + h / 2)
        inside = [g(x0 + h * F(i, 4), y0 + h * F(k, 4)) for i in range(1, 4) for k in range(1, 4)]
        corners = [g(x0 + h * i, y0 + h * k) for i in (0, 1) for k in (0, 1)]
        assert max(inside) <= max(corners)


def test_intersections_are_exact():
    f = BilinearForm(F(-1, 2), F(1), F(0), F(0))  # p1 = 1/2
    g = BilinearForm(F(-1, 4), F(0), F(0), F(1))  # p1 p2 = 1/4
    assert intersect_curves(f, g) == [(F(1, 2), F(1, 2))]
    h = BilinearForm(F(-1, 2), F(0), F(0), F(1))  # p1 p2 = 1/2
    c = BilinearForm(F(0), F(1), F(-1), F(0))  # p1 = p2
    pts = intersect_curves(h, c)
    r = quadratic(0, F(1, 2), 2)
    assert (r, r) in pts


def random_game(rng, n):
    return [[F(rng.randint(-30, 30), rng.randint(1, 6)) for _ in range(n)] for _ in range(4)]


def test_product_maximin_matches_oracle():
    rng = random.Random(99)
    for n in (2, 3, 4, 5, 3, 4, 2, 5, 4, 3):
        M = random_game(rng, n)
        engine = product_maximin(M)
        oracle = maximin_product_check(M)
        assert to_float(engine.value) >= oracle.lower - 1e-12
        assert to_float(engine.value) - oracle.lower < 1e-9
        assert oracle.upper == unconstrained_value(M)
        assert engine.value <= oracle.upper


def test_product_point_game_has_no_gap():
    # SD is dominant, so the unconstrained optimum is the product point (0, 1)
    M = [[0, 1], [3, 2], [1, 0], [-1, 2]]
    assert product_maximin(M).value == unconstrained_value(M) == 2
    check = maximin_product_check(M)
    assert check.upper == 2 and abs(check.lower - 2) < 1e-12
