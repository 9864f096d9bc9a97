"""Independent cooperative equilibrium (Players restricted to product mixtures).

The coalition's guaranteed payoff E0(p1, p2) is piecewise bilinear on the
unit square.  Bilinear functions are harmonic, so the maximum lies on a
curve where Banker's best response changes or on the square's edges: either
where two such curves cross, or at a critical point of E0 restricted to one
curve.  Along a curve a + b*p1 + c*p2 + d*p1*p2 = 0 the restriction is
N(p1)/(c + d*p1) with deg N <= 2, whose derivative has a numerator of degree
at most two, so every candidate is exact in Q or a real quadratic field.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .cce import ConcaveObjective, cce_value
from .numeric import BilinearForm, QuadraticNumber, polytope_vertices, solve_quadratic, to_float
from .payoff import PayoffDecomposition, ProductMixture, build_decomposition, dependent_info_sets
from .response import banker_best_response_product
from .results import EquilibriumResult
from .rules import ThetaParam

log = logging.getLogger(__name__)

FLOAT_SLACK = 1e-11
_ZERO, _ONE = Fraction(0), Fraction(1)
EDGES = (
    BilinearForm(_ZERO, _ONE, _ZERO, _ZERO),  # p1 = 0
    BilinearForm(-_ONE, _ONE, _ZERO, _ZERO),  # p1 = 1
    BilinearForm(_ZERO, _ZERO, _ONE, _ZERO),  # p2 = 0
    BilinearForm(-_ONE, _ZERO, _ONE, _ZERO),  # p2 = 1
)
EDGE_LABELS = ("p1=0", "p1=1", "p2=0", "p2=1")


def _in_square(p1, p2) -> bool:
    return 0 <= p1 <= 1 and 0 <= p2 <= 1


def _poly_eval(coeffs, x):
    out = _ZERO
    for c in reversed(coeffs):
        out = out * x + c
    return out


def intersect_curves(f: BilinearForm, g: BilinearForm) -> list[tuple]:
    """Isolated common zeros of two bilinear forms (any location in the plane).

    Writing f = A_f(p1) + C_f(p1)*p2, common zeros satisfy the resultant
    A_f*C_g - A_g*C_f = 0, a polynomial of degree <= 2 in p1.  Shared
    components (resultant identically zero) yield no isolated points.
    """
    r0 = f.a * g.c - g.a * f.c
    r1 = f.a * g.d + f.b * g.c - g.a * f.d - g.b * f.c
    r2 = f.b * g.d - g.b * f.d
    if r0 == 0 and r1 == 0 and r2 == 0:
        return []
    out = []
    for root in solve_quadratic(r2, r1, r0):
        x = root.value
        for h, other in ((f, g), (g, f)):
            cx = h.c + h.d * x
            if cx != 0:
                y = -(h.a + h.b * x) / cx
                if other(x, y) == 0 and h(x, y) == 0:
                    out.append((x, y))
                break
    return out


@dataclass
class BilinearMaxProblem:
    """Maximize a continuous piecewise-bilinear function on the unit square.

    ``curves`` are the loci where the active bilinear piece may change;
    ``value`` evaluates exactly, ``value_float`` on arrays, and
    ``active_form`` returns the bilinear piece valid near a rational point
    (ties broken arbitrarily, which only happens on a curve itself).
    """

    curves: Sequence[BilinearForm]
    value: Callable
    value_float: Callable
    active_form: Callable
    labels: Sequence[str] = ()


@dataclass
class BilinearMaxResult:
    value: object
    points: list[tuple]
    n_intersections: int
    n_curve_points: int
    n_curves: int
    curve_of_point: dict = field(default_factory=dict)


def _rational_between(lo: float, hi: float) -> Fraction:
    mid = Fraction((lo + hi) / 2)
    den = 2
    while True:
        cand = mid.limit_denominator(den)
        if lo < cand < hi:
            return cand
        den *= 4
        if den > 2**64:
            return mid


def _curve_critical_points(curve: BilinearForm, xs: list, active_form) -> list[tuple]:
    """Critical points of the objective restricted to ``curve`` between crossings."""
    if curve.c == 0 and curve.d == 0:
        return []  # vertical line: restriction is linear in p2
    out = []
    fx = sorted({to_float(x) for x in xs})
    for lo, hi in zip(fx, fx[1:]):
        if hi - lo < 1e-15:
            continue
        x = _rational_between(lo, hi)
        cx = curve.c + curve.d * x
        if cx == 0:
            continue
        y = -(curve.a + curve.b * x) / cx
        if not _in_square(x, y):
            continue
        G = active_form(x, y)
        # G restricted: P(x) + Q(x)*p2, p2 = -A(x)/C(x)
        P = (G.a, G.b)
        Q = (G.c, G.d)
        A = (curve.a, curve.b)
        C = (curve.c, curve.d)
        n0 = P[0] * C[0] - Q[0] * A[0]
        n1 = P[0] * C[1] + P[1] * C[0] - Q[0] * A[1] - Q[1] * A[0]
        n2 = P[1] * C[1] - Q[1] * A[1]
        k0 = n1 * C[0] - n0 * C[1]
        k1 = 2 * n2 * C[0]
        k2 = n2 * C[1]
        if k0 == 0 and k1 == 0 and k2 == 0:
            continue
        for root in solve_quadratic(k2, k1, k0):
            r = root.value
            rf = to_float(r)
            if not lo < rf < hi:
                continue
            cr = curve.c + curve.d * r
            if cr == 0:
                continue
            yr = -(curve.a + curve.b * r) / cr
            if _in_square(r, yr):
                out.append((r, yr))
    return out


def square_crossings(curves: Sequence[BilinearForm]):
    """Pairwise isolated intersections inside the closed unit square.

    Returns ``(points, per_curve)``: a dict from each point to the indices of
    the curves through it, and for each curve the coordinates of its
    crossings along its natural parameter (p1, or p2 for vertical lines).
    """
    per_curve: list[list] = [[] for _ in curves]
    points: dict[tuple, set] = {}
    for i, k in itertools.combinations(range(len(curves)), 2):
        for pt in intersect_curves(curves[i], curves[k]):
            if not _in_square(*pt):
                continue
            for n in (i, k):
                per_curve[n].append(pt[1] if _vertical(curves[n]) else pt[0])
            points.setdefault(pt, set()).update((i, k))
    return points, per_curve


def maximize_piecewise_bilinear(problem: BilinearMaxProblem) -> BilinearMaxResult:
    curves = list(problem.curves) + list(EDGES)
    points, crossings = square_crossings(curves)
    pool: dict[tuple, str] = {pt: "intersection" for pt in points}
    n_int = len(points)
    n_curve = 0
    for i, curve in enumerate(curves):
        if _vertical(curve):
            continue
        for pt in _curve_critical_points(curve, crossings[i], problem.active_form):
            n_curve += 1
            pool.setdefault(pt, f"curve {i}")
    pts = list(pool)
    P1 = np.array([to_float(p[0]) for p in pts])
    P2 = np.array([to_float(p[1]) for p in pts])
    vals = problem.value_float(P1, P2)
    top = vals.max()
    best, best_pts = None, []
    for idx in np.nonzero(vals >= top - FLOAT_SLACK)[0]:
        pt = pts[idx]
        v = problem.value(*pt)
        if best is None or v > best:
            best, best_pts = v, [pt]
        elif v == best:
            best_pts.append(pt)
    best_pts.sort(key=lambda p: (to_float(p[0]), to_float(p[1])))
    return BilinearMaxResult(best, best_pts, n_int, n_curve, len(curves), {p: pool[p] for p in best_pts})


def _vertical(curve: BilinearForm) -> bool:
    return curve.c == 0 and curve.d == 0


# --------------------------------------------------------------------------
# The baccara coalition game

def _joint_float(P1, P2):
    return np.column_stack([(1 - P1) * (1 - P2), (1 - P1) * P2, P1 * (1 - P2), P1 * P2])


def _joint(p1, p2):
    return ((1 - p1) * (1 - p2), (1 - p1) * p2, p1 * (1 - p2), p1 * p2)


def baccara_problem(decomp: PayoffDecomposition) -> tuple[BilinearMaxProblem, ConcaveObjective]:
    obj = ConcaveObjective.build(decomp)
    fixed = BilinearForm.from_vertex_values(obj.fixed)
    draws = [BilinearForm.from_vertex_values(v) for v in obj.draw]
    stands = [BilinearForm.from_vertex_values(v) for v in obj.stand]
    curves = [d - s for d, s in zip(draws, stands)]

    def value(p1, p2):
        return obj(_joint(p1, p2))

    def value_float(P1, P2):
        return obj.evaluate_float(_joint_float(P1, P2))

    diff_f = np.array([[float(c) for c in (f.a, f.b, f.c, f.d)] for f in curves]).reshape(-1, 4)
    stand_sum = fixed
    for s in stands:
        stand_sum = stand_sum + s

    def active_form(p1, p2):
        x, y = float(p1), float(p2)
        sign = diff_f @ np.array([1.0, x, y, x * y])
        g = stand_sum
        for i in np.nonzero(sign < 1e-9)[0]:
            if sign[i] > -1e-9 and curves[i](p1, p2) >= 0:
                continue
            g = g + curves[i]
        return g

    labels = [str(s) for s in obj.dependent]
    return BilinearMaxProblem(curves, value, value_float, active_form, labels), obj


def solve_ice_lower(theta) -> EquilibriumResult:
    """Players' maximin product strategy and the lower value of the game.

    The Banker strategy in the result is a best response to the maximin
    point; Banker's minimax strategy is the correlated-equilibrium one.
    """
    t = ThetaParam.of(theta)
    decomp = build_decomposition(t)
    problem, obj = baccara_problem(decomp)
    res = maximize_piecewise_bilinear(problem)
    p1, p2 = res.points[0]
    pm = ProductMixture(p1, p2)
    banker, indiff = banker_best_response_product(decomp, pm)
    attained = sum(
        (w * v for w, v in zip(pm.joint(), decomp.expectation_vertices(banker))), Fraction(0)
    )
    rng = np.random.default_rng(12345)
    probe = problem.value_float(rng.random(4000), rng.random(4000)).max()
    certificate = {
        "intersections_enumerated": True,
        "single_curve_search": True,
        "value_attained": attained == res.value,
        "random_probe_dominated": bool(probe <= to_float(res.value) + 1e-12),
    }
    note = None
    if len(res.points) > 1:
        note = f"maximum attained at {len(res.points)} points; first reported"
    extras = {
        "m": len(obj.dependent),
        "banker_label": "best response to maximin (not Banker's minimax strategy)",
        "located_by": res.curve_of_point[res.points[0]],
        "candidates": {"intersections": res.n_intersections, "curve_points": res.n_curve_points},
        "indifferent_count": len(indiff),
    }
    out = EquilibriumResult(
        kind="ice",
        theta=t,
        banker=banker,
        value=res.value,
        indifferent_sets=indiff,
        players_product=pm,
        certificate=certificate,
        multiplicity_note=note,
        extras=extras,
    )
    return out.unfolded()


def upper_value(theta):
    """Upper value of the product-constrained game = value of the correlated game."""
    return cce_value(theta)


def ice_gap(theta):
    return upper_value(theta) - solve_ice_lower(theta).value


# --------------------------------------------------------------------------
# Small 4 x n games (rows SS, SD, DS, DD for the coalition, columns for Banker)

def _columns(matrix) -> list[BilinearForm]:
    rows = [[Fraction(v) for v in r] for r in matrix]
    if len(rows) != 4 or len({len(r) for r in rows}) != 1 or not rows[0]:
        raise ValueError("expected a 4 x n matrix")
    return [BilinearForm.from_vertex_values(tuple(r[c] for r in rows)) for c in range(len(rows[0]))]


def product_maximin(matrix) -> BilinearMaxResult:
    """Exact max over product mixtures of the column minimum (the lower value)."""
    cols = _columns(matrix)
    coef = np.array([[float(c) for c in f.coefficients()] for f in cols])
    curves = []
    for f, g in itertools.combinations(cols, 2):
        h = f - g
        if any(c != 0 for c in h.coefficients()) and h not in curves:
            curves.append(h)

    def value(p1, p2):
        return min(f(p1, p2) for f in cols)

    def value_float(P1, P2):
        basis = np.stack([np.ones_like(P1), P1, P2, P1 * P2])
        return (coef @ basis).min(axis=0)

    def active_form(p1, p2):
        return min(cols, key=lambda f: f(p1, p2))

    return maximize_piecewise_bilinear(BilinearMaxProblem(curves, value, value_float, active_form))


def unconstrained_value(matrix):
    """Value of the 4 x n zero-sum game with unrestricted coalition mixtures."""
    _columns(matrix)
    rows = [[Fraction(v) for v in r] for r in matrix]
    n = len(rows[0])
    # variables (x_SS, x_SD, x_DS, x_DD, v); maximize v
    le_rows = [[-int(i == u) for i in range(4)] + [0] for u in range(4)]
    le_rows += [[-rows[u][c] for u in range(4)] + [1] for c in range(n)]
    verts = polytope_vertices([[1, 1, 1, 1, 0]], [1], le_rows, [0] * (4 + n), 5)
    return max(x[4] for x in verts)


@dataclass
class MaximinCheck:
    lower: float
    upper: Fraction
    lower_witness: tuple
    banker_witness: tuple


def _slice_max(M: np.ndarray, x: float) -> tuple[float, float]:
    """max over p2 of the column minimum at p1 = x (lines in p2, so an exact envelope)."""
    alpha = (1 - x) * M[0] + x * M[2]
    beta = (1 - x) * (M[1] - M[0]) + x * (M[3] - M[2])
    cand = [0.0, 1.0]
    for i, k in itertools.combinations(range(len(alpha)), 2):
        if beta[i] != beta[k]:
            y = (alpha[k] - alpha[i]) / (beta[i] - beta[k])
            if 0.0 < y < 1.0:
                cand.append(y)
    ys = np.array(cand)
    vals = (alpha[:, None] + beta[:, None] * ys[None, :]).min(axis=0)
    n = int(np.argmax(vals))
    return float(vals[n]), float(ys[n])


def maximin_product_check(matrix, grid: int = 2001, zoom: int = 50, starts: int = 10) -> MaximinCheck:
    """Brute-force oracle for the lower and upper values of the product game.

    For fixed p1 every column is linear in p2, so the inner maximum of the
    column minimum is found exactly among line crossings.  The outer maximum
    over p1 is a grid search refined around the ``starts`` best cells, which
    approximates the lower value from below.  The upper value
    min_y max_(p1,p2) is computed exactly: for fixed y the inner maximum of a
    bilinear function is at a corner, and the outer minimum is at a vertex of
    {(y, w) : M y <= w}.
    """
    rows = [[Fraction(v) for v in r] for r in matrix]
    n = len(rows[0])
    M = np.array([[float(v) for v in r] for r in rows])

    xs = np.linspace(0.0, 1.0, grid)
    coarse = np.array([_slice_max(M, x)[0] for x in xs])
    best, at = -np.inf, (0.0, 0.0)
    for i in np.argsort(coarse)[::-1][:starts]:
        x, half = xs[i], 1.0 / (grid - 1)
        v, y = _slice_max(M, x)
        for _ in range(zoom):
            for cx in np.linspace(max(0.0, x - half), min(1.0, x + half), 9):
                cv, cy = _slice_max(M, cx)
                if cv > v:
                    x, y, v = cx, cy, cv
            half *= 0.5
        if v > best:
            best, at = v, (x, y)

    # variables (y_1..y_n, w); minimize w subject to row payoffs <= w
    le_rows = [[-int(i == c) for i in range(n)] + [0] for c in range(n)]
    le_rows += [list(r) + [-1] for r in rows]
    verts = polytope_vertices([[1] * n + [0]], [1], le_rows, [0] * (n + 4), n + 1)

    def inner(y):
        return max(sum(w * r[c] for c, w in enumerate(y)) for r in rows)

    y_best = min((v[:n] for v in verts), key=inner)
    return MaximinCheck(float(best), inner(y_best), (float(at[0]), float(at[1])), tuple(y_best))
