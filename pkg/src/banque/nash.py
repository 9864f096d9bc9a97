"""Nash equilibria of the three-person game with independent Players.

Candidates for the Players' point are the crossings of two Banker
indifference curves (or of a curve and an edge of the square).  At such a
point Banker may mix only on the sets where he is exactly indifferent.  Each
Player's payoff is linear in his own draw probability, and its slope is
affine in Banker's behavioral draw probabilities r, so the equilibrium
condition on r is a small polytope: the slope must vanish for an interior
p_i and point inward at p_i = 0 or 1.  Its vertices are the extreme
behavioral points; basic solutions over Banker's pure combinations on the
mixing sets are the extreme equilibria.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .ice import EDGES, square_crossings
from .numeric import BilinearForm, polytope_vertices, solve_affine, to_float
from .payoff import (
    BankerStrategy,
    PayoffDecomposition,
    ProductMixture,
    build_decomposition,
    dependent_info_sets,
    fixed_action_strategy,
)
from .results import EquilibriumResult
from .rules import InfoSet, ThetaParam, info_set_index

log = logging.getLogger(__name__)

TIE_TOL = 1e-9
MAX_Q_SETS = 4
_ZERO, _ONE = Fraction(0), Fraction(1)


def _slope1(v, p2):
    """d/dp1 of a Player payoff given by its four vertex values."""
    return (v[2] - v[0]) * (1 - p2) + (v[3] - v[1]) * p2


def _slope2(v, p1):
    return (v[1] - v[0]) * (1 - p1) + (v[3] - v[2]) * p1


def _vadd(a, b):
    return [x + y for x, y in zip(a, b)]


@dataclass
class NashFamily:
    """All Nash equilibria sharing one Players' point."""

    players: ProductMixture
    mixing_sets: list[InfoSet]
    background: BankerStrategy
    value: object
    behavioral_points: list[dict]
    columns: list[tuple[int, ...]] = field(default_factory=list)
    extreme_q: list[tuple] = field(default_factory=list)

    def banker(self, point: dict) -> BankerStrategy:
        return self.background.with_mixing(point)


@dataclass
class NashCheck:
    conditions: dict[str, bool]
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


class NashContext:
    """Per-θ precomputation shared by the search, verifier and reports."""

    def __init__(self, decomp: PayoffDecomposition):
        self.decomp = decomp
        self.dep = dependent_info_sets(decomp)
        idx = info_set_index()
        self.fixed = fixed_action_strategy(decomp)
        self.V1 = decomp.expectation_vertices(self.fixed, "p1")
        self.V2 = decomp.expectation_vertices(self.fixed, "p2")
        self.V0 = decomp.expectation_vertices(self.fixed)
        rows = [idx[s] for s in self.dep]
        self.d1 = [[b - a for a, b in zip(decomp.p1_stand[n], decomp.p1_draw[n])] for n in rows]
        self.d2 = [[b - a for a, b in zip(decomp.p2_stand[n], decomp.p2_draw[n])] for n in rows]
        self.d0 = [decomp.diff_vertex_values[n] for n in rows]
        self.curves = [BilinearForm.from_vertex_values(v) for v in self.d0]
        self.curve_f = np.array([[float(c) for c in (f.a, f.b, f.c, f.d)] for f in self.curves]).reshape(-1, 4)

    def response(self, p1, p2) -> tuple[list[int], list[int]]:
        """Indices of dependent sets where Banker draws, and where he is indifferent."""
        x, y = to_float(p1), to_float(p2)
        approx = self.curve_f @ np.array([1.0, x, y, x * y])
        draw, tie = [], []
        for n, v in enumerate(approx):
            if abs(v) < TIE_TOL:
                e = self.curves[n](p1, p2)
                if e == 0:
                    tie.append(n)
                elif e < 0:
                    draw.append(n)
            elif v < 0:
                draw.append(n)
        return draw, tie

    def vertices_for(self, draw: list[int], part: str):
        base = {"p1": self.V1, "p2": self.V2, "coalition": self.V0}[part]
        delta = {"p1": self.d1, "p2": self.d2, "coalition": self.d0}[part]
        out = list(base)
        for n in draw:
            out = _vadd(out, delta[n])
        return out

    def best_response_payoffs(self, p1, p2):
        """(E1, E2) when Banker best-responds to (p1, p2), ties standing."""
        draw, _ = self.response(p1, p2)
        w = ProductMixture(p1, p2).joint()
        v1 = self.vertices_for(draw, "p1")
        v2 = self.vertices_for(draw, "p2")
        return sum((a * b for a, b in zip(w, v1)), _ZERO), sum((a * b for a, b in zip(w, v2)), _ZERO)

    def payoff_matrices(self, fam: NashFamily) -> tuple[list, list]:
        """Per-Player 4 x 2^k matrices (A, B) against Banker's pure choices on the mixing sets."""
        draw, tie = self.response(fam.players.p1, fam.players.p2)
        cols = fam.columns or list(itertools.product((0, 1), repeat=len(tie)))
        A = [[None] * len(cols) for _ in range(4)]
        B = [[None] * len(cols) for _ in range(4)]
        for c, col in enumerate(cols):
            d = draw + [n for n, a in zip(tie, col) if a]
            for u, (x, y) in enumerate(zip(self.vertices_for(d, "p1"), self.vertices_for(d, "p2"))):
                A[u][c], B[u][c] = x, y
        return A, B

    # ------------------------------------------------------------------

    def _slope_constraints(self, p1, p2, b1, b2, g1, g2):
        """Split β_i = b_i + g_i·x into equality and ≤ rows for the point."""
        eq_rows, eq_rhs, le_rows, le_rhs = [], [], [], []
        for p, b, g in ((p1, b1, g1), (p2, b2, g2)):
            if p == 0:
                le_rows.append(list(g))
                le_rhs.append(-b)
            elif p == 1:
                le_rows.append([-x for x in g])
                le_rhs.append(b)
            else:
                eq_rows.append(list(g))
                eq_rhs.append(-b)
        return eq_rows, eq_rhs, le_rows, le_rhs

    def family_at(self, p1, p2, with_q: bool = True) -> NashFamily | None:
        draw, tie = self.response(p1, p2)
        k = len(tie)
        V1 = self.vertices_for(draw, "p1")
        V2 = self.vertices_for(draw, "p2")
        b1, b2 = _slope1(V1, p2), _slope2(V2, p1)
        g1 = [_slope1(self.d1[n], p2) for n in tie]
        g2 = [_slope2(self.d2[n], p1) for n in tie]
        if not _ranges_admit(p1, p2, b1, b2, g1, g2):
            return None
        eq_rows, eq_rhs, le_rows, le_rhs = self._slope_constraints(p1, p2, b1, b2, g1, g2)
        points = _box_polytope_vertices(eq_rows, eq_rhs, le_rows, le_rhs, k)
        if not points:
            return None
        sets = [self.dep[n] for n in tie]
        background = BankerStrategy(frozenset(self.fixed.draw) | {self.dep[n] for n in draw})
        w = ProductMixture(p1, p2).joint()
        value = sum((a * b for a, b in zip(w, self.vertices_for(draw, "coalition"))), _ZERO)
        fam = NashFamily(
            players=ProductMixture(p1, p2),
            mixing_sets=sets,
            background=background,
            value=value,
            behavioral_points=[dict(zip(sets, pt)) for pt in points],
        )
        if with_q and 0 < k <= MAX_Q_SETS:
            fam.columns, fam.extreme_q = _extreme_q(p1, p2, b1, b2, g1, g2, k, self)
        return fam


def _ranges_admit(p1, p2, b1, b2, g1, g2) -> bool:
    """Necessary condition: each slope can reach its required sign over the box."""
    for p, b, g in ((p1, b1, g1), (p2, b2, g2)):
        lo = b + sum((x for x in g if x < 0), _ZERO)
        hi = b + sum((x for x in g if x > 0), _ZERO)
        if (p == 0 and lo > 0) or (p == 1 and hi < 0) or (0 < p < 1 and not lo <= 0 <= hi):
            return False
    return True


def _box_polytope_vertices(eq_rows, eq_rhs, le_rows, le_rhs, k: int) -> list[tuple]:
    """Vertices of {r in [0,1]^k} cut by at most two extra constraints.

    A vertex has at most as many fractional coordinates as extra
    constraints, so the rest are fixed at 0 or 1 and the remainder is a
    polytope of dimension at most two.
    """
    n_extra = len(eq_rows) + len(le_rows)
    found: list[tuple] = []
    for nf in range(0, min(n_extra, k) + 1):
        for free in itertools.combinations(range(k), nf):
            fixed = [i for i in range(k) if i not in free]
            for bits in itertools.product((_ZERO, _ONE), repeat=len(fixed)):
                def reduce(rows, rhs):
                    out_r, out_b = [], []
                    for r, b in zip(rows, rhs):
                        out_r.append([r[i] for i in free])
                        out_b.append(b - sum((r[i] * v for i, v in zip(fixed, bits)), _ZERO))
                    return out_r, out_b
                er, eb = reduce(eq_rows, eq_rhs)
                lr, lb = reduce(le_rows, le_rhs)
                if nf == 0:
                    ok = all(b == 0 for b in eb) and all(b >= 0 for b in lb)
                    sub = [()] if ok else []
                else:
                    for i in range(nf):
                        e = [_ZERO] * nf
                        e[i] = _ONE
                        lr += [[-x for x in e], e]
                        lb += [_ZERO, _ONE]
                    sub = polytope_vertices(er, eb, lr, lb, nf)
                for x in sub:
                    r = [_ZERO] * k
                    for i, v in zip(fixed, bits):
                        r[i] = v
                    for i, v in zip(free, x):
                        r[i] = v
                    r = tuple(r)
                    if r not in found:
                        found.append(r)
    found.sort()
    return found


def _extreme_q(p1, p2, b1, b2, g1, g2, k, ctx: NashContext):
    """Basic feasible mixtures over Banker's 2^k pure combinations.

    A basic solution has at most as many nonzero weights as tight non-sign
    constraints (the sum plus at most two slope rows), so supports of size
    three or less are exhaustive.
    """
    columns = list(itertools.product((0, 1), repeat=k))
    c1 = [b1 + sum((g for g, a in zip(g1, c) if a), _ZERO) for c in columns]
    c2 = [b2 + sum((g for g, a in zip(g2, c) if a), _ZERO) for c in columns]
    eq_rows, eq_rhs, le_rows, le_rhs = ctx._slope_constraints(
        p1, p2, _ZERO, _ZERO, c1, c2
    )
    eq_rows.append([_ONE] * len(columns))
    eq_rhs.append(_ONE)
    found: list[tuple] = []
    for tight in itertools.chain.from_iterable(
        itertools.combinations(range(len(le_rows)), n) for n in range(len(le_rows) + 1)
    ):
        rows = eq_rows + [le_rows[t] for t in tight]
        rhs = eq_rhs + [le_rhs[t] for t in tight]
        for size in range(1, len(rows) + 1):
            for support in itertools.combinations(range(len(columns)), size):
                sol = solve_affine([[r[c] for c in support] for r in rows], rhs)
                if sol is None or any(x < 0 for x in sol):
                    continue
                q = [_ZERO] * len(columns)
                for c, x in zip(support, sol):
                    q[c] = x
                if any(sum((a * x for a, x in zip(r, q)), _ZERO) > b for r, b in zip(le_rows, le_rhs)):
                    continue
                q = tuple(q)
                if q not in found:
                    found.append(q)
    return columns, found


# --------------------------------------------------------------------------

def find_nash_families(theta) -> list[NashFamily]:
    """Every Players' point admitting a Nash equilibrium (folded θ)."""
    t = ThetaParam.of(theta)
    ctx = NashContext(build_decomposition(t))
    points, _ = square_crossings(list(ctx.curves) + list(EDGES))
    families = []
    for pt in sorted(points, key=lambda p: (to_float(p[0]), to_float(p[1]))):
        fam = ctx.family_at(*pt)
        if fam is not None:
            families.append(fam)
    return families


def verify_nash(theta, players: ProductMixture, banker: BankerStrategy) -> NashCheck:
    """Exact best-response check for all three participants."""
    t = ThetaParam.of(theta)
    if t.swapped:
        players, banker = players.swapped(), banker.mirrored()
    decomp = build_decomposition(t)
    p1, p2 = players.p1, players.p2
    v1 = decomp.expectation_vertices(banker, "p1")
    v2 = decomp.expectation_vertices(banker, "p2")
    conditions, violations = {}, []
    for name, p, slope in (("player1", p1, _slope1(v1, p2)), ("player2", p2, _slope2(v2, p1))):
        if p == 0:
            ok = slope <= 0
        elif p == 1:
            ok = slope >= 0
        else:
            ok = slope == 0
        conditions[f"{name}_best_response"] = ok
        if not ok:
            violations.append(f"{name}: payoff slope {slope} at p={p}")
    w = players.joint()
    bad = []
    for s, diff in zip(decomp.sets, decomp.diff_vertex_values):
        r = banker.draw_probability(s)
        d = sum((a * b for a, b in zip(w, diff) if a != 0), _ZERO)
        if (0 < r < 1 and d != 0) or (r == 1 and d > 0) or (r == 0 and d < 0):
            bad.append(s)
    conditions["banker_best_response"] = not bad
    violations += [f"banker: suboptimal action at {s}" for s in bad]
    return NashCheck(conditions, violations)


def solve_nash(theta) -> list[EquilibriumResult]:
    """One result per extreme behavioral point of every equilibrium family found."""
    t = ThetaParam.of(theta)
    families = find_nash_families(t)
    if not families:
        log.warning("no Nash structure found at theta=%s", t.canonical)
        return []
    out = []
    for fam in families:
        gain = -fam.value
        for n, pt in enumerate(fam.behavioral_points):
            banker = fam.banker(pt)
            check = verify_nash(t.canonical, fam.players, banker)
            note = None
            if len(fam.behavioral_points) > 1:
                note = f"extreme behavioral point {n + 1} of {len(fam.behavioral_points)}"
            if len(families) > 1:
                note = (note + "; " if note else "") + f"{len(families)} distinct Players' points found"
            extras = {
                "mixing_sets": list(fam.mixing_sets),
                "behavioral_points": fam.behavioral_points,
                "q_columns": ["".join("D" if a else "S" for a in c) for c in fam.columns],
                "extreme_q": [list(q) for q in fam.extreme_q],
                "banker_gain": gain,
            }
            res = EquilibriumResult(
                kind="nash",
                theta=t,
                banker=banker,
                value=fam.value,
                indifferent_sets=list(fam.mixing_sets),
                players_product=fam.players,
                certificate=check.conditions,
                multiplicity_note=note,
                extras=extras,
            )
            out.append(res.unfolded())
    return out


# --------------------------------------------------------------------------

@dataclass
class CounterexampleReport:
    theta: Fraction
    p_hat: tuple
    e1_hat: object
    e2_hat: object
    ne1_violations: list[tuple]
    ne2_violations: list[tuple]

    @property
    def ne1_fails(self) -> bool:
        return bool(self.ne1_violations)

    @property
    def ne2_fails(self) -> bool:
        return bool(self.ne2_violations)


def downton_lockwood_counterexample(theta=Fraction(1, 2), p_hat=(Fraction(9, 11), Fraction(9, 11)), grid: int = 101):
    """Test the two best-response inequalities of the flawed algorithm on a grid.

    E^i(p1, p2) uses Banker's best response to (p1, p2) itself (ties stand),
    which is why the inequalities are not Nash conditions.  Every listed
    violation (deviation, E^i there) is an exact strict inequality.
    """
    t = ThetaParam.of(theta)
    ctx = NashContext(build_decomposition(t))
    h1, h2 = p_hat
    e1_hat, e2_hat = ctx.best_response_payoffs(h1, h2)
    ne1, ne2 = [], []
    for n in range(grid):
        x = Fraction(n, grid - 1)
        e1, _ = ctx.best_response_payoffs(x, h2)
        if e1 > e1_hat:
            ne1.append((x, e1))
        _, e2 = ctx.best_response_payoffs(h1, x)
        if e2 > e2_hat:
            ne2.append((x, e2))
    return CounterexampleReport(t.canonical, (h1, h2), e1_hat, e2_hat, ne1, ne2)
