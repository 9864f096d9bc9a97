"""Exact payoff decomposition of the coalition-vs-Banker game.

Every entry of the payoff array splits into a part that does not depend on
Banker's choices (some hand has a natural) plus, for each Banker information
set, the contribution made when Banker draws there or when he stands there.
Each contribution is ``theta*X + (1-theta)*Y`` where ``X`` is Player 1's
result per unit bet and ``Y`` Player 2's, both θ-free integers over 13**9.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .numeric import BilinearForm, LinearForm3
from .rules import (
    CARD_WEIGHT,
    NATURAL,
    Q_WEIGHT,
    STAND,
    InfoSet,
    ThetaParam,
    enumerate_info_sets,
    info_set_index,
)

SCALE = 13**9
DRAW, STAND_ACTION = 1, 0
# Pure joint strategies in the order SS, SD, DS, DD (p00, p01, p10, p11).
PURE = ((0, 0), (0, 1), (1, 0), (1, 1))


def _sgn(x: int) -> int:
    return (x > 0) - (x < 0)


def _player_states(k: int, u: int) -> list[tuple[int, int | None]]:
    """(weight, final total) pairs for a Player with code ``k``; None = natural.

    Weights are on the common scale 169*13.
    """
    if k == NATURAL:
        return [(Q_WEIGHT[i] * 13, None) for i in (8, 9)]
    if k == STAND:
        return [(Q_WEIGHT[i] * 13, i) for i in range(5 + u, 8)]
    return [(Q_WEIGHT[i] * CARD_WEIGHT[k], (i + k) % 10) for i in range(0, 5 + u)]


def _banker_outcomes(j: int, draw: bool) -> list[tuple[int, int]]:
    """(weight over 13, final total) pairs for Banker's hand."""
    if draw:
        return [(CARD_WEIGHT[l], (j + l) % 10) for l in range(10)]
    return [(13, j)]


def _score(states, banker_total: int) -> int:
    return sum(w * (1 if t is None else _sgn(t - banker_total)) for w, t in states)


@lru_cache(maxsize=None)
def raw_tables() -> tuple[tuple[int, int], np.ndarray, np.ndarray]:
    """θ-free integer tables.

    Returns ``(base, X, Y)``: ``base = (X0, Y0)`` for the natural cases, and
    ``X``, ``Y`` of shape (1144, 2, 4) indexed by (set, action, pure joint
    strategy) with action 0 = stand, 1 = draw.  All values are over 13**9.
    """
    sets = enumerate_info_sets()
    X = np.zeros((len(sets), 2, 4), dtype=object)
    Y = np.zeros((len(sets), 2, 4), dtype=object)
    for n, (k1, k2, j) in enumerate(sets):
        for ui, (u1, u2) in enumerate(PURE):
            s1 = _player_states(k1, u1)
            s2 = _player_states(k2, u2)
            w1 = sum(w for w, _ in s1)
            w2 = sum(w for w, _ in s2)
            for action in (0, 1):
                x = y = 0
                for wb, b in _banker_outcomes(j, action == DRAW):
                    x += wb * _score(s1, b)
                    y += wb * _score(s2, b)
                X[n, action, ui] = Q_WEIGHT[j] * x * w2
                Y[n, action, ui] = Q_WEIGHT[j] * y * w1
    x0 = y0 = 0
    for i1 in range(10):
        for i2 in range(10):
            for j in range(10):
                if j >= 8 or (i1 >= 8 and i2 >= 8):
                    w = Q_WEIGHT[i1] * Q_WEIGHT[i2] * Q_WEIGHT[j] * 13**3
                    x0 += w * _sgn(i1 - j)
                    y0 += w * _sgn(i2 - j)
    return (x0, y0), X, Y


def _mix(theta, x, y) -> Fraction:
    return (theta * x + (1 - theta) * y) / SCALE


@dataclass(frozen=True)
class JointMixture:
    """Correlated mixture over SS, SD, DS, DD (stand/draw on 5)."""

    p00: Fraction
    p01: Fraction
    p10: Fraction
    p11: Fraction

    def __post_init__(self):
        vals = self.as_tuple()
        if any(v < 0 for v in vals) or sum(vals) != 1:
            raise ValueError(f"not a probability vector: {vals}")

    @classmethod
    def of(cls, p00, p01, p10, p11=None) -> "JointMixture":
        p00, p01, p10 = Fraction(p00), Fraction(p01), Fraction(p10)
        if p11 is None:
            p11 = 1 - p00 - p01 - p10
        return cls(p00, p01, p10, Fraction(p11))

    @classmethod
    def vertex(cls, u1: int, u2: int) -> "JointMixture":
        vals = [Fraction(0)] * 4
        vals[2 * u1 + u2] = Fraction(1)
        return cls(*vals)

    def as_tuple(self) -> tuple:
        return (self.p00, self.p01, self.p10, self.p11)


@dataclass(frozen=True)
class ProductMixture:
    """Independent draw-on-5 probabilities of the two Players."""

    p1: object
    p2: object

    def __post_init__(self):
        if not (0 <= self.p1 <= 1 and 0 <= self.p2 <= 1):
            raise ValueError(f"product mixture outside the unit square: {self.p1}, {self.p2}")

    def joint(self) -> tuple:
        p1, p2 = self.p1, self.p2
        return ((1 - p1) * (1 - p2), (1 - p1) * p2, p1 * (1 - p2), p1 * p2)

    def as_joint(self) -> JointMixture:
        return JointMixture(*self.joint())

    def swapped(self) -> "ProductMixture":
        return ProductMixture(self.p2, self.p1)


@dataclass(frozen=True)
class BankerStrategy:
    """Banker's pure draw/stand choice per set plus optional mixing.

    ``draw`` is the set of information sets where Banker draws for sure;
    ``mixing`` maps the mixed sets to their draw probability.  A mixed set
    never appears in ``draw``.
    """

    draw: frozenset
    mixing: Mapping[InfoSet, object] = field(default_factory=dict)

    def __post_init__(self):
        for s, r in self.mixing.items():
            if not 0 <= r <= 1:
                raise ValueError(f"mixing probability out of range at {s}: {r}")
            if s in self.draw:
                raise ValueError(f"{s} is both mixed and pure draw")

    def draw_probability(self, s: InfoSet):
        if s in self.mixing:
            return self.mixing[s]
        return Fraction(1) if s in self.draw else Fraction(0)

    def with_mixing(self, mixing: Mapping[InfoSet, object]) -> "BankerStrategy":
        draw = frozenset(s for s in self.draw if s not in mixing)
        return BankerStrategy(draw, dict(mixing))

    def with_pure(self, s: InfoSet, draw: bool) -> "BankerStrategy":
        mixing = {k: v for k, v in self.mixing.items() if k != s}
        d = set(self.draw)
        (d.add if draw else d.discard)(s)
        return BankerStrategy(frozenset(d), mixing)

    def mirrored(self) -> "BankerStrategy":
        return BankerStrategy(
            frozenset(s.mirror() for s in self.draw),
            {s.mirror(): r for s, r in self.mixing.items()},
        )

    def probability_vector(self) -> list:
        return [self.draw_probability(s) for s in enumerate_info_sets()]

    @classmethod
    def all_stand(cls) -> "BankerStrategy":
        return cls(frozenset())


@dataclass
class PayoffDecomposition:
    """Per-θ exact payoff pieces.

    ``stand_values[n]`` / ``draw_values[n]`` hold the coalition payoff
    contribution of set ``n`` at the pure joint strategies SS, SD, DS, DD;
    ``p1_*``/``p2_*`` are the same pieces split by Player (per unit bet).
    """

    theta: ThetaParam
    base: Fraction
    base_p1: Fraction
    base_p2: Fraction
    stand_values: list
    draw_values: list
    p1_stand: list
    p1_draw: list
    p2_stand: list
    p2_draw: list

    @property
    def sets(self) -> tuple[InfoSet, ...]:
        return enumerate_info_sets()

    def values(self, s: InfoSet, draw: bool) -> tuple:
        n = info_set_index()[s]
        return self.draw_values[n] if draw else self.stand_values[n]

    def linear_forms(self, s: InfoSet) -> tuple[LinearForm3, LinearForm3]:
        """(draw, stand) contributions as forms in (p00, p01, p10)."""
        n = info_set_index()[s]
        return (
            LinearForm3.from_vertex_values(self.draw_values[n]),
            LinearForm3.from_vertex_values(self.stand_values[n]),
        )

    def bilinear_forms(self, s: InfoSet) -> tuple[BilinearForm, BilinearForm]:
        n = info_set_index()[s]
        return (
            BilinearForm.from_vertex_values(self.draw_values[n]),
            BilinearForm.from_vertex_values(self.stand_values[n]),
        )

    def base_form(self) -> LinearForm3:
        return LinearForm3(self.base, Fraction(0), Fraction(0), Fraction(0))

    @cached_property
    def diff_vertex_values(self) -> list:
        """draw - stand at SS, SD, DS, DD for every set."""
        return [
            tuple(d - s for d, s in zip(dv, sv))
            for dv, sv in zip(self.draw_values, self.stand_values)
        ]

    @cached_property
    def float_arrays(self) -> tuple[np.ndarray, np.ndarray, float]:
        """(stand, draw, base) as float arrays of shape (1144, 4)."""
        st = np.array([[float(v) for v in row] for row in self.stand_values])
        dr = np.array([[float(v) for v in row] for row in self.draw_values])
        return st, dr, float(self.base)

    def pure_payoff(self, u1: int, u2: int, banker: BankerStrategy):
        """a_{u1,u2,T}(θ) for Banker's (possibly behavioral) strategy."""
        return self.expectation_vertices(banker)[2 * u1 + u2]

    def expectation_vertices(self, banker: BankerStrategy, part: str = "coalition") -> list:
        """Expected payoff at each pure joint strategy against ``banker``."""
        if part == "coalition":
            base, st, dr = self.base, self.stand_values, self.draw_values
        elif part == "p1":
            base, st, dr = self.base_p1, self.p1_stand, self.p1_draw
        elif part == "p2":
            base, st, dr = self.base_p2, self.p2_stand, self.p2_draw
        else:
            raise ValueError(part)
        tot = [base] * 4
        for n, s in enumerate(self.sets):
            r = banker.draw_probability(s)
            if r == 0:
                row = st[n]
            elif r == 1:
                row = dr[n]
            else:
                row = [a + r * (b - a) for a, b in zip(st[n], dr[n])]
            tot = [t + v for t, v in zip(tot, row)]
        return tot

    def to_json(self) -> dict:
        """Per-set coefficient arrays for cross-implementation diffing."""
        out = {
            "theta": str(self.theta.canonical),
            "scale": "exact rationals",
            "order": ["SS", "SD", "DS", "DD"],
            "base": str(self.base),
            "sets": {},
        }
        for n, s in enumerate(self.sets):
            out["sets"][str(s)] = {
                "draw": [str(v) for v in self.draw_values[n]],
                "stand": [str(v) for v in self.stand_values[n]],
                "draw_linear": [str(c) for c in _lf(self.draw_values[n])],
                "stand_linear": [str(c) for c in _lf(self.stand_values[n])],
                "draw_bilinear": [str(c) for c in BilinearForm.from_vertex_values(self.draw_values[n]).coefficients()],
                "stand_bilinear": [str(c) for c in BilinearForm.from_vertex_values(self.stand_values[n]).coefficients()],
            }
        return out


def _lf(v) -> tuple:
    f = LinearForm3.from_vertex_values(v)
    return (f.a, f.b, f.c, f.d)


@lru_cache(maxsize=64)
def _build(theta: Fraction) -> tuple:
    (x0, y0), X, Y = raw_tables()
    n = X.shape[0]
    one = Fraction(1)
    p1 = [[[Fraction(X[i, a, u], SCALE) for u in range(4)] for a in (0, 1)] for i in range(n)]
    p2 = [[[Fraction(Y[i, a, u], SCALE) for u in range(4)] for a in (0, 1)] for i in range(n)]
    coal = [
        [tuple(theta * p1[i][a][u] + (one - theta) * p2[i][a][u] for u in range(4)) for a in (0, 1)]
        for i in range(n)
    ]
    base = _mix(theta, x0, y0)
    return (
        base,
        Fraction(x0, SCALE),
        Fraction(y0, SCALE),
        [c[0] for c in coal],
        [c[1] for c in coal],
        [tuple(r[0]) for r in p1],
        [tuple(r[1]) for r in p1],
        [tuple(r[0]) for r in p2],
        [tuple(r[1]) for r in p2],
    )


def build_decomposition(theta) -> PayoffDecomposition:
    """Exact decomposition at the canonical (folded) θ."""
    t = ThetaParam.of(theta)
    return PayoffDecomposition(t, *_build(t.canonical))


def raw_payoff(u1: int, u2: int, draw_sets: Iterable[InfoSet], theta) -> Fraction:
    """a_{u1,u2,T}(θ) for any θ in [0, 1], θ not folded (θ=1, θ=0 allowed)."""
    theta = Fraction(theta)
    (x0, y0), X, Y = raw_tables()
    T = set(draw_sets)
    ui = 2 * u1 + u2
    x, y = x0, y0
    for n, s in enumerate(enumerate_info_sets()):
        a = 1 if s in T else 0
        x += X[n, a, ui]
        y += Y[n, a, ui]
    return _mix(theta, x, y)


def expectation_joint(decomp: PayoffDecomposition, p: JointMixture, banker: BankerStrategy):
    """Coalition expectation per unit total stake (Banker receives the negative)."""
    vals = decomp.expectation_vertices(banker)
    return sum((pi * v for pi, v in zip(p.as_tuple(), vals)), Fraction(0))


def per_player_expectations(decomp: PayoffDecomposition, pm: ProductMixture, banker: BankerStrategy):
    """(E1, E2): each Player's expectation per unit bet by that Player."""
    w = pm.joint()
    e1 = sum((a * b for a, b in zip(w, decomp.expectation_vertices(banker, "p1"))), Fraction(0))
    e2 = sum((a * b for a, b in zip(w, decomp.expectation_vertices(banker, "p2"))), Fraction(0))
    return e1, e2


def _classify(diff: Sequence) -> str:
    # A zero at one vertex and a strict sign elsewhere still counts as dependent.
    signs = {(v > 0) - (v < 0) for v in diff}
    if len(signs) > 1:
        return "dependent"
    if signs == {0}:
        return "null"
    return "draw" if signs == {-1} else "stand"


def dependent_info_sets(decomp: PayoffDecomposition) -> list[InfoSet]:
    """Sets where Banker's better action depends on the Players' mixture."""
    return [s for s, d in zip(decomp.sets, decomp.diff_vertex_values) if _classify(d) == "dependent"]


def null_info_sets(decomp: PayoffDecomposition) -> list[InfoSet]:
    """Sets where drawing and standing are worth exactly the same everywhere."""
    return [s for s, d in zip(decomp.sets, decomp.diff_vertex_values) if _classify(d) == "null"]


def fixed_action_strategy(decomp: PayoffDecomposition) -> BankerStrategy:
    """Banker's optimal action on every set that does not depend on the mixture.

    Dependent sets are left at Stand; callers overwrite them.
    """
    draw = frozenset(
        s for s, d in zip(decomp.sets, decomp.diff_vertex_values) if _classify(d) == "draw"
    )
    return BankerStrategy(draw)
