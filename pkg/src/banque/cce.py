"""Correlated cooperative equilibrium: Players may correlate their draws.

The coalition's guaranteed payoff E(p) = min over Banker's responses is a
concave piecewise-linear function on the joint simplex.  Its maximum sits at
a point where three of the planes {draw_s(p) = stand_s(p)} and the four
simplex facets meet, so every such triple is tried.  Floats rank the
candidates; the winners are recomputed exactly and the final answer carries
an exact saddle-point certificate.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .numeric import LinearForm3, solve_affine, solve_linear_system
from .payoff import (
    PURE,
    BankerStrategy,
    JointMixture,
    PayoffDecomposition,
    build_decomposition,
    dependent_info_sets,
)
from .response import banker_best_response
from .results import EquilibriumResult, SolverError
from .rules import InfoSet, ThetaParam, info_set_index

log = logging.getLogger(__name__)

FLOAT_SLACK = 1e-11
FEAS_TOL = 1e-9
MAX_KERNEL_SETS = 3
MAX_SUPPORT = 4


@dataclass
class ConcaveObjective:
    """E(p) = fixed(p) + sum over dependent sets of min(draw_s(p), stand_s(p)).

    All forms are stored by their values at the pure strategies SS, SD, DS, DD.
    """

    decomp: PayoffDecomposition
    dependent: list[InfoSet]
    fixed: tuple
    draw: list
    stand: list

    @classmethod
    def build(cls, decomp: PayoffDecomposition) -> "ConcaveObjective":
        dep = dependent_info_sets(decomp)
        dep_idx = {info_set_index()[s] for s in dep}
        fixed = [decomp.base] * 4
        for n, (dv, sv) in enumerate(zip(decomp.draw_values, decomp.stand_values)):
            if n in dep_idx:
                continue
            row = dv if sum(dv) < sum(sv) else sv
            fixed = [f + v for f, v in zip(fixed, row)]
        idx = [info_set_index()[s] for s in dep]
        return cls(
            decomp,
            dep,
            tuple(fixed),
            [decomp.draw_values[n] for n in idx],
            [decomp.stand_values[n] for n in idx],
        )

    def __call__(self, p) -> Fraction:
        """Exact E at a joint vector (p00, p01, p10, p11)."""
        total = sum((a * b for a, b in zip(p, self.fixed)), Fraction(0))
        for dv, sv in zip(self.draw, self.stand):
            d = sum((a * b for a, b in zip(p, dv) if a), Fraction(0))
            s = sum((a * b for a, b in zip(p, sv) if a), Fraction(0))
            total += d if d < s else s
        return total

    def float_arrays(self):
        f = np.array([float(v) for v in self.fixed])
        d = np.array([[float(v) for v in row] for row in self.draw])
        s = np.array([[float(v) for v in row] for row in self.stand])
        return f, d, s

    def evaluate_float(self, P: np.ndarray) -> np.ndarray:
        """Vectorized E over rows of an (N, 4) array of joint vectors."""
        f, d, s = self.float_arrays()
        return P @ f + np.minimum(P @ d.T, P @ s.T).sum(axis=1)

    def planes(self) -> list[tuple[tuple, Fraction]]:
        """Indifference planes then the four facets, as (coefficients, rhs)."""
        out = []
        for dv, sv in zip(self.draw, self.stand):
            f = LinearForm3.from_vertex_values([a - b for a, b in zip(dv, sv)])
            out.append(((f.b, f.c, f.d), -f.a))
        one, zero = Fraction(1), Fraction(0)
        out.append(((one, zero, zero), zero))
        out.append(((zero, one, zero), zero))
        out.append(((zero, zero, one), zero))
        out.append(((one, one, one), one))
        return out


def _joint(x) -> tuple:
    return (x[0], x[1], x[2], 1 - x[0] - x[1] - x[2])


def _candidates_float(obj: ConcaveObjective):
    planes = obj.planes()
    M = np.array([[float(c) for c in cf] for cf, _ in planes])
    R = np.array([float(r) for _, r in planes])
    combos = np.array(list(itertools.combinations(range(len(planes)), 3)), dtype=np.int64)
    A = M[combos]
    b = R[combos]
    det = np.linalg.det(A)
    norms = np.linalg.norm(A, axis=2).prod(axis=1)
    good = np.abs(det) > 1e-9 * norms
    shaky = combos[~good]
    sol = np.linalg.solve(A[good], b[good][..., None])[..., 0]
    P = np.column_stack([sol, 1 - sol.sum(axis=1)])
    feas = (P >= -FEAS_TOL).all(axis=1)
    return planes, combos[good][feas], P[feas], shaky


def _exact_point(planes, combo):
    rows = [planes[i][0] for i in combo]
    rhs = [planes[i][1] for i in combo]
    x = solve_linear_system(rows, rhs)
    if x is None:
        return None
    p = _joint(x)
    if any(v < 0 for v in p):
        return None
    return p


def maximize_concave(obj: ConcaveObjective, exhaustive_exact: bool = False):
    """Return (value, optimal points) of E over the simplex, exactly.

    With ``exhaustive_exact`` every triple is solved in rational arithmetic;
    otherwise floats pick the near-optimal triples and only those (plus the
    numerically shaky ones) are redone exactly.
    """
    if exhaustive_exact:
        planes = obj.planes()
        todo = list(itertools.combinations(range(len(planes)), 3))
    else:
        planes, combos, P, shaky = _candidates_float(obj)
        vals = obj.evaluate_float(P)
        top = vals.max() if len(vals) else -np.inf
        todo = [tuple(c) for c in combos[vals >= top - FLOAT_SLACK]]
        todo += [tuple(c) for c in shaky]
    best, points = None, set()
    for combo in todo:
        p = _exact_point(planes, combo)
        if p is None:
            continue
        v = obj(p)
        if best is None or v > best:
            best, points = v, {p}
        elif v == best:
            points.add(p)
    if best is None:
        raise SolverError("no feasible candidate point")
    return best, sorted(points)


# --------------------------------------------------------------------------
# Kernel

@dataclass
class KernelSolution:
    sets: list[InfoSet]
    columns: list[tuple[int, ...]]
    matrix: list[list[Fraction]]
    extreme_q: list[tuple]
    behavioral_points: list[dict]


def kernel_matrix(decomp: PayoffDecomposition, background: BankerStrategy, sets):
    """4 x 2^k payoff matrix over draw(1)/stand(0) combinations on ``sets``."""
    columns = list(itertools.product((0, 1), repeat=len(sets)))
    cols = []
    for c in columns:
        b = background
        for s, act in zip(sets, c):
            b = b.with_pure(s, bool(act))
        cols.append(decomp.expectation_vertices(b))
    matrix = [[cols[k][u] for k in range(len(columns))] for u in range(4)]
    return columns, matrix


def kernel_solve(
    decomp: PayoffDecomposition,
    p_opt,
    indifferent_sets,
    value=None,
    background: BankerStrategy | None = None,
) -> KernelSolution:
    """Banker's equalizing mixtures on the sets where he is indifferent.

    Enumerates supports (up to four columns) of the kernel game, keeps the
    nonnegative solutions that give every active Player row exactly the value
    and every inactive row at most the value, and aggregates each to
    per-set draw probabilities.
    """
    p = p_opt.as_tuple() if isinstance(p_opt, JointMixture) else tuple(p_opt)
    sets = sorted(indifferent_sets)
    if not 1 <= len(sets) <= MAX_KERNEL_SETS:
        raise SolverError(f"kernel needs 1-{MAX_KERNEL_SETS} indifferent sets, got {len(sets)}")
    if background is None:
        background, _ = banker_best_response(decomp, JointMixture(*p))
    if value is None:
        value = sum((a * b for a, b in zip(p, decomp.expectation_vertices(background))), Fraction(0))
    columns, A = kernel_matrix(decomp, background, sets)
    active = [u for u in range(4) if p[u] > 0]
    inactive = [u for u in range(4) if p[u] == 0]
    ncol = len(columns)
    found = []
    for size in range(1, min(MAX_SUPPORT, ncol) + 1):
        for support in itertools.combinations(range(ncol), size):
            rows = [[A[u][c] for c in support] for u in active] + [[Fraction(1)] * size]
            rhs = [value] * len(active) + [Fraction(1)]
            sol = solve_affine(rows, rhs)
            if sol is None or any(x < 0 for x in sol):
                continue
            q = [Fraction(0)] * ncol
            for c, x in zip(support, sol):
                q[c] = x
            if any(sum(A[u][c] * q[c] for c in range(ncol)) > value for u in inactive):
                continue
            q = tuple(q)
            if q not in found:
                found.append(q)
    if not found:
        raise SolverError(f"kernel on {[str(s) for s in sets]} has no feasible mixture")
    points = []
    for q in found:
        pt = {s: sum((q[k] for k, c in enumerate(columns) if c[i]), Fraction(0)) for i, s in enumerate(sets)}
        if pt not in points:
            points.append(pt)
    return KernelSolution(sets, columns, A, found, points)


# --------------------------------------------------------------------------

def saddle_certificate(decomp, p: tuple, banker: BankerStrategy, value) -> dict[str, bool]:
    vertex = decomp.expectation_vertices(banker)
    attained = sum((a * b for a, b in zip(p, vertex)), Fraction(0))
    br, _ = banker_best_response(decomp, JointMixture(*p))
    br_value = sum((a * b for a, b in zip(p, decomp.expectation_vertices(br))), Fraction(0))
    return {
        "players_feasible": all(v >= 0 for v in p) and sum(p) == 1,
        "value_attained": attained == value,
        "banker_best_response": br_value == value,
        "no_profitable_player_row": all(v <= value for v in vertex),
    }


def cce_value(theta, exhaustive_exact: bool = False) -> Fraction:
    """Value of the correlated game (coalition's view), without the kernel."""
    decomp = build_decomposition(theta)
    v, _ = maximize_concave(ConcaveObjective.build(decomp), exhaustive_exact)
    return v


def solve_cce(theta, exhaustive_exact: bool = False) -> EquilibriumResult:
    t = ThetaParam.of(theta)
    decomp = build_decomposition(t)
    obj = ConcaveObjective.build(decomp)
    value, points = maximize_concave(obj, exhaustive_exact)
    p = points[0]
    note = None
    if len(points) > 1:
        note = f"maximum attained at {len(points)} candidate points; lexicographically smallest reported"
    background, indiff = banker_best_response(decomp, JointMixture(*p))
    extras = {"m": len(obj.dependent)}
    if indiff:
        kern = kernel_solve(decomp, p, indiff, value, background)
        banker = background.with_mixing(kern.behavioral_points[0])
        extras["kernel_columns"] = ["".join("D" if a else "S" for a in c) for c in kern.columns]
        extras["kernel_q"] = [list(q) for q in kern.extreme_q]
        extras["behavioral_points"] = kern.behavioral_points
        if len(kern.behavioral_points) > 1:
            note = (note + "; " if note else "") + "Banker behavioral strategy not unique"
    else:
        banker = background
    cert = saddle_certificate(decomp, p, banker, value)
    if not all(cert.values()) and not exhaustive_exact:
        log.warning("float-ranked search failed certification at theta=%s; redoing exactly", t.canonical)
        return solve_cce(theta, exhaustive_exact=True)
    res = EquilibriumResult(
        kind="cce",
        theta=t,
        banker=banker,
        value=value,
        indifferent_sets=indiff,
        players_joint=JointMixture(*p),
        certificate=cert,
        multiplicity_note=note,
        extras=extras,
    )
    return res.unfolded()
