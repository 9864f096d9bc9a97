"""Banker's pointwise best response and strategy-table rendering."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

from .payoff import BankerStrategy, JointMixture, PayoffDecomposition, ProductMixture
from .rules import InfoSet, NATURAL


def _best_response(decomp: PayoffDecomposition, weights) -> tuple[BankerStrategy, list[InfoSet]]:
    draw, indifferent = [], []
    for s, diff in zip(decomp.sets, decomp.diff_vertex_values):
        val = sum((w * d for w, d in zip(weights, diff) if w != 0), Fraction(0))
        if val < 0:
            draw.append(s)
        elif val == 0:
            indifferent.append(s)
    return BankerStrategy(frozenset(draw)), indifferent


def banker_best_response(decomp: PayoffDecomposition, p: JointMixture):
    """Banker's pure best response to a joint mixture.

    Banker draws where drawing gives the coalition strictly less; exact ties
    stand and are returned in the indifferent list.
    """
    return _best_response(decomp, p.as_tuple())


def banker_best_response_product(decomp: PayoffDecomposition, pm: ProductMixture):
    return _best_response(decomp, pm.joint())


# --------------------------------------------------------------------------
# Tables

NO_DRAW = "—"


@dataclass
class StrategyTable:
    """12x12 grid of maximum drawing totals, rows = Player 1's code.

    ``cells[k1][k2]`` is e.g. "3", "5+" (mixes or is indifferent on 6),
    "4++" (on 5 and 6) or "—" (never draws).  Strategies that are not of
    threshold form are written as the explicit list of drawing totals and
    listed in ``irregular``.
    """

    cells: list[list[str]]
    irregular: list[tuple[int, int]] = field(default_factory=list)

    def __getitem__(self, key):
        k1, k2 = key
        return self.cells[k1][k2]

    def is_symmetric(self) -> bool:
        return all(self.cells[a][b] == self.cells[b][a] for a in range(12) for b in range(12))

    def to_text(self) -> str:
        header = "k1\\k2 " + " ".join(f"{k:>4}" for k in range(12))
        lines = [header]
        for k1 in range(12):
            lines.append(f"{k1:>5} " + " ".join(f"{c:>4}" for c in self.cells[k1]))
        return "\n".join(lines)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k1"] + [str(k) for k in range(12)])
        for k1 in range(12):
            w.writerow([str(k1)] + self.cells[k1])
        return buf.getvalue()


def _cell(kinds: list[str]) -> tuple[str, bool]:
    # kinds[j] in {"D", "S", "M"}; M = mixed or indifferent
    t = -1
    while t + 1 < 8 and kinds[t + 1] == "D":
        t += 1
    rest = kinds[t + 1:]
    plus = 0
    while plus < len(rest) and rest[plus] == "M":
        plus += 1
    if all(k == "S" for k in rest[plus:]):
        if t == -1 and plus == 0:
            return NO_DRAW, False
        return (str(t) if t >= 0 else "-1") + "+" * plus, False
    drawing = [str(j) for j, k in enumerate(kinds) if k != "S"]
    return "{" + ",".join(drawing) + "}", True


def render_strategy_table(strategy: BankerStrategy, indifferent=()) -> StrategyTable:
    """Render a Banker strategy; sets in ``indifferent`` are shown like mixed ones."""
    marked = set(strategy.mixing) | set(indifferent)
    cells, irregular = [], []
    for k1 in range(12):
        row = []
        for k2 in range(12):
            if (k1, k2) == (NATURAL, NATURAL):
                row.append("")
                continue
            kinds = []
            for j in range(8):
                s = InfoSet(k1, k2, j)
                if s in marked:
                    kinds.append("M")
                elif s in strategy.draw:
                    kinds.append("D")
                else:
                    kinds.append("S")
            text, odd = _cell(kinds)
            if odd:
                irregular.append((k1, k2))
            row.append(text)
        cells.append(row)
    return StrategyTable(cells, irregular)
