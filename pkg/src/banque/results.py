"""Equilibrium result container and its JSON rendering."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any

from .numeric import format_decimal, format_exact, is_exact, parse_exact
from .payoff import BankerStrategy, JointMixture, ProductMixture
from .rules import InfoSet, ThetaParam


class SolverError(RuntimeError):
    """A solver could not produce a verified answer."""


@dataclass
class EquilibriumResult:
    kind: str
    theta: ThetaParam
    banker: BankerStrategy
    value: Any
    indifferent_sets: list[InfoSet]
    players_joint: JointMixture | None = None
    players_product: ProductMixture | None = None
    certificate: dict[str, bool] = field(default_factory=dict)
    multiplicity_note: str | None = None
    extras: dict[str, Any] = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return bool(self.certificate) and all(self.certificate.values())

    def unfolded(self) -> "EquilibriumResult":
        """Map a result computed at the folded θ back to the caller's θ."""
        if not self.theta.swapped:
            return self
        joint = None
        if self.players_joint is not None:
            j = self.players_joint
            joint = JointMixture(j.p00, j.p10, j.p01, j.p11)
        prod = self.players_product.swapped() if self.players_product is not None else None
        extras = dict(self.extras)
        extras["notice"] = (
            f"theta={self.theta.value} > 1/2: solved at {self.theta.canonical} "
            "with Player 1 and Player 2 exchanged"
        )
        if "behavioral_points" in extras:
            extras["behavioral_points"] = [
                {s.mirror(): r for s, r in pt.items()} for pt in extras["behavioral_points"]
            ]
        return replace(
            self,
            banker=self.banker.mirrored(),
            indifferent_sets=sorted(s.mirror() for s in self.indifferent_sets),
            players_joint=joint,
            players_product=prod,
            extras=extras,
        )


def exact_json(x, digits: int = 15) -> dict:
    return {"exact": format_exact(x), "decimal": format_decimal(x, digits)}


def _encode(obj, digits):
    if is_exact(obj):
        return exact_json(obj, digits)
    if isinstance(obj, InfoSet):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _encode(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v, digits) for v in obj]
    return obj


def result_to_json(res: EquilibriumResult, digits: int = 15) -> dict:
    out: dict[str, Any] = {
        "kind": res.kind,
        "theta": exact_json(res.theta.value, digits),
        "theta_solved": exact_json(res.theta.canonical, digits),
        "swapped": res.theta.swapped,
        "value": exact_json(res.value, digits),
        "indifferent_sets": [str(s) for s in res.indifferent_sets],
        "banker_mixing": {str(s): exact_json(r, digits) for s, r in sorted(res.banker.mixing.items())},
        "banker_draw_sets": sorted(str(s) for s in res.banker.draw),
        "certificate": dict(res.certificate),
        "multiplicity_note": res.multiplicity_note,
    }
    if res.players_joint is not None:
        out["players_joint"] = [exact_json(v, digits) for v in res.players_joint.as_tuple()]
    if res.players_product is not None:
        out["players_product"] = [
            exact_json(res.players_product.p1, digits),
            exact_json(res.players_product.p2, digits),
        ]
    out["extras"] = _encode(res.extras, digits)
    return out


def parse_exact_json(obj: dict):
    return parse_exact(obj["exact"])
