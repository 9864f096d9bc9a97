"""Card model and Banker information sets for the with-replacement game."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

STAND = 10
NATURAL = 11
BANKER_TOTALS = range(8)


def two_card_total_pmf(i: int) -> Fraction:
    """Probability that a two-card hand totals ``i`` (0-9)."""
    if not 0 <= i <= 9:
        raise ValueError(f"two-card total out of range: {i}")
    return Fraction(16 + 9 * (i == 0), 169)


def card_value_pmf(k: int) -> Fraction:
    """Probability that a single card has value ``k`` (0-9)."""
    if not 0 <= k <= 9:
        raise ValueError(f"card value out of range: {k}")
    return Fraction(1 + 3 * (k == 0), 13)


def mod10(i: int) -> int:
    if i < 0:
        raise ValueError("mod10 expects a nonnegative integer")
    return i % 10


# Integer weights: q(i) = Q_WEIGHT[i] / 169, q'(k) = CARD_WEIGHT[k] / 13.
Q_WEIGHT = tuple(16 + 9 * (i == 0) for i in range(10))
CARD_WEIGHT = tuple(1 + 3 * (k == 0) for k in range(10))


class InfoSet(NamedTuple):
    """Banker information set: Players' third-card codes and Banker's total.

    Codes 0-9 are third-card values, 10 means the Player stood and 11 that
    he had a natural.
    """

    k1: int
    k2: int
    j: int

    def mirror(self) -> "InfoSet":
        return InfoSet(self.k2, self.k1, self.j)

    def __str__(self) -> str:
        return f"{self.k1},{self.k2},{self.j}"

    @classmethod
    def parse(cls, text: str) -> "InfoSet":
        parts = [int(x) for x in text.strip().strip("()").split(",")]
        if len(parts) != 3:
            raise ValueError(f"bad information set: {text!r}")
        s = cls(*parts)
        if s not in info_set_index():
            raise ValueError(f"not a Banker information set: {text!r}")
        return s


@lru_cache(maxsize=None)
def enumerate_info_sets() -> tuple[InfoSet, ...]:
    """All 1144 Banker information sets in lexicographic order."""
    return tuple(
        InfoSet(k1, k2, j)
        for k1 in range(12)
        for k2 in range(12)
        if (k1, k2) != (NATURAL, NATURAL)
        for j in BANKER_TOTALS
    )


@lru_cache(maxsize=None)
def info_set_index() -> dict[InfoSet, int]:
    return {s: n for n, s in enumerate(enumerate_info_sets())}


@dataclass(frozen=True)
class ThetaParam:
    """Stake ratio, folded into (0, 1/2] by swapping the Players if needed.

    ``value`` is what the caller asked for; ``canonical`` is the folded value
    every solver works with, and ``swapped`` records whether the fold
    exchanged the roles of Player 1 and Player 2.
    """

    value: Fraction
    canonical: Fraction
    swapped: bool

    @classmethod
    def of(cls, theta) -> "ThetaParam":
        if isinstance(theta, ThetaParam):
            return theta
        if isinstance(theta, str):
            theta = parse_theta(theta)
        if isinstance(theta, float):
            raise TypeError("pass theta as a Fraction, int or string, not float")
        value = Fraction(theta)
        if not 0 < value < 1:
            raise ValueError(f"theta must lie in (0, 1), got {value}")
        if value > Fraction(1, 2):
            return cls(value, 1 - value, True)
        return cls(value, value, False)


def parse_theta(text: str) -> Fraction:
    """Parse "1/2", "0.3" or "3e-1" exactly (decimals are not rounded)."""
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse theta {text!r}") from exc
