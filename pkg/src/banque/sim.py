"""Monte Carlo table simulator, an independent check on the exact payoffs.

Rounds are dealt with replacement: two-card totals from q (or, in card
mode, from two cards), third cards from q'.  Rounds are split into chunks
with seeds spawned from one ``SeedSequence``, each chunk is summarised by
(count, mean, M2) and the summaries are merged in chunk order.
"""

from __future__ import annotations

import hashlib
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .payoff import BankerStrategy, JointMixture, ProductMixture
from .rules import CARD_WEIGHT, NATURAL, Q_WEIGHT, STAND, ThetaParam, enumerate_info_sets

ALGORITHM = "numpy.random.Philox (Philox4x64-10)"
CHUNK = 1_000_000
_Q = np.array(Q_WEIGHT, dtype=float) / 169
_CARD = np.array(CARD_WEIGHT, dtype=float) / 13


@dataclass
class SimResult:
    mean: float
    stderr: float
    rounds: int
    seed: int
    mode: str
    algorithm: str
    numpy_version: str
    players_digest: str
    banker_digest: str

    def to_json(self) -> dict:
        return asdict(self)

    def within(self, exact, k: float = 4.0) -> bool:
        return abs(self.mean - float(exact)) <= k * self.stderr


def _banker_table(banker: BankerStrategy) -> np.ndarray:
    """Draw probability indexed [k1, k2, j] (zero where Banker never acts)."""
    tab = np.zeros((12, 12, 10))
    for s in enumerate_info_sets():
        tab[s.k1, s.k2, s.j] = float(banker.draw_probability(s))
    return tab


def _joint_probs(players) -> np.ndarray:
    if isinstance(players, ProductMixture):
        players = players.as_joint()
    if not isinstance(players, JointMixture):
        raise TypeError("players must be a JointMixture or ProductMixture")
    return np.array([float(v) for v in players.as_tuple()])


def _totals(rng: np.random.Generator, n: int, card_mode: bool) -> np.ndarray:
    if card_mode:
        return (rng.choice(10, size=n, p=_CARD) + rng.choice(10, size=n, p=_CARD)) % 10
    return rng.choice(10, size=n, p=_Q)


def _player_hand(rng, total, draws_on_5, n):
    """Final total and third-card code for one Player's hands."""
    natural = total >= 8
    draw = (total <= 4) | ((total == 5) & draws_on_5)
    card = rng.choice(10, size=n, p=_CARD)
    final = np.where(draw, (total + card) % 10, total)
    code = np.where(natural, NATURAL, np.where(draw, card, STAND))
    return final, code, natural


def _chunk(args) -> tuple[int, float, float]:
    seed_seq, n, theta, joint, table, card_mode = args
    rng = np.random.Generator(np.random.Philox(seed_seq))
    i1 = _totals(rng, n, card_mode)
    i2 = _totals(rng, n, card_mode)
    j = _totals(rng, n, card_mode)
    u = rng.choice(4, size=n, p=joint)  # SS, SD, DS, DD
    f1, k1, nat1 = _player_hand(rng, i1, u >= 2, n)
    f2, k2, nat2 = _player_hand(rng, i2, (u % 2) == 1, n)
    ends = (j >= 8) | (nat1 & nat2)
    r = table[k1, k2, j]
    bdraw = (rng.random(n) < r) & ~ends
    lcard = rng.choice(10, size=n, p=_CARD)
    fb = np.where(bdraw, (j + lcard) % 10, j)
    # Play ended: compare two-card totals.  Otherwise naturals win.
    s1 = np.where(ends, np.sign(i1 - j), np.where(nat1, 1, np.sign(f1 - fb)))
    s2 = np.where(ends, np.sign(i2 - j), np.where(nat2, 1, np.sign(f2 - fb)))
    pay = theta * s1 + (1 - theta) * s2
    mean = float(pay.mean())
    m2 = float(((pay - mean) ** 2).sum())
    return n, mean, m2


def _merge(a, b):
    na, ma, sa = a
    nb, mb, sb = b
    n = na + nb
    delta = mb - ma
    return n, ma + delta * nb / n, sa + sb + delta * delta * na * nb / n


def _digest(obj) -> str:
    return hashlib.sha1(repr(obj).encode()).hexdigest()[:12]


def _workers() -> int:
    raw = os.environ.get("BANQUE_THREADS")
    try:
        return max(1, int(raw)) if raw else 1
    except ValueError:
        return 1


def simulate(
    theta,
    players,
    banker: BankerStrategy,
    rounds: int,
    seed: int = 0,
    card_mode: bool = False,
    workers: int | None = None,
) -> SimResult:
    """Mean coalition payoff per unit total stake and its standard error.

    θ is used as given (no folding), so Player 1 carries weight θ.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    theta_v = float(ThetaParam.of(theta).value)
    joint = _joint_probs(players)
    table = _banker_table(banker)
    sizes = [CHUNK] * (rounds // CHUNK) + ([rounds % CHUNK] if rounds % CHUNK else [])
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = [(s, n, theta_v, joint, table, card_mode) for s, n in zip(seeds, sizes)]
    workers = _workers() if workers is None else workers
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_chunk, jobs))
    else:
        parts = [_chunk(j) for j in jobs]
    acc = parts[0]
    for p in parts[1:]:
        acc = _merge(acc, p)
    n, mean, m2 = acc
    var = m2 / (n - 1) if n > 1 else 0.0
    return SimResult(
        mean=mean,
        stderr=float(np.sqrt(var / n)),
        rounds=n,
        seed=seed,
        mode="cards" if card_mode else "totals",
        algorithm=ALGORITHM,
        numpy_version=np.__version__,
        players_digest=_digest(tuple(joint)),
        banker_digest=_digest(tuple(sorted((str(s), str(r)) for s, r in banker.mixing.items()))
                              + tuple(sorted(str(s) for s in banker.draw))),
    )


def total_frequencies(rounds: int, seed: int = 0, card_mode: bool = False) -> np.ndarray:
    """Empirical two-card-total frequencies (for checking q)."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    return np.bincount(_totals(rng, rounds, card_mode), minlength=10) / rounds


def exact_q() -> list[Fraction]:
    return [Fraction(w, 169) for w in Q_WEIGHT]
