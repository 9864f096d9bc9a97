"""Breakpoint scans and value curves over a θ range.

A fingerprint records the discrete structure of an equilibrium (Banker's
pure draw set, the sets where he mixes, and which Player constraints are
tight).  Adjacent grid points with different fingerprints bracket a
breakpoint, which is then narrowed by exact rational bisection.
"""

from __future__ import annotations

import csv
import hashlib
import io
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable

from .cce import solve_cce
from .ice import solve_ice_lower, upper_value
from .nash import find_nash_families
from .numeric import format_decimal, to_float
from .rules import ThetaParam

log = logging.getLogger(__name__)

KINDS = ("cce", "ice", "nash")
GOLDEN = Fraction(381966, 1000000)  # 1 - 1/phi, rounded


@dataclass(frozen=True)
class Fingerprint:
    kind: str
    key: Hashable

    @property
    def digest(self) -> str:
        return hashlib.sha1(repr(self.key).encode()).hexdigest()[:10]

    def __str__(self):
        return self.digest


def _support(values) -> tuple:
    return tuple(int(v > 0) for v in values)


def fingerprint(kind: str, theta) -> Fingerprint:
    t = ThetaParam.of(theta)
    if kind == "cce":
        r = solve_cce(t.canonical)
        key = (
            frozenset(r.banker.draw),
            tuple(sorted(r.banker.mixing)),
            _support(r.players_joint.as_tuple()),
        )
    elif kind == "ice":
        r = solve_ice_lower(t.canonical)
        pm = r.players_product
        key = (
            frozenset(r.banker.draw),
            tuple(r.indifferent_sets),
            (pm.p1 == 0, pm.p1 == 1, pm.p2 == 0, pm.p2 == 1),
        )
    elif kind == "nash":
        fams = find_nash_families(t.canonical)
        key = tuple(
            (
                frozenset(f.background.draw),
                tuple(f.mixing_sets),
                (f.players.p1 == 0, f.players.p1 == 1, f.players.p2 == 0, f.players.p2 == 1),
            )
            for f in fams
        )
    else:
        raise ValueError(f"unknown solver kind {kind!r}")
    return Fingerprint(kind, key)


def _workers() -> int:
    raw = os.environ.get("BANQUE_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            log.warning("ignoring BANQUE_THREADS=%r", raw)
    return 1


def _map(fn: Callable, items: list, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _fp_job(args):
    kind, theta = args
    return fingerprint(kind, theta)


@dataclass
class Bracket:
    lo: Fraction
    hi: Fraction
    left: Fingerprint
    right: Fingerprint

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi


@dataclass
class ScanResult:
    kind: str
    samples: list[tuple[Fraction, Fingerprint]]
    brackets: list[Bracket]

    def to_csv(self, digits: int = 15) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bracket_lo", "bracket_hi", "lo_decimal", "hi_decimal", "left_fingerprint", "right_fingerprint"])
        for b in self.brackets:
            w.writerow([b.lo, b.hi, format_decimal(b.lo, digits), format_decimal(b.hi, digits), b.left, b.right])
        return buf.getvalue()


def scan(kind: str, lo, hi, grid: int = 20, tol=Fraction(1, 10**9), workers: int | None = None) -> ScanResult:
    """Locate every fingerprint change seen on a uniform grid of ``grid`` steps.

    Brackets are refined until their width is at most ``tol``.  Changes that
    appear and vanish between two grid points are not detected.
    """
    lo, hi, tol = Fraction(lo), Fraction(hi), Fraction(tol)
    if lo > hi:
        raise ValueError("scan range must satisfy lo <= hi")
    if grid < 1 or tol <= 0:
        raise ValueError("grid must be >= 1 and tol > 0")
    if lo == hi:
        return ScanResult(kind, [(lo, fingerprint(kind, lo))], [])
    workers = _workers() if workers is None else workers
    thetas = [lo + (hi - lo) * Fraction(i, grid) for i in range(grid + 1)]
    fps = _map(_fp_job, [(kind, t) for t in thetas], workers)
    samples = list(zip(thetas, fps))
    pending = [
        Bracket(a, b, fa, fb) for (a, fa), (b, fb) in zip(samples, samples[1:]) if fa != fb
    ]
    done = []
    while pending:
        br = pending.pop()
        if br.width <= tol:
            done.append(br)
            continue
        mid = (br.lo + br.hi) / 2
        fm = fingerprint(kind, mid)
        if fm != br.left:
            pending.append(Bracket(br.lo, mid, br.left, fm))
        if fm != br.right:
            pending.append(Bracket(mid, br.hi, fm, br.right))
    done.sort(key=lambda b: b.lo)
    return ScanResult(kind, samples, done)


# --------------------------------------------------------------------------

def equilibrium_value(kind: str, theta):
    """Coalition value: CCE value, ICE lower value, or the Nash value."""
    if kind == "cce":
        return solve_cce(theta).value
    if kind == "ice":
        return solve_ice_lower(theta).value
    if kind == "nash":
        fams = find_nash_families(ThetaParam.of(theta).canonical)
        if not fams:
            raise ValueError(f"no Nash equilibrium found at theta={theta}")
        return fams[0].value
    raise ValueError(f"unknown solver kind {kind!r}")


def _value_job(args):
    kind, theta = args
    if kind == "ice":
        return solve_ice_lower(theta).value, upper_value(theta)
    return (equilibrium_value(kind, theta),)


def value_curve(kind: str, lo, hi, n: int = 50, workers: int | None = None) -> list[tuple]:
    """Rows (θ, value...) on n+1 evenly spaced rational points; ICE adds the upper value."""
    lo, hi = Fraction(lo), Fraction(hi)
    if n < 1 or not lo < hi:
        raise ValueError("need n >= 1 and lo < hi")
    workers = _workers() if workers is None else workers
    thetas = [lo + (hi - lo) * Fraction(i, n) for i in range(n + 1)]
    vals = _map(_value_job, [(kind, t) for t in thetas], workers)
    return [(t, *v) for t, v in zip(thetas, vals)]


def value_curve_csv(kind: str, rows: list[tuple], digits: int = 15) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta", "lower", "upper", "gap"] if kind == "ice" else ["theta", "value"])
    for row in rows:
        t, *vals = row
        if kind == "ice":
            vals = [vals[0], vals[1], vals[1] - vals[0]]
        w.writerow([format_decimal(t, digits)] + [format_decimal(v, digits) for v in vals])
    return buf.getvalue()


@dataclass
class Peak:
    lo: Fraction
    hi: Fraction
    theta: Fraction
    value: object


def locate_peak(kind: str, lo, hi, tol=Fraction(1, 10**7)) -> Peak:
    """Golden-section search for the maximum of a unimodal value curve on [lo, hi]."""
    a, b = Fraction(lo), Fraction(hi)
    f = {}

    def val(x):
        if x not in f:
            f[x] = equilibrium_value(kind, x)
        return f[x]

    c = a + GOLDEN * (b - a)
    d = b - GOLDEN * (b - a)
    while b - a > tol:
        if val(c) < val(d):
            a, c = c, d
            d = b - GOLDEN * (b - a)
        else:
            b, d = d, c
            c = a + GOLDEN * (b - a)
        # keep denominators small
        c = _round_rational(c, b - a)
        d = _round_rational(d, b - a)
        if not a < c < d < b:
            c = a + (b - a) / 3
            d = a + 2 * (b - a) / 3
    best = max(f, key=lambda x: to_float(f[x]))
    return Peak(a, b, best, f[best])


def _round_rational(x: Fraction, scale: Fraction) -> Fraction:
    return x.limit_denominator(max(10, int(1000 / scale)))
