"""Exact scalars (rationals and real quadratic irrationals) and small solvers.

Rationals are plain :class:`fractions.Fraction`.  Elements ``a + b*sqrt(d)``
of a real quadratic field are :class:`QuadraticNumber`; arithmetic between two
of them requires the same field, while comparisons work across fields.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import NamedTuple, Sequence, Union

import gmpy2

Scalar = Union[int, Fraction, "QuadraticNumber"]

_SMALL_PRIMES = [p for p in range(2, 1000) if all(p % f for f in range(2, int(p**0.5) + 1))]


def _squarefree_split(n: int) -> tuple[int, int]:
    """Return (s, r) with n == s*s*r.

    Square factors are stripped for primes below 1000 and when the remaining
    cofactor is itself a perfect square, so ``r`` is square-free unless it
    hides the square of a prime above that bound.
    """
    if n <= 0:
        raise ValueError("expected a positive integer")
    s = 1
    for p in _SMALL_PRIMES:
        pp = p * p
        if pp > n:
            break
        while n % pp == 0:
            n //= pp
            s *= p
    if gmpy2.is_square(n):
        s *= int(gmpy2.isqrt(n))
        n = 1
    return s, n


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _sign_two(a: Fraction, b: Fraction, n: int) -> int:
    """Exact sign of a + b*sqrt(n), n > 0."""
    sa, sb = _sign(a), _sign(b)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    diff = a * a - b * b * n
    if diff == 0:
        return 0
    return sa if diff > 0 else sb


def _sign_three(x: Fraction, y: Fraction, d: int, z: Fraction, e: int) -> int:
    """Exact sign of x + y*sqrt(d) + z*sqrt(e)."""
    # sign of S = y*sqrt(d) + z*sqrt(e)
    sy, sz = _sign(y), _sign(z)
    if sy == 0 or sz == 0 or sy == sz:
        ss = sy or sz
    else:
        t = y * y * d - z * z * e
        ss = 0 if t == 0 else (sy if t > 0 else sz)
    sx = _sign(x)
    if ss == 0 or sx == ss:
        return sx or ss
    if sx == 0:
        return ss
    # opposite signs: compare x^2 with S^2 = y^2 d + z^2 e + 2 y z sqrt(d e)
    c = _sign_two(x * x - y * y * d - z * z * e, -2 * y * z, d * e)
    if c == 0:
        return 0
    return sx if c > 0 else ss


@dataclass(frozen=True, eq=False)
class QuadraticNumber:
    """``a + b*sqrt(d)`` with rational a, b != 0 and square-free d > 1.

    Build instances through :func:`quadratic`, which normalizes and falls back
    to ``Fraction`` when the irrational part vanishes.
    """

    a: Fraction
    b: Fraction
    d: int

    def _coerce(self, other):
        if isinstance(other, QuadraticNumber):
            if other.d == self.d:
                return other.a, other.b
            s, r = _squarefree_split(self.d * other.d)
            if r == 1:
                # sqrt(other.d) = s/self.d * sqrt(self.d)
                return other.a, other.b * Fraction(s, self.d)
            raise ValueError(f"cannot mix sqrt({self.d}) and sqrt({other.d})")
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return quadratic(self.a + c[0], self.b + c[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return quadratic(self.a - c[0], self.b - c[1], self.d)

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return quadratic(c[0] - self.a, c[1] - self.b, self.d)

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        a, b = c
        return quadratic(self.a * a + self.b * b * self.d, self.a * b + self.b * a, self.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        a, b = c
        den = a * a - b * b * self.d
        if den == 0:
            raise ZeroDivisionError("division by zero")
        # (x + y r)/(a + b r) = (x + y r)(a - b r)/den
        return quadratic(
            (self.a * a - self.b * b * self.d) / den, (self.b * a - self.a * b) / den, self.d
        )

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        # c / (a + b r) = c (a - b r) / (a^2 - b^2 d)
        den = self.a * self.a - self.b * self.b * self.d
        return quadratic(c[0] * self.a / den, -c[0] * self.b / den, self.d)

    def sign(self) -> int:
        return _sign_two(self.a, self.b, self.d)

    def _cmp(self, other) -> int:
        if isinstance(other, QuadraticNumber) and other.d != self.d:
            s, r = _squarefree_split(self.d * other.d)
            if r != 1:
                return _sign_three(self.a - other.a, self.b, self.d, -other.b, other.d)
        c = self._coerce(other)
        if c is None:
            raise TypeError(f"cannot compare with {type(other).__name__}")
        return _sign_two(self.a - c[0], self.b - c[1], self.d)

    def __eq__(self, other):
        if isinstance(other, float):
            return False
        try:
            return self._cmp(other) == 0
        except TypeError:
            return NotImplemented

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(to_decimal(self, 30))

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.a, -self.b, self.d)

    def __repr__(self):
        return f"QuadraticNumber({format_exact(self)})"

    def __str__(self):
        return format_exact(self)


def quadratic(a, b, d: int) -> Scalar:
    """Normalized ``a + b*sqrt(d)``; returns a Fraction when irrationality vanishes."""
    a, b = Fraction(a), Fraction(b)
    if d <= 0:
        raise ValueError("quadratic field needs d > 0")
    if b == 0:
        return a
    s, r = _squarefree_split(d)
    if r == 1:
        return a + b * s
    return QuadraticNumber(a, b * s, r)


def sqrt_exact(x) -> Scalar:
    """Exact square root of a nonnegative rational."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("square root of a negative number")
    if x == 0:
        return Fraction(0)
    # sqrt(n/m) = sqrt(n*m)/m
    return quadratic(0, Fraction(1, x.denominator), x.numerator * x.denominator)


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, QuadraticNumber))


def sign(x) -> int:
    if isinstance(x, QuadraticNumber):
        return x.sign()
    return _sign(x)


# --------------------------------------------------------------------------
# Rendering and parsing

def format_exact(x) -> str:
    """Exact text: "n/d" for rationals, "a+b√d" for quadratic irrationals."""
    if isinstance(x, QuadraticNumber):
        b = x.b
        sep = "-" if b < 0 else "+"
        return f"{x.a}{sep}{abs(b)}√{x.d}" if x.a != 0 else f"{b}√{x.d}"
    return str(Fraction(x))


_QUAD_RE = re.compile(
    r"^\s*(?:(?P<a>[-+]?\d+(?:/\d+)?)(?=[-+]))?(?P<b>[-+]?\d+(?:/\d+)?)√(?P<d>\d+)\s*$"
)


def parse_exact(text: str) -> Scalar:
    """Inverse of :func:`format_exact`."""
    text = text.strip()
    if "√" not in text:
        return Fraction(text)
    m = _QUAD_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse exact value {text!r}")
    a = Fraction(m.group("a")) if m.group("a") else Fraction(0)
    return quadratic(a, Fraction(m.group("b")), int(m.group("d")))


def to_decimal(x, digits: int = 15) -> Decimal:
    """Decimal approximation with ``digits`` significant digits."""
    with localcontext() as ctx:
        ctx.prec = digits + 20
        if isinstance(x, QuadraticNumber):
            val = _frac_dec(x.a) + _frac_dec(x.b) * Decimal(x.d).sqrt()
        else:
            val = _frac_dec(Fraction(x))
        ctx.prec = digits
        return +val


def _frac_dec(f: Fraction) -> Decimal:
    return Decimal(f.numerator) / Decimal(f.denominator)


def format_decimal(x, digits: int = 15) -> str:
    return f"{to_decimal(x, digits):.{digits}g}" if x != 0 else "0"


def to_float(x) -> float:
    if isinstance(x, QuadraticNumber):
        return float(x)
    return float(x)


# --------------------------------------------------------------------------
# Linear algebra

def solve_linear_system(rows: Sequence[Sequence], rhs: Sequence) -> list | None:
    """Solve a square system exactly; ``None`` if the matrix is singular."""
    n = len(rows)
    if len(rhs) != n or any(len(r) != n for r in rows):
        raise ValueError("solve_linear_system expects a square system")
    sol = solve_affine(rows, rhs)
    return sol


def solve_affine(rows: Sequence[Sequence], rhs: Sequence) -> list | None:
    """Unique exact solution of a (possibly rectangular) system, else ``None``.

    ``None`` covers both inconsistent and underdetermined systems.
    """
    m = len(rows)
    if len(rhs) != m:
        raise ValueError("rhs length does not match number of rows")
    if m == 0:
        return None
    n = len(rows[0])
    if any(len(r) != n for r in rows):
        raise ValueError("ragged coefficient matrix")
    aug = [[Fraction(v) if isinstance(v, int) else v for v in r] + [b] for r, b in zip(rows, rhs)]
    pivot_row = 0
    for col in range(n):
        piv = next((r for r in range(pivot_row, m) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[pivot_row], aug[piv] = aug[piv], aug[pivot_row]
        pr = aug[pivot_row]
        inv = 1 / pr[col]
        for c in range(col, n + 1):
            pr[c] = pr[c] * inv
        for r in range(m):
            if r != pivot_row and aug[r][col] != 0:
                f = aug[r][col]
                row = aug[r]
                for c in range(col, n + 1):
                    row[c] = row[c] - f * pr[c]
        pivot_row += 1
    if any(aug[r][n] != 0 for r in range(n, m)):
        return None
    return [aug[r][n] for r in range(n)]


def matvec(rows: Sequence[Sequence], x: Sequence) -> list:
    return [sum((a * b for a, b in zip(r, x)), Fraction(0)) for r in rows]


class Root(NamedTuple):
    value: Scalar
    multiplicity: int


def solve_quadratic(c2, c1, c0) -> list[Root]:
    """Real roots of c2*x^2 + c1*x + c0, ascending; complex roots are dropped."""
    c2, c1, c0 = Fraction(c2), Fraction(c1), Fraction(c0)
    if c2 == 0:
        if c1 == 0:
            if c0 == 0:
                raise ValueError("all coefficients are zero")
            return []
        return [Root(-c0 / c1, 1)]
    disc = c1 * c1 - 4 * c2 * c0
    if disc < 0:
        return []
    if disc == 0:
        return [Root(-c1 / (2 * c2), 2)]
    r = sqrt_exact(disc)
    roots = sorted([(-c1 - r) / (2 * c2), (-c1 + r) / (2 * c2)])
    return [Root(x, 1) for x in roots]


# --------------------------------------------------------------------------
# Forms

@dataclass(frozen=True)
class LinearForm3:
    """a + b*p00 + c*p01 + d*p10 on the joint simplex (p11 eliminated)."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    @classmethod
    def from_vertex_values(cls, v) -> "LinearForm3":
        v00, v01, v10, v11 = v
        return cls(v11, v00 - v11, v01 - v11, v10 - v11)

    def __call__(self, p00, p01, p10):
        return self.a + self.b * p00 + self.c * p01 + self.d * p10

    def __sub__(self, other: "LinearForm3") -> "LinearForm3":
        return LinearForm3(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __add__(self, other: "LinearForm3") -> "LinearForm3":
        return LinearForm3(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def vertex_values(self) -> tuple:
        """Values at the pure strategies SS, SD, DS, DD."""
        return (self.a + self.b, self.a + self.c, self.a + self.d, self.a)


@dataclass(frozen=True)
class BilinearForm:
    """a + b*p1 + c*p2 + d*p1*p2 on the unit square."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    @classmethod
    def from_vertex_values(cls, v) -> "BilinearForm":
        v00, v01, v10, v11 = v
        return cls(v00, v10 - v00, v01 - v00, v00 - v01 - v10 + v11)

    def __call__(self, p1, p2):
        return self.a + self.b * p1 + self.c * p2 + self.d * p1 * p2

    def __sub__(self, other: "BilinearForm") -> "BilinearForm":
        return BilinearForm(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __add__(self, other: "BilinearForm") -> "BilinearForm":
        return BilinearForm(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def coefficients(self) -> tuple:
        return (self.a, self.b, self.c, self.d)


def float_close(x: float, y: float, tol: float) -> bool:
    return math.isclose(x, y, rel_tol=0.0, abs_tol=tol)


def polytope_vertices(eq_rows, eq_rhs, le_rows, le_rhs, dim: int) -> list[tuple]:
    """Vertices of {x : eq_rows x = eq_rhs, le_rows x <= le_rhs} by brute force.

    Every vertex makes ``dim`` linearly independent constraints tight, so all
    choices of tight inequalities are tried.  An empty set gives ``[]``.
    Meant for small dimensions.
    """
    eq = [(list(r), b) for r, b in zip(eq_rows, eq_rhs)]
    le = [(list(r), b) for r, b in zip(le_rows, le_rhs)]
    found: list[tuple] = []
    for need in range(0, dim + 1):
        if need > len(le):
            break
        for tight in itertools.combinations(range(len(le)), need):
            rows = [r for r, _ in eq] + [le[t][0] for t in tight]
            rhs = [b for _, b in eq] + [le[t][1] for t in tight]
            if not rows:
                continue
            x = solve_affine(rows, rhs)
            if x is None:
                continue
            if any(sum((a * v for a, v in zip(r, x)), Fraction(0)) > b for r, b in le):
                continue
            x = tuple(x)
            if x not in found:
                found.append(x)
    return found
