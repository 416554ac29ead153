"""Exact coordinates for projective torsion points.

A torsion point of an elliptic curve, viewed through the standard double
cover identifying P and -P, is parameterized by a class of (Q/Z)^2 modulo
negation.  Each class has a unique representative in the strip

    R = {0} x [0,1/2]  u  (0,1/2) x [0,1)  u  {1/2} x [0,1/2],

and everything in this package works with that canonical representative.
All arithmetic is exact, over ``fractions.Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable

Rat = Fraction

HALF = Fraction(1, 2)


class QuadParseError(ValueError):
    """Raised when a quadruple string does not follow the text grammar."""


class DuplicatePointError(ValueError):
    """Raised when a quadruple contains the same reduced point twice."""


def mod1(x: Rat) -> Rat:
    """Representative of x in [0, 1)."""
    return x - (x.numerator // x.denominator)


def reduce_scalar(x: Rat) -> Rat:
    """The unique value in [0, 1/2] congruent to x or -x mod 1."""
    y = mod1(x)
    return y if y <= HALF else 1 - y


@dataclass(frozen=True, order=True)
class TorsionCoord:
    """A point of the fundamental domain R, ordered lexicographically."""

    r: Rat
    theta: Rat

    def __post_init__(self):
        r, t = self.r, self.theta
        ok = (
            (r == 0 and 0 <= t <= HALF)
            or (0 < r < HALF and 0 <= t < 1)
            or (r == HALF and 0 <= t <= HALF)
        )
        if not ok:
            raise ValueError(f"({r}, {t}) is not reduced into the fundamental domain")

    @property
    def order(self) -> int:
        """Smallest m >= 1 with m*(r, theta) integral."""
        return lcm(self.r.denominator, self.theta.denominator)

    @property
    def is_identity(self) -> bool:
        return self.r == 0 and self.theta == 0

    def __str__(self):
        return f"{self.r},{self.theta}"


def reduce_pair(r: Rat, theta: Rat) -> TorsionCoord:
    """Reduce (r, theta) into R, i.e. the representative of +-(r, theta) mod Z^2."""
    r0, t0 = mod1(r), mod1(theta)
    if r0 > HALF:
        r0, t0 = 1 - r0, mod1(-t0)
    if (r0 == 0 or r0 == HALF) and t0 > HALF:
        t0 = 1 - t0
    return TorsionCoord(r0, t0)


@dataclass(frozen=True, order=True)
class Quad:
    """An unordered 4-set of distinct points of R, stored sorted."""

    points: tuple[TorsionCoord, TorsionCoord, TorsionCoord, TorsionCoord]

    def __post_init__(self):
        pts = tuple(sorted(self.points))
        if len(pts) != 4:
            raise ValueError("a quadruple needs exactly 4 points")
        for p, q in zip(pts, pts[1:]):
            if p == q:
                raise DuplicatePointError(f"duplicate point {p}")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Rat, Rat]]) -> "Quad":
        return cls(tuple(reduce_pair(r, t) for r, t in pairs))

    @property
    def common_order(self) -> int:
        return lcm(*(p.order for p in self.points))

    @property
    def contains_identity(self) -> bool:
        return self.points[0].is_identity

    def __str__(self):
        return format_quad(self)


def _parse_rat(token: str) -> Rat:
    token = token.strip()
    parts = token.split("/")
    try:
        if len(parts) == 1:
            return Fraction(int(parts[0]))
        if len(parts) == 2:
            return Fraction(int(parts[0]), int(parts[1]))
    except ZeroDivisionError:
        raise QuadParseError(f"zero denominator in {token!r}") from None
    except ValueError:
        pass
    raise QuadParseError(f"cannot parse rational {token!r} (expected 'p' or 'p/q')")


def parse_quad(text: str) -> Quad:
    """Parse 'p/q,p/q;...' (four ';'-separated points, whitespace ignored)."""
    chunks = [c for c in text.split(";")]
    if len(chunks) != 4:
        raise QuadParseError(f"expected 4 points separated by ';', got {len(chunks)}")
    pairs = []
    for chunk in chunks:
        coords = chunk.split(",")
        if len(coords) != 2:
            raise QuadParseError(f"point {chunk.strip()!r} must be 'r,theta'")
        pairs.append((_parse_rat(coords[0]), _parse_rat(coords[1])))
    return Quad.from_pairs(pairs)


def format_quad(S: Quad) -> str:
    return ";".join(str(p) for p in S.points)


def points_of_order_dividing(n: int) -> list[TorsionCoord]:
    """All points of R with order dividing n, sorted lexicographically."""
    if n < 1:
        raise ValueError("n must be positive")
    pts = []
    for p in range(n // 2 + 1):
        if 2 * p == n or p == 0:
            ts = range(n // 2 + 1)
        else:
            ts = range(n)
        for t in ts:
            pts.append(TorsionCoord(Fraction(p, n), Fraction(t, n)))
    return sorted(pts)


def points_of_exact_order(n: int) -> list[TorsionCoord]:
    return [p for p in points_of_order_dividing(n) if p.order == n]


# Scaled-integer view of the same data, used by the search loops.  A point of
# order dividing n is a pair (p, t) with r = p/n, theta = t/n.

def scaled_points(S: Quad, n: int) -> tuple[tuple[int, int], ...]:
    pts = []
    for pt in S.points:
        rp = pt.r * n
        tp = pt.theta * n
        if rp.denominator != 1 or tp.denominator != 1:
            raise ValueError(f"{pt} does not have order dividing {n}")
        pts.append((int(rp), int(tp)))
    return tuple(pts)


def reduce_scaled(p: int, t: int, n: int) -> tuple[int, int]:
    """Integer version of reduce_pair at scale n."""
    p %= n
    t %= n
    if 2 * p > n:
        p, t = n - p, (-t) % n
    if (p == 0 or 2 * p == n) and 2 * t > n:
        t = n - t
    return p, t


def quad_from_scaled(pts: Iterable[tuple[int, int]], n: int) -> Quad:
    return Quad(tuple(TorsionCoord(Fraction(p, n), Fraction(t, n)) for p, t in pts))
