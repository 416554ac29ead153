"""Integer 2x2 matrices of determinant one and their action on quadruples.

The left action on a quadruple S = {(r_i, theta_i)} sends each point to the
reduced image of the row vector (r_i, theta_i) times the transposed matrix.
Since every coordinate of S has denominator dividing the common order n, the
action factors through the finite group of determinant-one matrices mod n,
which makes orbits, minima and stabilizers finite computations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .torsion_coords import Quad, quad_from_scaled, reduce_pair, reduce_scaled, scaled_points


class MatrixParseError(ValueError):
    """Raised for malformed '[[a,b],[c,d]]' matrix text."""


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with a*s + b*t = g = gcd(a, b)."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


@dataclass(frozen=True, order=True)
class Mat2:
    """Integer matrix [[a, b], [c, d]] with determinant 1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self.entries()} is not 1")

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Mat2":
        return Mat2(self.d, -self.b, -self.c, self.a)

    def transpose(self) -> "Mat2":
        return Mat2(self.a, self.c, self.b, self.d)

    def inverse_transpose(self) -> "Mat2":
        return Mat2(self.d, -self.c, -self.b, self.a)

    def __str__(self):
        return format_matrix(self)


IDENTITY = Mat2(1, 0, 0, 1)


def parse_matrix(text: str) -> Mat2:
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixParseError(f"cannot parse matrix {text!r}: {exc}") from None
    if (
        not isinstance(rows, list)
        or len(rows) != 2
        or any(not isinstance(row, list) or len(row) != 2 for row in rows)
        or any(not isinstance(x, int) for row in rows for x in row)
    ):
        raise MatrixParseError(f"matrix {text!r} must look like [[a,b],[c,d]] with integers")
    try:
        return Mat2(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    except ValueError as exc:
        raise MatrixParseError(str(exc)) from None


def format_matrix(g: Mat2) -> str:
    return f"[[{g.a},{g.b}],[{g.c},{g.d}]]"


@dataclass(frozen=True, order=True)
class Mat2ModN:
    """Residue matrix mod n with determinant congruent to 1."""

    n: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        n = self.n
        object.__setattr__(self, "a", self.a % n)
        object.__setattr__(self, "b", self.b % n)
        object.__setattr__(self, "c", self.c % n)
        object.__setattr__(self, "d", self.d % n)
        if (self.a * self.d - self.b * self.c) % n != 1 % n:
            raise ValueError(f"determinant of {self} is not 1 mod {n}")

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other: "Mat2ModN") -> "Mat2ModN":
        if self.n != other.n:
            raise ValueError("moduli differ")
        return Mat2ModN(
            self.n,
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Mat2ModN":
        return Mat2ModN(self.n, self.d, -self.b, -self.c, self.a)

    def transpose(self) -> "Mat2ModN":
        return Mat2ModN(self.n, self.a, self.c, self.b, self.d)

    def inverse_transpose(self) -> "Mat2ModN":
        return Mat2ModN(self.n, self.d, -self.c, -self.b, self.a)

    def __neg__(self) -> "Mat2ModN":
        return Mat2ModN(self.n, -self.a, -self.b, -self.c, -self.d)

    def lift(self) -> Mat2:
        return lift_det1(self.entries(), self.n)


@lru_cache(maxsize=None)
def _sl2_tuples(n: int) -> tuple[tuple[int, int, int, int], ...]:
    """All (a, b, c, d) mod n with ad - bc = 1 mod n, lexicographic order."""
    if n == 1:
        return ((0, 0, 0, 0),)
    out = []
    for a in range(n):
        for b in range(n):
            for c in range(n):
                rhs = (1 + b * c) % n
                g = gcd(a, n)
                if rhs % g:
                    continue
                # solutions d of a*d = rhs mod n
                a1, n1, r1 = a // g, n // g, rhs // g
                d0 = (r1 * pow(a1, -1, n1)) % n1 if n1 > 1 else 0
                for k in range(g):
                    out.append((a, b, c, d0 + k * n1))
    out.sort()
    return tuple(out)


def enumerate_sl2_mod_n(n: int) -> list[Mat2ModN]:
    """The full group of determinant-one residue matrices mod n."""
    return [Mat2ModN(n, *t) for t in _sl2_tuples(n)]


def sl2_mod_n_size(n: int) -> int:
    size = n ** 3
    m, p = n, 2
    while p * p <= m:
        if m % p == 0:
            size = size // (p * p) * (p * p - 1)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        size = size // (m * m) * (m * m - 1)
    return size


def lift_coprime(a: int, b: int, n: int) -> tuple[int, int]:
    """Lift a residue pair with gcd(a, b, n) = 1 to integers with gcd 1.

    The lift keeps b (replacing 0 by n) and bumps a by multiples of n; a
    suitable multiple always exists, and the result is re-checked.
    """
    if gcd(gcd(a, b), n) != 1:
        raise ValueError(f"gcd({a}, {b}, {n}) != 1")
    b1 = b % n or n
    a1 = a % n
    for _ in range(b1 + 2):
        if gcd(a1, b1) == 1:
            return a1, b1
        a1 += n
    raise AssertionError("coprime lift not found")  # unreachable


def lift_det1(entries: tuple[int, int, int, int], n: int) -> Mat2:
    """Integer determinant-one lift of a residue matrix mod n."""
    a, b, c, d = (x % n for x in entries)
    if n == 1:
        return IDENTITY
    a1, b1 = lift_coprime(a, b, n)
    k = (a1 * d - b1 * c - 1) // n
    _, s, t = xgcd(a1, b1)
    return Mat2(a1, b1, c + k * t * n, d - k * s * n)


def act(g, S: Quad) -> Quad:
    """Image of the quadruple under the matrix: reduce((r, theta) . g^T) pointwise."""
    pts = tuple(
        reduce_pair(g.a * p.r + g.b * p.theta, g.c * p.r + g.d * p.theta)
        for p in S.points
    )
    return Quad(pts)


def act_scaled(entries, pts, n: int):
    a, b, c, d = entries
    return tuple(sorted(reduce_scaled(a * p + b * t, c * p + d * t, n) for p, t in pts))


def orbit(S: Quad) -> set[Quad]:
    """All images of S under determinant-one matrices mod the common order."""
    n = S.common_order
    base = scaled_points(S, n)
    seen = {act_scaled(g, base, n) for g in _sl2_tuples(n)}
    return {quad_from_scaled(t, n) for t in seen}


def minimal_representative(S: Quad) -> tuple[Quad, Mat2]:
    """Lexicographically smallest quad in the orbit, with a witness matrix."""
    n = S.common_order
    base = scaled_points(S, n)
    best = None
    best_g = None
    for g in _sl2_tuples(n):
        img = act_scaled(g, base, n)
        if best is None or img < best:
            best, best_g = img, g
    witness = lift_det1(best_g, n)
    return quad_from_scaled(best, n), witness


@dataclass(frozen=True)
class SubgroupModN:
    """A set of residue matrices mod n, expected to be a subgroup."""

    n: int
    elements: frozenset[Mat2ModN]

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g: Mat2ModN):
        return g in self.elements

    def __iter__(self):
        return iter(sorted(self.elements))

    def is_subgroup(self) -> bool:
        els = self.elements
        if Mat2ModN(self.n, 1, 0, 0, 1) not in els:
            return False
        return all(g.inverse() in els for g in els) and all(
            g * h in els for g in els for h in els
        )


def psl_quotient_order(G: SubgroupModN) -> int:
    """Number of {g, -g} classes in the subgroup."""
    classes = {min(g.entries(), (-g).entries()) for g in G.elements}
    return len(classes)


def stabilizer_subgroup(S: Quad) -> SubgroupModN:
    """Inverse-transposes of the matrices mod n that fix the quadruple."""
    n = S.common_order
    base = scaled_points(S, n)
    fixed = tuple(sorted(base))
    els = {
        Mat2ModN(n, *g).inverse_transpose()
        for g in _sl2_tuples(n)
        if act_scaled(g, base, n) == fixed
    }
    return SubgroupModN(n, frozenset(els))
