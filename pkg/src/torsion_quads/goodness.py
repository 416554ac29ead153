"""The separation predicate on quadruples and its arithmetic-progression filter.

A 4-set of rationals is "good" when, after folding every value into [0, 1/2],
the two middle values of the sorted list are strictly separated.  A quadruple
of torsion coordinates is good when some coprime integer pair (a, b) makes
{a*r_i + b*theta_i} good; this is exactly the condition under which the
cross ratio of the four curve images varies with the curve.

For a quadruple that is minimal in its orbit and has the canonical shape
{(0,t1), (r,t2), (r,t3), (r4,t4)}, failure of goodness forces eight explicit
arithmetic progressions to cover the integers, with harmonic sum of their
gaps at least 1.  Both facts are implemented here and used as cross-checks
on the brute-force search.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Optional

from .torsion_coords import Quad, Rat, mod1, reduce_scalar, scaled_points


class ShapeError(ValueError):
    """Raised when a quadruple cannot be relabeled into the canonical shape."""


def is_good_scalars(xs) -> bool:
    """True when the folded values f1 <= f2 <= f3 <= f4 satisfy f2 < f3."""
    vals = sorted(reduce_scalar(x) for x in xs)
    if len(vals) != 4:
        raise ValueError("expected exactly 4 values")
    return vals[1] < vals[2]


def scaled_good_at(pts, a: int, b: int, n: int) -> bool:
    """is_good_scalars({a*r_i + b*theta_i}) on scale-n integer points."""
    vals = sorted(min(v, n - v) for v in ((a * p + b * t) % n for p, t in pts))
    return vals[1] < vals[2]


def goodness_witness_scaled(pts, n: int) -> Optional[tuple[int, int]]:
    for a in range(n):
        for b in range(n):
            if gcd(gcd(a, b), n) == 1 and scaled_good_at(pts, a, b, n):
                return a, b
    return None


def goodness_witness(S: Quad) -> Optional[tuple[int, int]]:
    """A coprime pair (a, b) making {a*r_i + b*theta_i} good, or None.

    Residue pairs mod the common order are scanned in lexicographic order
    (the predicate only depends on (a, b) mod n) and the first hit is lifted
    to a genuinely coprime integer pair.
    """
    n = S.common_order
    w = goodness_witness_scaled(scaled_points(S, n), n)
    if w is None:
        return None
    from .sl2_action import lift_coprime

    return lift_coprime(w[0], w[1], n)


def is_good_quad(S: Quad) -> bool:
    return goodness_witness(S) is not None


@dataclass(frozen=True)
class ProgressionData:
    """The eight progressions A_i = {c : x_i*c + y_i = 0 mod 1} and gaps d_i.

    residues[i] is None when A_i is empty, else the residue class mod
    moduli[i].  moduli[i] is the order of the linear coefficient x_i, which
    is 1 when x_i vanishes mod 1.
    """

    moduli: tuple[int, int, int, int, int, int, int, int]
    residues: tuple[Optional[int], ...]

    def nonempty(self):
        return [(r, d) for r, d in zip(self.residues, self.moduli) if r is not None]


def _progression(x: Rat, y: Rat) -> tuple[int, Optional[int]]:
    """Solve x*c + y = 0 mod 1 for c; returns (order of x, residue or None)."""
    x0, y0 = mod1(x), mod1(y)
    d = x0.denominator
    if d % y0.denominator:
        return d, None
    s = x0.numerator  # gcd(s, d) = 1
    m = y0.numerator * (d // y0.denominator)
    return d, (-m * pow(s, -1, d)) % d


def canonical_shape(S: Quad):
    """Relabel the sorted quadruple as (0,t1),(r,t2),(r,t3),(r4,t4)."""
    p1, p2, p3, p4 = S.points
    if p1.r != 0:
        raise ShapeError(f"first point of {S} has r = {p1.r} != 0")
    if p2.r != p3.r:
        raise ShapeError(f"{S}: the second and third points must share their r")
    return p1.theta, p2.r, p2.theta, p3.theta, p4.r, p4.theta


def progression_data(S: Quad) -> ProgressionData:
    t1, r, t2, t3, r4, t4 = canonical_shape(S)
    defs = [
        (r, t2),
        (r, t3),
        (r4, t4),
        (2 * r, t2 + t3),
        (r4 + r, t4 + t2),
        (r4 + r, t4 + t3),
        (r4 - r, t4 - t2),
        (r4 - r, t4 - t3),
    ]
    moduli = []
    residues = []
    for x, y in defs:
        d, res = _progression(x, y)
        moduli.append(d)
        residues.append(res)
    return ProgressionData(tuple(moduli), tuple(residues))


def covers_all_integers(pd: ProgressionData) -> bool:
    """Whether the union of the nonempty progressions is all of Z."""
    live = pd.nonempty()
    if not live:
        return False
    L = lcm(*(d for _, d in live))
    hit = bytearray(L)
    for res, d in live:
        for c in range(res % d, L, d):
            hit[c] = 1
    return all(hit)


def harmonic_sum(pd: ProgressionData) -> Rat:
    """Sum of 1/d_i over the nonempty progressions."""
    return sum((Fraction(1, d) for r, d in pd.nonempty()), Fraction(0))
