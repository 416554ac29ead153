"""Brute-force re-derivation of the classification of non-good quadruples.

The search enumerates 4-subsets of fundamental-domain points level by level
(common order exactly n for each n up to the bound), discards every subset
for which some residue pair (a, b) separates the folded linear combinations,
and reduces the rare survivors to orbit minima.  The result is compared
against the hard-coded table of the eleven known families.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, Optional

import numpy as np

from .goodness import goodness_witness_scaled
from .sl2_action import act_scaled, minimal_representative, _sl2_tuples
from .torsion_coords import Quad, points_of_order_dividing, quad_from_scaled

QUICK_PAIRS = ((0, 1), (1, 0), (1, 1))

SPORADIC_CASES = {
    3: "0,1/3;1/3,0;1/3,1/3;1/3,2/3",
    4: "0,1/4;1/4,0;1/4,1/4;1/4,1/2",
    5: "0,1/4;1/2,0;1/2,1/4;1/2,1/2",
    6: "0,1/6;1/6,0;1/6,1/6;1/3,2/3",
    7: "0,1/6;1/6,0;1/6,1/3;1/3,5/6",
    8: "0,1/6;1/3,0;1/3,1/6;1/3,1/3",
    9: "0,1/6;1/3,1/6;1/3,1/2;1/3,5/6",
    10: "0,1/8;1/4,1/8;1/4,3/8;1/2,1/8",
    11: "0,1/12;1/3,1/12;1/3,11/12;1/2,1/4",
}

CASE_CONSTANTS = {
    1: Fraction(27, 4),
    2: Fraction(27, 4),
    3: Fraction(0),
    4: Fraction(1, 2),
    5: Fraction(27, 4),
    6: Fraction(0),
    7: Fraction(8, 3),
    8: Fraction(8, 3),
    9: Fraction(0),
    10: Fraction(1, 2),
    11: Fraction(0),
}


@dataclass(frozen=True)
class FamilyEntry:
    case: int
    param: Optional[Fraction]  # the free value a (case 1) or b (case 2)
    quad: Quad
    constant: Fraction

    @property
    def label(self) -> str:
        if self.param is None:
            return f"case_{self.case}"
        return f"case_{self.case}(a={self.param})" if self.case == 1 else f"case_{self.case}(b={self.param})"


def _case1_quad(a: Fraction) -> Quad:
    return Quad.from_pairs(
        [(Fraction(0), a), (Fraction(0), Fraction(1, 4)), (Fraction(0), Fraction(1, 2) - a), (Fraction(1, 2), Fraction(1, 4))]
    )


def _case2_quad(b: Fraction) -> Quad:
    return Quad.from_pairs(
        [(Fraction(0), b), (Fraction(1, 4), Fraction(0)), (Fraction(1, 4), Fraction(1, 2)), (Fraction(1, 2), b)]
    )


def family_table(max_order: int) -> list[FamilyEntry]:
    """All family members whose common order is at most max_order."""
    entries = []
    for a in [Fraction(0)] + [Fraction(1, 2 * r) for r in range(3, max_order + 1)]:
        S = _case1_quad(a)
        if S.common_order <= max_order:
            entries.append(FamilyEntry(1, a, S, CASE_CONSTANTS[1]))
    for b in [Fraction(1, 2 * r) for r in range(2, max_order + 1)]:
        S = _case2_quad(b)
        if S.common_order <= max_order:
            entries.append(FamilyEntry(2, b, S, CASE_CONSTANTS[2]))
    from .torsion_coords import parse_quad

    for case, text in SPORADIC_CASES.items():
        S = parse_quad(text)
        if S.common_order <= max_order:
            entries.append(FamilyEntry(case, None, S, CASE_CONSTANTS[case]))
    entries.sort(key=lambda e: (e.quad.common_order, e.quad))
    return entries


def family_lookup(S: Quad, max_order: int) -> Optional[FamilyEntry]:
    for entry in family_table(max_order):
        if entry.quad == S:
            return entry
    return None


def enumerate_minimal_quads(n: int) -> Iterator[Quad]:
    """Orbit minima among quadruples of common order exactly n.

    Subsets are generated in lexicographic order, so the first member of
    every orbit encountered is its minimum; the orbit is then marked seen.
    Memory grows with the full subset count, so this is meant for small n
    (the classifier itself uses the goodness filter instead).
    """
    pts = points_of_order_dividing(n)
    scaled = [(int(p.r * n), int(p.theta * n)) for p in pts]
    gcds = [gcd(gcd(p, t), n) for p, t in scaled]
    group = _sl2_tuples(n)
    seen: set[tuple] = set()
    for idx in itertools.combinations(range(len(pts)), 4):
        if math.gcd(*(gcds[i] for i in idx)) != 1:
            continue
        base = tuple(sorted(scaled[i] for i in idx))
        if base in seen:
            continue
        for g in group:
            seen.add(act_scaled(g, base, n))
        yield quad_from_scaled(base, n)


def _combination_indices(count: int, k: int) -> np.ndarray:
    total = math.comb(count, k)
    flat = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(count), k)),
        dtype=np.int32,
        count=total * k,
    )
    return flat.reshape(total, k)


def _classify_level(n: int, prune: bool) -> list[Quad]:
    """Orbit minima of the non-good quadruples with common order exactly n."""
    pts = points_of_order_dividing(n)
    if len(pts) < 4:
        return []
    pp = np.array([int(p.r * n) for p in pts], dtype=np.int64)
    tt = np.array([int(p.theta * n) for p in pts], dtype=np.int64)
    gg = np.gcd(np.gcd(pp, tt), n)
    combos = _combination_indices(len(pts), 4)
    combos = combos[np.gcd.reduce(gg[combos], axis=1) == 1]

    pairs = [
        (a, b)
        for a in range(n)
        for b in range(n)
        if gcd(gcd(a, b), n) == 1
    ]
    if prune:
        pairs = list(QUICK_PAIRS) + [p for p in pairs if p not in QUICK_PAIRS]
    alive = combos
    for a, b in pairs:
        if not len(alive):
            break
        folded = (a * pp + b * tt) % n
        folded = np.minimum(folded, n - folded)
        vals = np.sort(folded[alive], axis=1)
        alive = alive[~(vals[:, 1] < vals[:, 2])]

    scaled = list(zip(pp.tolist(), tt.tolist()))
    minima: dict[Quad, None] = {}
    for row in alive:
        S = quad_from_scaled(sorted(scaled[i] for i in row), n)
        rep, _ = minimal_representative(S)
        minima.setdefault(rep)
    return sorted(minima)


def classify(max_order: int, prune: bool = True) -> list[Quad]:
    """All non-good orbit minima with common order up to the bound."""
    if max_order < 2:
        raise ValueError("max_order must be at least 2")
    out: list[Quad] = []
    for n in range(2, max_order + 1):
        out.extend(_classify_level(n, prune))
    # sanity: every reported quadruple really has no separating pair, and
    # its progression data covers Z with harmonic sum >= 1
    from .goodness import covers_all_integers, harmonic_sum, progression_data
    from .torsion_coords import scaled_points

    for S in out:
        m = S.common_order
        assert goodness_witness_scaled(scaled_points(S, m), m) is None
        pd = progression_data(S)
        assert covers_all_integers(pd) and harmonic_sum(pd) >= 1
    return sorted(out, key=lambda S: (S.common_order, S))


@dataclass(frozen=True)
class MatchReport:
    passed: bool
    matched: tuple[tuple[Quad, str], ...]
    missing: tuple[Quad, ...]  # expected family members that were not found
    extra: tuple[Quad, ...]  # found quads outside the family table


def match_family_table(results: list[Quad], max_order: int) -> MatchReport:
    """Compare classification output against the known family table."""
    table = {e.quad: e for e in family_table(max_order)}
    found = set(results)
    missing = tuple(sorted(q for q in table if q not in found))
    extra = tuple(sorted(q for q in found if q not in table))
    matched = tuple(
        (q, table[q].label) for q in sorted(found & set(table), key=lambda S: (S.common_order, S))
    )
    return MatchReport(not missing and not extra, matched, missing, extra)
