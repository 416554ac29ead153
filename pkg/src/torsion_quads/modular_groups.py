"""Invariance groups of the modular function attached to a quadruple.

mu_S sends the period parameter to the j6-value of the cross ratio of the
four X-coordinates.  The set stabilizer of S (through inverse-transpose)
always fixes mu_S; the possibly larger invariance group is computed by
comparing truncated expansions of mu over the whole finite matrix group mod
n.  Equality of truncations is evidence at the stated order, backed by a
subgroup-closure check on the computed set.
"""

from __future__ import annotations

from dataclasses import dataclass

from .qseries import LaurentSeries, mu_series, series_close
from .sl2_action import (
    Mat2,
    Mat2ModN,
    SubgroupModN,
    act_scaled,
    psl_quotient_order,
    stabilizer_subgroup,
    _sl2_tuples,
)
from .torsion_coords import Quad, parse_quad, points_of_exact_order, quad_from_scaled, scaled_points


class ConventionError(AssertionError):
    """The computed invariance set does not contain the stabilizer."""


@dataclass(frozen=True)
class InvarianceReport:
    n: int
    stabilizer_order_mod_pm: int
    invariance_order_mod_pm: int
    stabilizer: SubgroupModN
    invariance: SubgroupModN
    terms: int
    tol: float


def invariance_subgroup(S: Quad, terms: int = 4, tol: float = 1e-8) -> SubgroupModN:
    """Matrices mod n whose induced substitution leaves mu_S unchanged.

    A matrix g moves mu_S to mu of the transformed quadruple, up to the
    period substitution that cross ratios cancel, so membership of g^T is
    decided by comparing mu-series of act(g, S) against mu-series of S.
    """
    n = S.common_order
    base_pts = scaled_points(S, n)
    images: dict[tuple, list] = {}
    for g in _sl2_tuples(n):
        images.setdefault(act_scaled(g, base_pts, n), []).append(g)
    base_mu = mu_series(S, D=terms)
    members: set[Mat2ModN] = set()
    for pts, gs in images.items():
        T = quad_from_scaled(pts, n)
        if series_close(mu_series(T, D=terms), base_mu, tol):
            for g in gs:
                members.add(Mat2ModN(n, *g).transpose())
    result = SubgroupModN(n, frozenset(members))
    if not result.is_subgroup():
        raise ConventionError(
            "mu-equality did not produce a subgroup; increase terms or loosen tol"
        )
    stab = stabilizer_subgroup(S)
    if not all(g in result for g in stab.elements):
        raise ConventionError("stabilizer escapes the computed invariance group")
    return result


def invariance_report(S: Quad, terms: int = 4, tol: float = 1e-8) -> InvarianceReport:
    stab = stabilizer_subgroup(S)
    inv = invariance_subgroup(S, terms=terms, tol=tol)
    return InvarianceReport(
        n=S.common_order,
        stabilizer_order_mod_pm=psl_quotient_order(stab),
        invariance_order_mod_pm=psl_quotient_order(inv),
        stabilizer=stab,
        invariance=inv,
        terms=terms,
        tol=tol,
    )


LEVEL5_QUAD = "0,1/5;0,2/5;1/5,0;2/5,0"
LEVEL5_MATRICES = (Mat2(1, 2, 1, 3), Mat2(1, 1, 2, 3))


@dataclass(frozen=True)
class Level5Report:
    quads: tuple[Quad, Quad, Quad]
    mu_pairwise_equal: bool
    pairwise_disjoint: bool
    union_is_all_order_5: bool
    union_size: int

    @property
    def passed(self) -> bool:
        return self.mu_pairwise_equal and self.pairwise_disjoint and self.union_is_all_order_5


def level5_partition_check(terms: int = 4, tol: float = 1e-8) -> Level5Report:
    """The three mu-equivalent level-5 quadruples partition the order-5 points."""
    from .sl2_action import act

    S = parse_quad(LEVEL5_QUAD)
    quads = (S, act(LEVEL5_MATRICES[0], S), act(LEVEL5_MATRICES[1], S))
    mus = [mu_series(T, D=terms) for T in quads]
    mu_equal = all(series_close(mus[0], m, tol) for m in mus[1:])
    point_sets = [set(T.points) for T in quads]
    disjoint = (
        not (point_sets[0] & point_sets[1])
        and not (point_sets[0] & point_sets[2])
        and not (point_sets[1] & point_sets[2])
    )
    union = point_sets[0] | point_sets[1] | point_sets[2]
    all_order_5 = set(points_of_exact_order(5))
    return Level5Report(
        quads=quads,
        mu_pairwise_equal=mu_equal,
        pairwise_disjoint=disjoint,
        union_is_all_order_5=union == all_order_5,
        union_size=len(union),
    )
