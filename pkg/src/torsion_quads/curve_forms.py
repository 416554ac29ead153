"""Numeric verification of the classification constants on two curve models.

The quartic model  y^2 = x^4 - (d^2 + d^-2) x^2 + 1  has its 2-torsion
translations acting on the x-line by x -> +-x^(+-1), which makes the constant
cross ratios of the bounded-order families visible as closed-form identities
in the parameter.  The cubic model  x^3 + y^3 + z^3 = 3*l*x*y*z  carries
rational addition and doubling formulas with visible 3-torsion.  Every
identity is checked on random admissible parameters; each family's constant
must agree with the q-series route.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .qseries import cross_ratio_value, j6_value

OMEGA = complex(-0.5, math.sqrt(3) / 2)  # primitive cube root of unity

INF = float("inf")

XValue = Union[complex, float]


class RootFindingError(ArithmeticError):
    """Simultaneous iteration failed to converge."""


class DegeneratePointError(ValueError):
    """A projective point degenerated to (0:0:0)."""


def is_inf(x: XValue) -> bool:
    return isinstance(x, float) and math.isinf(x)


# ---------------------------------------------------------------------------
# Polynomial roots by simultaneous (Durand-Kerner) iteration
# ---------------------------------------------------------------------------


def durand_kerner(
    coeffs,
    tol: float = 1e-12,
    max_iter: int = 200,
    rng: Optional[random.Random] = None,
) -> np.ndarray:
    """Roots of the polynomial with the given coefficients (leading first)."""
    c = np.asarray(coeffs, dtype=complex)
    if abs(c[0]) == 0:
        raise ValueError("leading coefficient must be nonzero")
    c = c / c[0]
    deg = len(c) - 1
    if deg == 0:
        return np.zeros(0, dtype=complex)
    rng = rng or random.Random(0)
    radius = 1.0 + float(np.max(np.abs(c[1:])))
    roots = radius * (0.4 + 0.9j) ** np.arange(1, deg + 1)
    for attempt in range(4):
        for _ in range(max_iter):
            diffs = roots[:, None] - roots[None, :]
            np.fill_diagonal(diffs, 1.0)
            denom = np.prod(diffs, axis=1)
            step = np.polyval(c, roots) / denom
            roots = roots - step
            if np.max(np.abs(step)) < tol:
                break
        residual = np.max(np.abs(np.polyval(c, roots)))
        if residual < 1e-9 * max(1.0, radius ** deg):
            return roots
        # stagnated: restart from a randomly perturbed configuration
        roots = roots + np.array(
            [radius * 0.1 * complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(deg)]
        )
    raise RootFindingError(f"no convergence for coefficients {coeffs}")


def sorted_roots(coeffs, rng=None) -> np.ndarray:
    roots = durand_kerner(coeffs, rng=rng)
    return np.array(sorted(roots, key=lambda z: (round(z.real, 9), round(z.imag, 9))))


# ---------------------------------------------------------------------------
# Parameter sampling
# ---------------------------------------------------------------------------

NONDEGENERACY_MARGIN = 1e-3


def _sample_annulus(rng: random.Random, lo: float = 0.3, hi: float = 3.0) -> complex:
    while True:
        z = complex(rng.uniform(-hi, hi), rng.uniform(-hi, hi))
        if lo <= abs(z) <= hi:
            return z


def sample_jac_param(rng: random.Random, margin: float = NONDEGENERACY_MARGIN) -> complex:
    """delta with delta^4 away from 0 and 1."""
    while True:
        d = _sample_annulus(rng)
        d4 = d ** 4
        if abs(d4) > margin and abs(d4 - 1) > margin:
            return d


def sample_hess_param(rng: random.Random, margin: float = NONDEGENERACY_MARGIN) -> complex:
    """lambda with lambda^3 away from 1."""
    while True:
        lam = _sample_annulus(rng)
        if abs(lam ** 3 - 1) > margin:
            return lam


# ---------------------------------------------------------------------------
# Quartic (Jacobian) model
# ---------------------------------------------------------------------------


def jac_double_x(x: XValue, delta: complex) -> XValue:
    """x-image of the doubled point: -(d^2 - 2x^2 + d^2 x^4) / (d (1 - 2d^2 x^2 + x^4))."""
    if is_inf(x):
        return -delta
    num = delta ** 2 - 2 * x ** 2 + delta ** 2 * x ** 4
    den = delta * (1 - 2 * delta ** 2 * x ** 2 + x ** 4)
    if abs(den) <= 1e-14 * (1.0 + abs(num)):
        return INF
    return -num / den


JAC_TRANSLATIONS = ("identity", "negate", "invert", "negate_invert")


def jac_translate(x: XValue, which: str) -> XValue:
    """x-image after adding a 2-torsion point: one of x, -x, 1/x, -1/x."""
    if which == "identity":
        return x
    if which == "negate":
        return INF if is_inf(x) else -x
    if which == "invert":
        if is_inf(x):
            return 0j
        return INF if x == 0 else 1 / x
    if which == "negate_invert":
        if is_inf(x):
            return 0j
        return INF if x == 0 else -1 / x
    raise ValueError(f"unknown translation {which!r}; expected one of {JAC_TRANSLATIONS}")


def cross_ratio_ext(z1: XValue, z2: XValue, z3: XValue, z4: XValue) -> complex:
    """(z1-z2)(z3-z4)/((z1-z4)(z3-z2)) with at most one argument at infinity."""
    infs = [is_inf(z) for z in (z1, z2, z3, z4)]
    if sum(infs) > 1:
        raise ValueError("at most one point may sit at infinity")
    if infs[0]:
        return (z3 - z4) / (z3 - z2)
    if infs[1]:
        return (z3 - z4) / (z1 - z4)
    if infs[2]:
        return (z1 - z2) / (z1 - z4)
    if infs[3]:
        return (z1 - z2) / (z3 - z2)
    return cross_ratio_value(z1, z2, z3, z4)


def verify_cases_1_2_5(delta: complex, x: complex) -> complex:
    """j6 of the cross ratio (x, -x, 0, inf); the constant of the families 1, 2, 5.

    Also checks that the two 4-torsion x-images 0 and inf double to the
    2-torsion image -delta, tying the configuration to the curve.
    """
    if x == 0 or is_inf(x):
        raise ValueError("x must avoid the 4-torsion images 0 and infinity")
    for x4 in (0j, INF):
        doubled = jac_double_x(x4, delta)
        if abs(doubled + delta) > 1e-9 * (1 + abs(delta)):
            raise AssertionError("4-torsion image does not double to the 2-torsion image")
    return j6_value(cross_ratio_ext(x, -x, 0j, INF))


def verify_case_10(delta: complex, branch_a: int = 1, branch_b: int = 1) -> complex:
    """Cross ratio (a^2 - b^2)/(1 - a^2 b^2) from the closed forms for a^2, b^2.

    The value is -i or +i depending on the branch pair; its j6 is 1/2.
    """
    if branch_a not in (1, -1) or branch_b not in (1, -1):
        raise ValueError("branches must be +-1")
    w = cmath.sqrt(delta ** 4 - 1)
    a2 = delta ** -2 + branch_a * 1j * delta ** -2 * w
    b2 = delta ** 2 + branch_b * w
    den = 1 - a2 * b2
    if abs(den) < 1e-12:
        raise ValueError("degenerate parameter: branch collision")
    return (a2 - b2) / den


@dataclass(frozen=True)
class Cases67Report:
    product_of_roots: complex  # must be -1
    resolvent_error: float  # cubic in the pairing sums vs x^3 + 4(d^2 + d^-2)
    pairing_ratio: complex  # (ac+bd)/(ad+bc), a primitive cube root of unity
    displayed_ratio: complex  # ((ad+bc)+(ac+bd))/((ad+bc)+abcd+1) = -omega^2
    j6_case_6: complex
    j6_case_7: complex


def verify_cases_6_7(delta: complex, rng=None) -> Cases67Report:
    """Check the quartic-root identities behind the order-6 families.

    Roots a, b, c, d of x^4 + 2dx^3 - 2x/d - 1 are the x-images of four
    3-torsion points.  Mixing the three involutions x -> -x, 1/x, -1/x over
    the coordinates produces the two order-6 families, with j6 constants 0
    and 8/3.
    """
    roots = sorted_roots([1, 2 * delta, 0, -2 / delta, -1], rng=rng)
    a = roots[0]
    prod_roots = complex(np.prod(roots))
    best = None
    for i, j, k in ((1, 2, 3), (1, 3, 2), (2, 1, 3), (2, 3, 1), (3, 1, 2), (3, 2, 1)):
        b, c, d = roots[i], roots[j], roots[k]
        ratio = (a * c + b * d) / (a * d + b * c)
        if best is None or abs(ratio - OMEGA) < abs(best[0] - OMEGA):
            best = (ratio, b, c, d)
    ratio, b, c, d = best
    sums = [a * b + c * d, a * c + b * d, a * d + b * c]
    e1 = sum(sums)
    e2 = sums[0] * sums[1] + sums[0] * sums[2] + sums[1] * sums[2]
    e3 = sums[0] * sums[1] * sums[2]
    target = -4 * (delta ** 2 + delta ** -2)
    resolvent_error = max(abs(e1), abs(e2), abs(e3 - target))
    displayed = ((a * d + b * c) + (a * c + b * d)) / ((a * d + b * c) + (prod_roots + 1))
    cr6 = cross_ratio_value(a, -b, 1 / c, -1 / d)
    cr7 = cross_ratio_value(1 / a, 1 / b, -1 / c, -1 / d)
    cr7_check = cross_ratio_value(a, b, -c, -d)
    if abs(cr7 - cr7_check) > 1e-8 * (1 + abs(cr7)):
        raise AssertionError("inversion did not preserve the cross ratio")
    return Cases67Report(
        product_of_roots=prod_roots,
        resolvent_error=resolvent_error,
        pairing_ratio=ratio,
        displayed_ratio=displayed,
        j6_case_6=j6_value(cr6),
        j6_case_7=j6_value(cr7),
    )


# ---------------------------------------------------------------------------
# Cubic (Hessian) model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HessPoint:
    """Projective point, normalized so the largest-magnitude coordinate is 1."""

    x: complex
    y: complex
    z: complex

    @classmethod
    def of(cls, x: complex, y: complex, z: complex) -> "HessPoint":
        m = max(abs(x), abs(y), abs(z))
        if m < 1e-12:
            raise DegeneratePointError("projective point degenerated to (0:0:0)")
        for c in (x, y, z):
            if abs(c) == m:
                return cls(x / c, y / c, z / c)
        raise AssertionError("unreachable")

    def close_to(self, other: "HessPoint", tol: float = 1e-9) -> bool:
        cross = [
            self.x * other.y - self.y * other.x,
            self.x * other.z - self.z * other.x,
            self.y * other.z - self.z * other.y,
        ]
        return max(abs(c) for c in cross) <= tol


HESS_ORIGIN = HessPoint.of(1, -1, 0)


def hess_residual(P: HessPoint, lam: complex) -> float:
    return abs(P.x ** 3 + P.y ** 3 + P.z ** 3 - 3 * lam * P.x * P.y * P.z)


def hess_neg(P: HessPoint) -> HessPoint:
    return HessPoint.of(P.y, P.x, P.z)


def hess_add(P1: HessPoint, P2: HessPoint, lam: complex) -> HessPoint:
    """Chord addition; degenerates on the diagonal, use hess_double there."""
    x1, y1, z1 = P1.x, P1.y, P1.z
    x2, y2, z2 = P2.x, P2.y, P2.z
    return HessPoint.of(
        y1 ** 2 * x2 * z2 - y2 ** 2 * x1 * z1,
        x1 ** 2 * y2 * z2 - x2 ** 2 * y1 * z1,
        z1 ** 2 * x2 * y2 - z2 ** 2 * x1 * y1,
    )


def hess_double(P: HessPoint, lam: complex) -> HessPoint:
    x, y, z = P.x, P.y, P.z
    return HessPoint.of(
        y * (x ** 3 - z ** 3),
        x * (z ** 3 - y ** 3),
        z * (y ** 3 - x ** 3),
    )


def hess_pi(P: HessPoint) -> XValue:
    """The double-cover coordinate -(x + y)/z."""
    if abs(P.z) <= 1e-13 * max(abs(P.x), abs(P.y)):
        return INF
    return -(P.x + P.y) / P.z


HESS_THREE_TORSION = (
    (1, -1, 0),
    (1, -OMEGA, 0),
    (1, -OMEGA ** 2, 0),
    (0, 1, -1),
    (0, 1, -OMEGA),
    (0, 1, -OMEGA ** 2),
    (-1, 0, 1),
    (-OMEGA, 0, 1),
    (-(OMEGA ** 2), 0, 1),
)


def _two_torsion_x(lam: complex, index: int, rng=None) -> complex:
    """A root a of 2a^3 + 1 = 3*lam*a^2; (a:a:1) is then a 2-torsion point."""
    roots = sorted_roots([2, -3 * lam, 0, 1], rng=rng)
    return complex(roots[index % 3])


@dataclass(frozen=True)
class Cases389Report:
    ratio_1: complex  # = omega, the order-{3,3,6,6} family constant source
    ratio_2: complex  # = -omega^2, the all-order-6 single-translate family
    j6_ratio_1: complex  # 8/3
    j6_ratio_2: complex  # 0
    j6_three_torsion: complex  # 0, from the raw 3-torsion images
    image_error: float  # addition-law images vs the closed forms


def verify_cases_3_8_9(lam: complex, root_index: int = 0, rng=None) -> Cases389Report:
    a = _two_torsion_x(lam, root_index, rng=rng)
    Q = HessPoint.of(a, a, 1)
    if hess_residual(Q, lam) > 1e-8 * (1 + abs(a) ** 3):
        raise AssertionError("2-torsion point does not lie on the curve")
    if not hess_double(Q, lam).close_to(HESS_ORIGIN, 1e-8):
        raise AssertionError("claimed 2-torsion point does not double to the origin")
    P0 = HessPoint.of(1, -OMEGA, 0)
    P1 = HessPoint.of(-1, 0, 1)
    P2 = HessPoint.of(-OMEGA, 0, 1)
    P3 = HessPoint.of(-(OMEGA ** 2), 0, 1)
    closed = [
        a,
        -1 - 1 / a,
        -OMEGA - OMEGA ** 2 / a,
        -(OMEGA ** 2) - OMEGA / a,
    ]
    images = [hess_pi(hess_add(P, Q, lam)) for P in (P0, P1, P2, P3)]
    image_error = max(abs(i - c) for i, c in zip(images, closed))

    ratio_1 = (1 + OMEGA + OMEGA ** 2 / a) / (1 + OMEGA ** 2 + OMEGA / a)
    z2, z3, z4 = closed[1], closed[2], closed[3]
    ratio_2 = ((a - z3) * (z2 - z4)) / ((a - z4) * (z2 - z3))
    j6_raw = j6_value(cross_ratio_ext(INF, 1, OMEGA, OMEGA ** 2))
    return Cases389Report(
        ratio_1=ratio_1,
        ratio_2=ratio_2,
        j6_ratio_1=j6_value(ratio_1),
        j6_ratio_2=j6_value(ratio_2),
        j6_three_torsion=j6_raw,
        image_error=image_error,
    )


@dataclass(frozen=True)
class Case11Report:
    quartic_product: complex  # a1 b1 a2 b2 = c
    pairing_error: float  # |1/x + 1/y + 1/c| over both pairs
    sum_identity: complex  # a1 b1 (a2 + b2) = -1
    cross_ratio: complex  # -omega^2 for the canonical labeling
    j6: complex  # 0


def verify_case_11(lam: complex, c_root_index: int = 0, rng=None) -> Case11Report:
    c = _two_torsion_x(lam, c_root_index, rng=rng)
    roots = sorted_roots([c, 2 * c ** 2, 2 * c ** 3 + 1, 2 * c, c ** 2], rng=rng)

    def partner(x: complex) -> complex:
        return -c * x / (x + c)

    remaining = list(roots)
    a1 = remaining.pop(0)
    target = partner(a1)
    b1 = min(remaining, key=lambda z: abs(z - target))
    remaining.remove(b1)
    a2, b2 = remaining
    pairing_error = max(
        abs(1 / a1 + 1 / b1 + 1 / c),
        abs(1 / a2 + 1 / b2 + 1 / c),
    )
    product = a1 * b1 * a2 * b2
    sum_identity = a1 * b1 * (a2 + b2)

    best_cr = None
    for p, q in ((a1, b1), (b1, a1), (a2, b2), (b2, a2)):
        s = (a2 + b2) if p in (a1, b1) else (a1 + b1)
        zp = (q + 1) / p
        zq = (OMEGA * q + OMEGA ** 2) / p
        zr = (OMEGA ** 2 * q + OMEGA) / p
        cr = ((zp - zq) * (s - zr)) / ((zp - zr) * (s - zq))
        if best_cr is None or abs(cr - (-OMEGA ** 2)) < abs(best_cr - (-OMEGA ** 2)):
            best_cr = cr
    return Case11Report(
        quartic_product=product,
        pairing_error=pairing_error,
        sum_identity=sum_identity,
        cross_ratio=best_cr,
        j6=j6_value(best_cr),
    )


# ---------------------------------------------------------------------------
# Random-parameter sweeps
# ---------------------------------------------------------------------------


def _diameter(values) -> float:
    v = np.asarray(values, dtype=complex)
    return float(np.max(np.abs(v[:, None] - v[None, :])))


def run_cases_1_2_5_sweep(samples: int = 100, seed: int = 17) -> dict:
    rng = random.Random(seed)
    vals = []
    for _ in range(samples):
        delta = sample_jac_param(rng)
        x = _sample_annulus(rng, 0.2, 4.0)
        vals.append(verify_cases_1_2_5(delta, x))
    return {
        "constant": 27 / 4,
        "max_deviation": float(max(abs(v - 27 / 4) for v in vals)),
        "spread": _diameter(vals),
        "samples": samples,
    }


def run_case_10_sweep(samples: int = 100, seed: int = 17) -> dict:
    rng = random.Random(seed)
    j6s = []
    branch_dev = 0.0
    for _ in range(samples):
        delta = sample_jac_param(rng)
        for ba in (1, -1):
            for bb in (1, -1):
                cr = verify_case_10(delta, ba, bb)
                branch_dev = max(branch_dev, min(abs(cr - 1j), abs(cr + 1j)))
                j6s.append(j6_value(cr))
    return {
        "constant": 0.5,
        "max_cr_deviation_from_pm_i": branch_dev,
        "max_j6_deviation": float(max(abs(v - 0.5) for v in j6s)),
        "spread": _diameter(j6s),
        "samples": samples,
    }


def run_cases_6_7_sweep(samples: int = 100, seed: int = 17) -> dict:
    rng = random.Random(seed)
    prod_dev = res_dev = ratio_dev = disp_dev = j6_6_dev = j6_7_dev = 0.0
    j6_6, j6_7 = [], []
    for _ in range(samples):
        delta = sample_jac_param(rng)
        rep = verify_cases_6_7(delta, rng=rng)
        prod_dev = max(prod_dev, abs(rep.product_of_roots + 1))
        res_dev = max(res_dev, rep.resolvent_error)
        ratio_dev = max(
            ratio_dev, min(abs(rep.pairing_ratio - OMEGA), abs(rep.pairing_ratio - OMEGA ** 2))
        )
        disp_dev = max(disp_dev, abs(rep.displayed_ratio + OMEGA ** 2))
        j6_6_dev = max(j6_6_dev, abs(rep.j6_case_6))
        j6_7_dev = max(j6_7_dev, abs(rep.j6_case_7 - 8 / 3))
        j6_6.append(rep.j6_case_6)
        j6_7.append(rep.j6_case_7)
    return {
        "constants": [0.0, 8 / 3],
        "max_abcd_deviation": prod_dev,
        "max_resolvent_error": res_dev,
        "max_pairing_ratio_deviation": ratio_dev,
        "max_displayed_ratio_deviation": disp_dev,
        "max_j6_deviation": max(j6_6_dev, j6_7_dev),
        "spread": max(_diameter(j6_6), _diameter(j6_7)),
        "samples": samples,
    }


def run_cases_3_8_9_sweep(samples: int = 100, seed: int = 17) -> dict:
    rng = random.Random(seed)
    r1_dev = r2_dev = img_dev = 0.0
    j6_1, j6_2 = [], []
    for k in range(samples):
        lam = sample_hess_param(rng)
        rep = verify_cases_3_8_9(lam, root_index=k % 3, rng=rng)
        r1_dev = max(r1_dev, abs(rep.ratio_1 - OMEGA))
        r2_dev = max(r2_dev, abs(rep.ratio_2 + OMEGA ** 2))
        img_dev = max(img_dev, rep.image_error)
        j6_1.append(rep.j6_ratio_1)
        j6_2.append(rep.j6_ratio_2)
    return {
        "constants": [8 / 3, 0.0],
        "max_ratio1_deviation": r1_dev,
        "max_ratio2_deviation": r2_dev,
        "max_image_error": img_dev,
        "max_j6_deviation": float(
            max(max(abs(v - 8 / 3) for v in j6_1), max(abs(v) for v in j6_2))
        ),
        "spread": max(_diameter(j6_1), _diameter(j6_2)),
        "samples": samples,
    }


def run_case_11_sweep(samples: int = 100, seed: int = 17) -> dict:
    rng = random.Random(seed)
    prod_dev = pair_dev = sum_dev = j6_dev = 0.0
    j6s = []
    for k in range(samples):
        lam = sample_hess_param(rng)
        c = _two_torsion_x(lam, k % 3, rng=rng)
        rep = verify_case_11(lam, c_root_index=k % 3, rng=rng)
        prod_dev = max(prod_dev, abs(rep.quartic_product - c))
        pair_dev = max(pair_dev, rep.pairing_error)
        sum_dev = max(sum_dev, abs(rep.sum_identity + 1))
        j6_dev = max(j6_dev, abs(rep.j6))
        j6s.append(rep.j6)
    return {
        "constant": 0.0,
        "max_product_deviation": prod_dev,
        "max_pairing_error": pair_dev,
        "max_sum_identity_deviation": sum_dev,
        "max_j6_deviation": j6_dev,
        "spread": _diameter(j6s),
        "samples": samples,
    }


CASE_SWEEPS = {
    "1-2-5": run_cases_1_2_5_sweep,
    "10": run_case_10_sweep,
    "6-7": run_cases_6_7_sweep,
    "3-8-9": run_cases_3_8_9_sweep,
    "11": run_case_11_sweep,
}
