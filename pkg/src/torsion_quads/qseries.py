"""Truncated Laurent series in fractional powers of q, and the analytic checks.

The multiplicative uniformization of an elliptic curve writes every torsion
point as u = exp(2*pi*i*theta) * q^r.  The coordinate function X(u, q), the
normalized theta product Theta(u, q), cross ratios of X-values and the sextic
invariant j6 all live in the ring of truncated series in t = q^(1/s) with
complex coefficients.  A direct numeric evaluator over sample |q| < 1 serves
as an independent oracle for every series computation.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Optional, Union

import numpy as np

from .torsion_coords import Quad, Rat, TorsionCoord, mod1

ZERO_EPS = 1e-13  # series coefficients below this count as zero
CONSTANCY_TOL = 1e-9
RESIDUAL_TOL = 1e-8

# Extended precision for series coefficients: reciprocals of X-difference
# products reach ~1e6 before cancellation, which costs double precision six
# of its sixteen digits; 80-bit coefficients keep constancy checks at 1e-9
# honest with margin.
COEFF_DTYPE = np.clongdouble
_PI_LD = np.arccos(np.longdouble(-1))


class ZeroSeriesError(ArithmeticError):
    """Inversion of a series whose known coefficients are all (numerically) zero."""


class IdentityPointError(ValueError):
    """The identity point has no finite X-value and a vanishing theta."""


class DegenerateValueError(ValueError):
    """j6 is undefined at z in {0, 1} (and at infinity)."""


@lru_cache(maxsize=None)
def _unit_root_cached(num: int, den: int):
    angle = 2 * _PI_LD * np.longdouble(num) / np.longdouble(den)
    return COEFF_DTYPE(np.cos(angle) + 1j * np.sin(angle))


def unit_root(x: Rat):
    """exp(2*pi*i*x) computed from the exact rational angle, extended precision."""
    x = mod1(x)
    return _unit_root_cached(x.numerator, x.denominator)


@dataclass(frozen=True, order=True)
class UPoint:
    """Multiplicative coordinates of a torsion point: u = e^(2*pi*i*theta) q^r."""

    theta: Rat
    r: Rat

    def __post_init__(self):
        if not 0 <= self.r <= Fraction(1, 2):
            raise ValueError(f"r = {self.r} outside [0, 1/2]")

    @classmethod
    def from_coord(cls, p: TorsionCoord) -> "UPoint":
        return cls(p.theta, p.r)

    @property
    def order(self) -> int:
        return lcm(mod1(self.theta).denominator, self.r.denominator)

    @property
    def is_identity(self) -> bool:
        return self.r == 0 and mod1(self.theta) == 0

    @property
    def zeta(self) -> complex:
        return unit_root(self.theta)


def as_upoint(u) -> UPoint:
    if isinstance(u, UPoint):
        return u
    if isinstance(u, TorsionCoord):
        return UPoint.from_coord(u)
    raise TypeError(f"cannot interpret {u!r} as a torsion point")


@dataclass(frozen=True, eq=False)
class LaurentSeries:
    """Series sum_k c_k q^(k/scale) known for exponents lead <= k <= trunc."""

    scale: int
    lead: int
    coeffs: np.ndarray
    trunc: int

    def __post_init__(self):
        if len(self.coeffs) != self.trunc - self.lead + 1:
            raise ValueError("coefficient array does not span [lead, trunc]")

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_dict(cls, scale: int, terms: dict[int, complex], trunc: int) -> "LaurentSeries":
        lead = min(list(terms) + [0])
        arr = np.zeros(trunc - lead + 1, dtype=COEFF_DTYPE)
        for e, c in terms.items():
            if e <= trunc:
                arr[e - lead] += c
        return cls(scale, lead, arr, trunc)

    @classmethod
    def constant(cls, value: complex, scale: int, trunc: int) -> "LaurentSeries":
        arr = np.zeros(trunc + 1, dtype=COEFF_DTYPE)
        arr[0] = value
        return cls(scale, 0, arr, trunc)

    @classmethod
    def zero(cls, scale: int, trunc: int) -> "LaurentSeries":
        return cls(scale, 0, np.zeros(trunc + 1, dtype=COEFF_DTYPE), trunc)

    # -- bookkeeping -------------------------------------------------------

    def rescale(self, new_scale: int) -> "LaurentSeries":
        if new_scale == self.scale:
            return self
        if new_scale % self.scale:
            raise ValueError(f"cannot rescale {self.scale} -> {new_scale}")
        f = new_scale // self.scale
        arr = np.zeros((self.trunc - self.lead) * f + 1, dtype=COEFF_DTYPE)
        arr[::f] = self.coeffs
        return LaurentSeries(new_scale, self.lead * f, arr, self.trunc * f)

    def _common(self, other: "LaurentSeries") -> tuple["LaurentSeries", "LaurentSeries"]:
        s = lcm(self.scale, other.scale)
        return self.rescale(s), other.rescale(s)

    def shifted(self, units: int) -> "LaurentSeries":
        return LaurentSeries(self.scale, self.lead + units, self.coeffs, self.trunc + units)

    def truncated(self, trunc: int) -> "LaurentSeries":
        if trunc >= self.trunc:
            return self
        if trunc < self.lead:
            return LaurentSeries(self.scale, trunc + 1, np.zeros(0, dtype=COEFF_DTYPE), trunc)
        return LaurentSeries(self.scale, self.lead, self.coeffs[: trunc - self.lead + 1], trunc)

    def lead_index(self) -> Optional[int]:
        idx = np.nonzero(np.abs(self.coeffs) >= ZERO_EPS)[0]
        return int(idx[0]) if len(idx) else None

    def coeff_units(self, units: int) -> complex:
        if units > self.trunc:
            raise ValueError(f"exponent {units}/{self.scale} beyond truncation {self.trunc}")
        if units < self.lead:
            return 0j
        return complex(self.coeffs[units - self.lead])

    def coeff(self, exponent: Rat) -> complex:
        units = exponent * self.scale
        if units.denominator != 1:
            return 0j
        return self.coeff_units(int(units))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if len(self.coeffs) else 0.0

    def items(self):
        for k, c in enumerate(self.coeffs):
            yield self.lead + k, complex(c)

    # -- ring operations ---------------------------------------------------

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.scale, self.lead, -self.coeffs, self.trunc)

    def _add(self, other: "LaurentSeries", sign: int) -> "LaurentSeries":
        f, g = self._common(other)
        lead = min(f.lead, g.lead)
        trunc = min(f.trunc, g.trunc)
        arr = np.zeros(trunc - lead + 1, dtype=COEFF_DTYPE)
        for part, sgn in ((f, 1), (g, sign)):
            take = min(part.trunc, trunc) - part.lead + 1
            if take > 0:
                arr[part.lead - lead : part.lead - lead + take] += sgn * part.coeffs[:take]
        return LaurentSeries(f.scale, lead, arr, trunc)

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = LaurentSeries.constant(other, self.scale, self.trunc)
        return self._add(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            other = LaurentSeries.constant(other, self.scale, self.trunc)
        return self._add(other, -1)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return LaurentSeries(self.scale, self.lead, self.coeffs * other, self.trunc)
        f, g = self._common(other)
        lead = f.lead + g.lead
        trunc = min(f.trunc + g.lead, g.trunc + f.lead)
        conv = np.convolve(f.coeffs, g.coeffs)
        return LaurentSeries(f.scale, lead, conv[: trunc - lead + 1], trunc)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentSeries":
        k0 = self.lead_index()
        if k0 is None:
            raise ZeroSeriesError("cannot invert a numerically zero series")
        lead_units = self.lead + k0
        c0 = self.coeffs[k0]
        a = self.coeffs[k0:] / c0
        b = np.zeros_like(a)
        b[0] = 1
        for k in range(1, len(a)):
            b[k] = -np.dot(a[1 : k + 1], b[:k][::-1])
        return LaurentSeries(self.scale, -lead_units, b / c0, self.trunc - 2 * lead_units)

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex)):
            return self * (1.0 / other)
        return self * other.inverse()

    def evaluate(self, q: complex) -> complex:
        t = complex(q) ** (1.0 / self.scale)
        powers = t ** np.arange(self.lead, self.trunc + 1)
        return complex(np.sum(self.coeffs * powers))


def series_close(f: LaurentSeries, g: LaurentSeries, tol: float) -> bool:
    return (f - g).max_abs() <= tol


# ---------------------------------------------------------------------------
# Tate curve expansions
# ---------------------------------------------------------------------------


def s_k_series(k: int, D: int = 8) -> LaurentSeries:
    """sum_{n>=1} n^k q^n / (1 - q^n); the q^m coefficient is sigma_k(m)."""
    if k not in (1, 3, 5):
        raise ValueError("k must be 1, 3 or 5")
    coeffs = np.zeros(D + 1, dtype=COEFF_DTYPE)
    for n in range(1, D + 1):
        for m in range(n, D + 1, n):
            coeffs[m] += n ** k
    return LaurentSeries(1, 0, coeffs, D)


def a4_series(D: int = 8) -> LaurentSeries:
    return -5 * s_k_series(3, D)


def a6_series(D: int = 8) -> LaurentSeries:
    f = (-1.0 / 12.0) * (5 * s_k_series(3, D) + 7 * s_k_series(5, D))
    rounded = np.round(f.coeffs.real)
    if np.max(np.abs(f.coeffs - rounded)) > 1e-6:
        raise AssertionError("sixth curve coefficient failed the integrality check")
    return LaurentSeries(1, 0, rounded.astype(complex), D)


def _default_scale(u: UPoint) -> int:
    return 2 * u.order


def x_series(u, D: int = 8, scale: Optional[int] = None) -> LaurentSeries:
    """Expansion of X(u, q) to order q^D on the grid q^(1/scale)."""
    u = as_upoint(u)
    if u.is_identity:
        raise IdentityPointError("X is infinite at the identity point")
    if scale is None:
        scale = _default_scale(u)
    T = D * scale
    ru = u.r * scale
    if ru.denominator != 1:
        raise ValueError(f"scale {scale} does not clear the exponent {u.r}")
    ru = int(ru)
    terms: dict[int, complex] = {}

    def add(e: int, c: complex):
        terms[e] = terms.get(e, 0j) + c

    if ru == 0:
        z = u.zeta
        add(0, z / (1 - z) ** 2)
    else:
        m = 1
        while m * ru <= T:
            add(m * ru, m * unit_root(m * u.theta))
            m += 1
    n = 1
    while n * scale - ru <= T:
        for e, sgn in ((n * scale + ru, 1), (n * scale - ru, -1)):
            m = 1
            while m * e <= T:
                add(m * e, m * unit_root(sgn * m * u.theta))
                m += 1
        m = 1
        while m * n * scale <= T:
            add(m * n * scale, -2 * m)
            m += 1
        n += 1
    return LaurentSeries.from_dict(scale, terms, T)


def y_series(u, D: int = 8, scale: Optional[int] = None) -> LaurentSeries:
    """Expansion of Y(u, q) to order q^D on the grid q^(1/scale)."""
    u = as_upoint(u)
    if u.is_identity:
        raise IdentityPointError("Y is infinite at the identity point")
    if scale is None:
        scale = _default_scale(u)
    T = D * scale
    ru = int(u.r * scale)
    terms: dict[int, complex] = {}

    def add(e: int, c: complex):
        terms[e] = terms.get(e, 0j) + c

    if ru == 0:
        z = u.zeta
        add(0, z ** 2 / (1 - z) ** 3)
    else:
        m = 2
        while m * ru <= T:
            add(m * ru, m * (m - 1) / 2 * unit_root(m * u.theta))
            m += 1
    n = 1
    while n * scale - ru <= T:
        e = n * scale + ru
        m = 2
        while m * e <= T:
            add(m * e, m * (m - 1) / 2 * unit_root(m * u.theta))
            m += 1
        e = n * scale - ru
        m = 1
        while m * e <= T:
            add(m * e, -m * (m + 1) / 2 * unit_root(-m * u.theta))
            m += 1
        m = 1
        while m * n * scale <= T:
            add(m * n * scale, m)
            m += 1
        n += 1
    return LaurentSeries.from_dict(scale, terms, T)


def tate_point_residual(u, D: int = 8, scale: Optional[int] = None) -> LaurentSeries:
    """y^2 + xy - x^3 - a4*x - a6 at the point u; vanishes on the curve."""
    u = as_upoint(u)
    if scale is None:
        scale = _default_scale(u)
    X = x_series(u, D, scale)
    Y = y_series(u, D, scale)
    A4 = a4_series(D).rescale(scale)
    A6 = a6_series(D).rescale(scale)
    return Y * Y + X * Y - X * X * X - A4 * X - A6


# ---------------------------------------------------------------------------
# Theta products
# ---------------------------------------------------------------------------


def _theta_series_raw(theta: Rat, rho: Rat, D: int, scale: int) -> LaurentSeries:
    """(1 - u) prod (1-q^n u)(1-q^n u^-1)/(1-q^n)^2 at u = e^(2 pi i theta) q^rho.

    rho may be any rational with |rho| <= 2; negative-exponent factors are
    normalized through (1 - c q^-x) = -c q^-x (1 - c^-1 q^x), which shifts
    the leading exponent of the result.
    """
    if abs(rho) > 2:
        raise ValueError("rho out of the supported range [-2, 2]")
    T = D * scale
    if (rho * scale).denominator != 1:
        raise ValueError(f"scale {scale} does not clear the exponent {rho}")
    pref_units = 0
    pref = 1 + 0j
    const = 1 + 0j
    binomials: list[tuple[int, complex]] = []  # (e > 0, c): factor (1 - c q^(e/scale))

    def push(e: int, angle: Rat):
        nonlocal pref_units, pref, const
        if e > 0:
            if e <= T:
                binomials.append((e, unit_root(angle)))
        elif e == 0:
            if mod1(angle) == 0:
                raise IdentityPointError("theta vanishes identically at the identity point")
            const *= 1 - unit_root(angle)
        else:
            pref_units += e
            pref *= -unit_root(angle)
            push(-e, -angle)

    push(int(rho * scale), theta)
    n = 1
    while (n - 2) * scale <= T:  # generous: covers n - rho <= D for |rho| <= 2
        push(int((n + rho) * scale), theta)
        push(int((n - rho) * scale), -theta)
        n += 1

    unit = np.zeros(T + 1, dtype=COEFF_DTYPE)
    unit[0] = 1
    for e, c in binomials:
        unit[e:] = unit[e:] - c * unit[:-e].copy()
    # divide by (1 - q^n)^2: multiply by sum_k (k+1) q^(nk)
    for n in range(1, D + 1):
        en = n * scale
        geo = np.zeros(T + 1, dtype=COEFF_DTYPE)
        geo[::en][: T // en + 1] = np.arange(1, T // en + 2)
        unit = np.convolve(unit, geo)[: T + 1]
    return LaurentSeries(scale, pref_units, const * pref * unit, T + pref_units)


def theta_series(u, D: int = 8, scale: Optional[int] = None) -> LaurentSeries:
    u = as_upoint(u)
    if u.is_identity:
        raise IdentityPointError("theta vanishes identically at the identity point")
    if scale is None:
        scale = _default_scale(u)
    return _theta_series_raw(u.theta, u.r, D, scale)


def theta_functional_residual(u, D: int = 8, scale: Optional[int] = None) -> LaurentSeries:
    """Theta(q*u, q) + u^-1 Theta(u, q); identically zero."""
    u = as_upoint(u)
    if scale is None:
        scale = _default_scale(u)
    lhs = _theta_series_raw(u.theta, u.r + 1, D, scale)
    rhs = _theta_series_raw(u.theta, u.r, D, scale)
    rhs = (rhs * unit_root(-u.theta)).shifted(-int(u.r * scale))
    return lhs + rhs


def theta_inversion_residual(u, D: int = 8, scale: Optional[int] = None) -> LaurentSeries:
    """Theta(u^-1, q) + u^-1 Theta(u, q); identically zero."""
    u = as_upoint(u)
    if scale is None:
        scale = _default_scale(u)
    lhs = _theta_series_raw(-u.theta, -u.r, D, scale)
    rhs = _theta_series_raw(u.theta, u.r, D, scale)
    rhs = (rhs * unit_root(-u.theta)).shifted(-int(u.r * scale))
    return lhs + rhs


def x_diff_identity_residual(u1, u2, D: int = 6, scale: Optional[int] = None) -> float:
    """Residual of X(u1)-X(u2) = -u2 T(u1 u2) T(u1 u2^-1) / (T(u1)^2 T(u2)^2)."""
    u1, u2 = as_upoint(u1), as_upoint(u2)
    if u1.is_identity or u2.is_identity:
        raise IdentityPointError("the difference formula needs finite X-values")
    if scale is None:
        scale = 2 * lcm(u1.order, u2.order)
    lhs = x_series(u1, D, scale) - x_series(u2, D, scale)
    if u1 == u2:
        return lhs.max_abs()
    num = _theta_series_raw(u1.theta + u2.theta, u1.r + u2.r, D, scale) * _theta_series_raw(
        u1.theta - u2.theta, u1.r - u2.r, D, scale
    )
    t1 = theta_series(u1, D, scale)
    t2 = theta_series(u2, D, scale)
    rhs = num / (t1 * t1 * t2 * t2)
    rhs = (rhs * (-unit_root(u2.theta))).shifted(int(u2.r * scale))
    return (lhs - rhs).max_abs()


# ---------------------------------------------------------------------------
# Cross ratios and the sextic invariant
# ---------------------------------------------------------------------------


def cross_ratio_series(z1: Optional[LaurentSeries], z2, z3, z4) -> LaurentSeries:
    """(z1-z2)(z3-z4) / ((z1-z4)(z3-z2)); pass z1=None for the point at infinity."""
    try:
        if z1 is None:
            return (z3 - z4) / (z3 - z2)
        return ((z1 - z2) * (z3 - z4)) / ((z1 - z4) * (z3 - z2))
    except ZeroSeriesError:
        raise ZeroSeriesError("cross ratio needs pairwise distinct coordinates") from None


def cross_ratio_value(z1: Optional[complex], z2: complex, z3: complex, z4: complex) -> complex:
    if z1 is None:
        return (z3 - z4) / (z3 - z2)
    return ((z1 - z2) * (z3 - z4)) / ((z1 - z4) * (z3 - z2))


def j6_series(z: LaurentSeries) -> LaurentSeries:
    """(z^2 - z + 1)^3 / (z^2 (z - 1)^2), killing the labeling ambiguity."""
    w = z * z - z + 1
    num = w * w * w
    den = (z * z) * ((z - 1) * (z - 1))
    return num / den


def j6_value(z: complex) -> complex:
    if z == 0 or z == 1:
        raise DegenerateValueError(f"j6 undefined at {z}")
    return (z * z - z + 1) ** 3 / (z * z * (z - 1) ** 2)


def _x_series_slots(S: Quad, D: int, scale: int):
    slots = []
    for p in S.points:
        slots.append(None if p.is_identity else x_series(p, D, scale))
    return slots


def mu_series(S: Quad, D: int = 8) -> LaurentSeries:
    """j6 of the cross ratio of the four X-expansions, on the grid q^(1/2n)."""
    scale = 2 * S.common_order
    z1, z2, z3, z4 = _x_series_slots(S, D, scale)
    return j6_series(cross_ratio_series(z1, z2, z3, z4))


@dataclass(frozen=True)
class ConstancyReport:
    is_constant: bool
    constant: Optional[complex]
    first_exponent_units: Optional[int]
    first_exponent: Optional[Fraction]
    first_coeff: Optional[complex]
    scale: int


def is_constant(f: LaurentSeries, tol: float = CONSTANCY_TOL) -> ConstancyReport:
    """Constant when every coefficient away from exponent zero is below tol."""
    for units, c in f.items():
        if units != 0 and abs(c) >= tol:
            return ConstancyReport(False, None, units, Fraction(units, f.scale), c, f.scale)
    const = f.coeff_units(0) if f.lead <= 0 <= f.trunc else 0j
    return ConstancyReport(True, const, None, None, None, f.scale)


# ---------------------------------------------------------------------------
# Direct numeric oracle
# ---------------------------------------------------------------------------

DEFAULT_TERMS = 200


def _check_q(q: complex):
    if not abs(q) < 1:
        raise ValueError(f"|q| = {abs(q)} must be < 1")
    if q == 0:
        raise ValueError("q must be nonzero")


def _u_value(theta: Rat, rho: Rat, q: complex) -> complex:
    return unit_root(theta) * complex(q) ** float(rho)


def s1_value(q: complex, terms: int = DEFAULT_TERMS) -> complex:
    return sum(n * q ** n / (1 - q ** n) for n in range(1, terms + 1))


def x_value(u, q: complex, terms: int = DEFAULT_TERMS) -> complex:
    """X(u, q) by direct two-sided summation."""
    u = as_upoint(u)
    if u.is_identity:
        raise IdentityPointError("X is infinite at the identity point")
    _check_q(q)
    uv = _u_value(u.theta, u.r, q)
    total = uv / (1 - uv) ** 2
    for n in range(1, terms + 1):
        for w in (q ** n * uv, q ** n / uv):
            total += w / (1 - w) ** 2
    return total - 2 * s1_value(q, terms)


def y_value(u, q: complex, terms: int = DEFAULT_TERMS) -> complex:
    """Y(u, q) by direct two-sided summation."""
    u = as_upoint(u)
    if u.is_identity:
        raise IdentityPointError("Y is infinite at the identity point")
    _check_q(q)
    uv = _u_value(u.theta, u.r, q)
    total = 0j
    for n in range(-terms, terms + 1):
        w = q ** n * uv
        total += w ** 2 / (1 - w) ** 3
    return total + s1_value(q, terms)


def theta_value(theta: Rat, rho: Rat, q: complex, terms: int = DEFAULT_TERMS) -> complex:
    """Theta at u = e^(2 pi i theta) q^rho by direct product."""
    _check_q(q)
    uv = _u_value(theta, rho, q)
    total = 1 - uv
    for n in range(1, terms + 1):
        qn = q ** n
        total *= (1 - qn * uv) * (1 - qn / uv) / (1 - qn) ** 2
    return total


def mu_value(S: Quad, q: complex, terms: int = DEFAULT_TERMS) -> complex:
    """j6 of the cross ratio of the four X-values at a sample q."""
    zs = [None if p.is_identity else x_value(p, q, terms) for p in S.points]
    return j6_value(cross_ratio_value(*zs))


def theta_product_ratio(S: Quad, q: complex, terms: int = DEFAULT_TERMS) -> complex:
    """The eight-factor theta ratio equal to the cross ratio of the X-values.

    Falls back to the direct X-value cross ratio when a product u_i u_j^(+-1)
    degenerates to the identity.
    """
    p1, p2, p3, p4 = S.points

    def th(pa: TorsionCoord, pb: TorsionCoord, sign: int) -> complex:
        theta = pa.theta + sign * pb.theta
        rho = pa.r + sign * pb.r
        if mod1(theta) == 0 and mod1(rho) == 0:
            raise IdentityPointError("degenerate theta argument")
        return theta_value(theta, rho, q, terms)

    try:
        num = th(p1, p2, 1) * th(p1, p2, -1) * th(p3, p4, 1) * th(p3, p4, -1)
        den = th(p1, p4, 1) * th(p1, p4, -1) * th(p3, p2, 1) * th(p3, p2, -1)
        return num / den
    except IdentityPointError:
        zs = [None if p.is_identity else x_value(p, q, terms) for p in S.points]
        return cross_ratio_value(*zs)


J6_TAGS = {
    Fraction(27, 4): "27/4",
    Fraction(0): "0",
    Fraction(1, 2): "1/2",
    Fraction(8, 3): "8/3",
}


def match_constant_tag(value: complex, tol: float = 1e-6) -> Optional[str]:
    """Exact table label for a computed constant, when one is within tol."""
    for frac, tag in J6_TAGS.items():
        if abs(value - complex(frac)) <= tol:
            return tag
    return None
