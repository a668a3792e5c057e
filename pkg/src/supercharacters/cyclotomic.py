"""Cyclotomic polynomials, the power-reduction table, the torus map and hypocycloids."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import BadParameter, DimensionMismatch, OutOfRange
from .numtheory import divisors, euler_phi, factorize, is_prime

MAX_ORDER = 10**5
# d * phi(d) entries; beyond this the dense table stops being useful
MAX_TABLE_ENTRIES = 5 * 10**7


def _mobius(n: int) -> int:
    if n == 1:
        return 1
    fac = factorize(n)
    if any(a > 1 for _, a in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def _mul_binomial(poly, e):
    """poly * (t**e - 1), ascending coefficients."""
    out = [0] * (len(poly) + e)
    for i, c in enumerate(poly):
        out[i + e] += c
        out[i] -= c
    return out


def _div_binomial(poly, e):
    """Exact quotient poly / (t**e - 1); raises if the division leaves a remainder."""
    deg = len(poly) - 1 - e
    quot = [0] * (deg + 1)
    for i in range(deg + 1):
        quot[i] = -poly[i] + (quot[i - e] if i >= e else 0)
    # the top e coefficients must be reproduced by the quotient
    for i in range(deg + 1, len(poly)):
        expect = quot[i - e] if i >= e else 0
        if expect != poly[i]:
            raise ArithmeticError(f"t^{e}-1 does not divide the polynomial")
    return quot


@lru_cache(maxsize=256)
def _cyclotomic(d: int) -> tuple:
    if d == 1:
        return (-1, 1)
    poly = [1]
    negatives = []
    for e in divisors(d):
        mu = _mobius(d // e)
        if mu == 1:
            poly = _mul_binomial(poly, e)
        elif mu == -1:
            negatives.append(e)
    for e in negatives:
        poly = _div_binomial(poly, e)
    return tuple(poly)


def cyclotomic_poly(d: int) -> list:
    """Integer coefficients of the d-th cyclotomic polynomial, lowest degree first.

    Built exactly from the Mobius product of the binomials t**e - 1, e | d.
    """
    if not 1 <= d <= MAX_ORDER:
        raise OutOfRange(f"cyclotomic order must lie in [1, {MAX_ORDER}], got {d}")
    return list(_cyclotomic(d))


@dataclass(frozen=True)
class CyclotomicReduction:
    """Row k holds the coefficients of t**k reduced modulo Phi_d(t)."""

    d: int
    phi_d: int
    rows: np.ndarray = field(repr=False, compare=False)


@lru_cache(maxsize=64)
def reduction_table(d: int) -> CyclotomicReduction:
    if not 1 <= d <= MAX_ORDER:
        raise OutOfRange(f"order must lie in [1, {MAX_ORDER}], got {d}")
    phi = euler_phi(d)
    if d * phi > MAX_TABLE_ENTRIES:
        raise OutOfRange(f"reduction table for d={d} has too many entries")
    poly = cyclotomic_poly(d)
    low = poly[:phi]  # Phi_d is monic, so t**phi == -sum(low[j] t**j)
    rows = np.zeros((d, phi), dtype=np.int64)
    cur = [0] * phi
    cur[0] = 1
    for k in range(d):
        rows[k] = cur
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * l for c, l in zip(cur, low)]
    rows.setflags(write=False)
    return CyclotomicReduction(d, phi, rows)


def laurent_eval(table: CyclotomicReduction, angles) -> complex | np.ndarray:
    """Evaluate sum_k prod_j z_j**b[k, j] with z_j = e(angles[..., j]).

    Accepts one angle vector or a stack of them along leading axes. Phases are
    reduced mod 1 before exponentiation; absolute error stays below d * 1e-14.
    """
    angles = np.asarray(angles, dtype=float)
    if angles.shape[-1:] != (table.phi_d,):
        raise DimensionMismatch(
            f"expected {table.phi_d} angles, got shape {angles.shape}"
        )
    phases = np.mod(angles @ table.rows.T.astype(float), 1.0)
    out = np.exp(2j * np.pi * phases).sum(axis=-1)
    return complex(out) if out.ndim == 0 else out


def prime_power_form_eval(d: int, angles) -> complex | np.ndarray:
    """Closed form of the torus map when d = k**a for an odd prime k.

    g = sum_j z_j + sum_{j <= k**(a-1)} prod_{l < k-1} 1 / z_{j + l k**(a-1)}.
    """
    fac = factorize(d) if d >= 2 else None
    if fac is None or len(fac) != 1 or fac[0][0] == 2:
        raise BadParameter(f"{d} is not a power of an odd prime")
    k, a = fac[0]
    stride = k ** (a - 1)
    phi = euler_phi(d)
    angles = np.asarray(angles, dtype=float)
    if angles.shape[-1:] != (phi,):
        raise DimensionMismatch(f"expected {phi} angles, got shape {angles.shape}")
    z = np.exp(2j * np.pi * angles)
    total = z.sum(axis=-1)
    for j in range(stride):
        idx = [j + l * stride for l in range(k - 1)]
        total = total + np.exp(-2j * np.pi * angles[..., idx].sum(axis=-1))
    return complex(total) if np.ndim(total) == 0 else total


def _check_hypo_order(d):
    if d < 3 or not is_prime(d):
        raise BadParameter(f"hypocycloid order must be a prime >= 3, got {d}")


def hypocycloid_point(d: int, theta):
    """(d-1) e^{i theta} + e^{-i (d-1) theta}: the curve with d cusps at d e(j/d)."""
    theta = np.asarray(theta, dtype=float)
    return (d - 1) * np.exp(1j * theta) + np.exp(-1j * (d - 1) * theta)


def hypocycloid_samples(d: int, count: int) -> np.ndarray:
    _check_hypo_order(d)
    if count < 1:
        raise BadParameter("count must be positive")
    theta = 2 * np.pi * np.arange(count) / count
    return hypocycloid_point(d, theta)


def hypocycloid_radius(d: int, direction) -> np.ndarray:
    """Distance from the origin to the d-cusped hypocycloid along each direction.

    The curve is star-shaped about 0 and its argument increases monotonically on
    [0, pi/d], running from the cusp at d to the inner vertex at angle pi/d. Each
    direction is folded into that wedge by the rotation and reflection symmetries,
    then the curve parameter is found by bisection to double precision.
    """
    direction = np.asarray(direction, dtype=float)
    wedge = 2 * np.pi / d
    phi = np.mod(direction, wedge)
    phi = np.where(phi > wedge / 2, wedge - phi, phi)
    lo = np.zeros_like(phi)
    hi = np.full_like(phi, np.pi / d)
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        below = np.angle(hypocycloid_point(d, mid)) < phi
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return np.abs(hypocycloid_point(d, 0.5 * (lo + hi)))


def filled_hypocycloid_contains(d: int, z, tol: float = 0.0):
    """True where z lies in the filled d-cusped hypocycloid dilated radially by tol."""
    _check_hypo_order(d)
    if tol < 0:
        raise BadParameter("tol must be nonnegative")
    z = np.asarray(z, dtype=complex)
    inside = np.abs(z) <= hypocycloid_radius(d, np.angle(z)) + tol
    return bool(inside) if inside.ndim == 0 else inside


def laurent_image_samples(table: CyclotomicReduction, count: int, seed: int = 0):
    """Random points of the torus map's image, uniform on the torus."""
    rng = np.random.default_rng(seed)
    return laurent_eval(table, rng.random((count, table.phi_d)))


@dataclass(frozen=True)
class BoundarySpec:
    """Predicted region containing a supercharacter image.

    kind is one of "hypocycloid", "laurent", "real_segment", "point_set".
    """

    kind: str
    d: int
    table: Optional[CyclotomicReduction] = None
    endpoints: Optional[tuple] = None
    points: Optional[tuple] = None

    def __post_init__(self):
        if self.kind == "hypocycloid":
            _check_hypo_order(self.d)
        elif self.kind == "real_segment":
            lo, hi = self.endpoints
            if not lo <= hi:
                raise BadParameter("segment endpoints out of order")
        elif self.kind == "laurent":
            if self.table is None:
                raise BadParameter("laurent boundary needs a reduction table")
        elif self.kind == "point_set":
            if self.points is None:
                raise BadParameter("point_set boundary needs points")
        else:
            raise BadParameter(f"unknown boundary kind {self.kind!r}")

    @classmethod
    def hypocycloid(cls, d):
        return cls("hypocycloid", d)

    @classmethod
    def laurent(cls, d):
        return cls("laurent", d, table=reduction_table(d))

    @classmethod
    def real_segment(cls, d, lo=None, hi=None):
        return cls("real_segment", d, endpoints=(-d if lo is None else lo, d if hi is None else hi))

    def contains(self, z, tol: float = 1e-9, samples: int = 200_000):
        """Membership test; approximate (sample-based, within tol) for laurent/point_set."""
        z = np.asarray(z, dtype=complex)
        if self.kind == "hypocycloid":
            return filled_hypocycloid_contains(self.d, z, tol)
        if self.kind == "real_segment":
            lo, hi = self.endpoints
            return (np.abs(z.imag) <= tol) & (z.real >= lo - tol) & (z.real <= hi + tol)
        from scipy.spatial import cKDTree

        ref = (
            laurent_image_samples(self.table, samples)
            if self.kind == "laurent"
            else np.asarray(self.points, dtype=complex)
        )
        tree = cKDTree(np.column_stack([ref.real, ref.imag]))
        dist, _ = tree.query(np.column_stack([z.ravel().real, z.ravel().imag]))
        return (dist <= tol).reshape(z.shape)

    def outline(self, count: int = 2048) -> np.ndarray:
        """Points along the boundary, suitable for drawing as a polyline."""
        if self.kind == "hypocycloid":
            pts = hypocycloid_samples(self.d, count)
            return np.append(pts, pts[:1])
        if self.kind == "real_segment":
            return np.array(self.endpoints, dtype=complex)
        if self.kind == "laurent":
            return laurent_image_samples(self.table, count)
        return np.asarray(self.points, dtype=complex)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "d": self.d}
        if self.kind == "real_segment":
            out["endpoints"] = list(self.endpoints)
        elif self.kind == "laurent":
            out["phi_d"] = self.table.phi_d
            out["reduction_rows"] = self.table.rows.tolist()
        elif self.kind == "point_set":
            out["points"] = [[p.real, p.imag] for p in np.asarray(self.points, complex)]
        return out
