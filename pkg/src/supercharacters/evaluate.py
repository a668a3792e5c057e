"""Supercharacter evaluation, quadratic Gauss sums, the S_q point sets and coverage."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .cyclotomic import BoundarySpec
from .errors import BadModulus, BadParameter, DimensionMismatch, NoSuchRoot
from .numtheory import euler_phi, factorize, is_prime, mul_order
from .orbits import (
    PARTITION_LIMIT,
    VECTOR_LIMIT,
    Orbit,
    cyclic_subgroup,
    mulmod,
    orbit,
    superclass_labels,
)

# cap on the size of one (reps x orbit) index block
_BLOCK = 1 << 22


def roots_of_unity(n: int) -> np.ndarray:
    """e(j/n) for j < n, with e((n-j)/n) stored as the exact conjugate of e(j/n)."""
    j = np.arange(n // 2 + 1)
    half = np.exp(2j * np.pi * j / n)
    table = np.empty(n, dtype=complex)
    table[: len(half)] = half
    table[len(half) :] = np.conj(half[1 : n - len(half) + 1][::-1])
    if n % 2 == 0:
        table[n // 2] = -1.0  # e(1/2), which exp rounds to -1 + 1.2e-16i
    return table


def supercharacter_value(orbit: Orbit, y: int) -> complex:
    """sigma_X(y) = sum over x in X of e(xy/n), correctly rounded per component."""
    n = orbit.n
    phases = [(int(x) * y) % n for x in orbit.elements.tolist()]
    re = math.fsum(math.cos(2 * math.pi * p / n) for p in phases)
    im = math.fsum(math.sin(2 * math.pi * p / n) for p in phases)
    return complex(re, im)


def _values_at(orbit: Orbit, ys: np.ndarray, table: np.ndarray) -> np.ndarray:
    n = orbit.n
    xs = orbit.elements
    out = np.empty(len(ys), dtype=complex)
    rows = max(1, _BLOCK // max(1, len(xs)))
    for start in range(0, len(ys), rows):
        chunk = ys[start : start + rows]
        idx = mulmod(chunk[:, None], xs[None, :], n)
        # numpy reduces a contiguous last axis pairwise, which bounds roundoff growth
        out[start : start + rows] = table[idx.astype(np.int64)].sum(axis=1)
    return out


@dataclass(frozen=True)
class ValueCloud:
    """The full image y -> sigma_X(y) together with residue labels y mod m."""

    n: int
    omega: int
    r: int
    d: int
    color_modulus: int
    points: np.ndarray = field(repr=False, compare=False)
    labels: np.ndarray = field(repr=False, compare=False)

    @property
    def orbit_descriptor(self):
        return (self.omega, self.r, self.d)

    def distinct_values(self, decimals: int = 9) -> np.ndarray:
        """Distinct points after rounding to the given number of decimals."""
        key = np.round(self.points.real, decimals) + 1j * np.round(self.points.imag, decimals)
        return np.unique(key)


def supercharacter_image(orbit: Orbit, coloring_modulus: int = 1) -> ValueCloud:
    """Evaluate sigma_X on all of Z/nZ.

    One evaluation per superclass, copied across the class; for moduli too large
    for the partition every y is summed directly.
    """
    n = orbit.n
    if not 1 <= coloring_modulus <= max(n, 1):
        raise BadParameter(f"coloring modulus must lie in [1, {n}]")
    table = roots_of_unity(n)
    ys = np.arange(n, dtype=np.int64)
    if n <= PARTITION_LIMIT and n < VECTOR_LIMIT:
        labels = superclass_labels(orbit.action)
        _, reps = np.unique(labels, return_index=True)
        points = _values_at(orbit, ys[reps], table)[labels]
    else:
        points = _values_at(orbit, ys, table)
    points.setflags(write=False)
    action = orbit.action
    return ValueCloud(
        n, action.omega, orbit.r, orbit.size, coloring_modulus, points, ys % coloring_modulus
    )


def supercharacter_image_naive(orbit: Orbit) -> np.ndarray:
    """Per-y direct summation with no superclass sharing; reference path for tests."""
    n = orbit.n
    return _values_at(orbit, np.arange(n, dtype=np.int64), roots_of_unity(n))


def image_of(n: int, omega: int, r: int = 1, coloring_modulus: int = 1) -> ValueCloud:
    return supercharacter_image(orbit(cyclic_subgroup(n, omega), r), coloring_modulus)


def gauss_sum_quadratic(m: int, p: int) -> complex:
    """g(m; p) = sum_{l < p} e(m l^2 / p) by direct summation."""
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise BadModulus(f"{p} is not an odd prime")
    ell = np.arange(p, dtype=object if p >= VECTOR_LIMIT else np.int64)
    phases = ((m % p) * ell * ell) % p
    ang = 2 * np.pi * phases.astype(float) / p
    return complex(math.fsum(np.cos(ang)), math.fsum(np.sin(ang)))


@dataclass(frozen=True)
class SqPointSet:
    """S_q = {(l/q)(1, w, ..., w^(phi(d)-1)) mod 1 : l < q}.

    numerators holds the exact integers l * w^j mod q; points is numerators / q.
    """

    q: int
    d: int
    omega_q: int
    numerators: np.ndarray = field(repr=False, compare=False)

    @property
    def points(self) -> np.ndarray:
        return self.numerators / self.q

    @property
    def dim(self) -> int:
        return self.numerators.shape[1]

    def __len__(self):
        return self.q


def smallest_root_of_order(d: int, q: int) -> int:
    """Least residue of multiplicative order exactly d modulo q."""
    phi = euler_phi(q)
    if phi % d:
        raise NoSuchRoot(f"no element of order {d} modulo {q}")
    for x in range(2, q):
        if math.gcd(x, q) != 1:
            continue
        h = pow(x, phi // d, q)
        if mul_order(h, q) == d:
            break
    else:
        raise NoSuchRoot(f"no element of order {d} modulo {q}")
    # every element of order d is a power of h coprime to d
    return min(pow(h, j, q) for j in range(1, d + 1) if math.gcd(j, d) == 1)


def sq_points(q: int, d: int) -> SqPointSet:
    fac = factorize(q) if q >= 2 else ()
    if len(fac) != 1 or fac[0][0] == 2:
        raise BadParameter(f"{q} is not a power of an odd prime")
    p = fac[0][0]
    if d < 2:
        raise BadParameter("d must be at least 2")
    if (p - 1) % d:
        raise NoSuchRoot(f"{d} does not divide {p} - 1")
    w = smallest_root_of_order(d, q)
    phi = euler_phi(d)
    powers = np.array([pow(w, j, q) for j in range(phi)], dtype=np.int64)
    ell = np.arange(q, dtype=np.int64)
    nums = mulmod(ell[:, None], powers[None, :], q).astype(np.int64)
    nums.setflags(write=False)
    return SqPointSet(q, d, w, nums)


def weyl_statistic(points: SqPointSet, v) -> complex:
    """(1/|S|) sum over u in S of e(u . v).

    The inner products are formed from the exact numerators, so each phase is a
    rational number with denominator q before it is exponentiated.
    """
    v = np.asarray(v, dtype=np.int64)
    if v.shape != (points.dim,):
        raise DimensionMismatch(f"expected a vector of length {points.dim}")
    if not v.any():
        raise BadParameter("v must be nonzero")
    q = points.q
    phase = (points.numerators % q) @ (v % q) % q
    ang = 2 * np.pi * phase / q
    return complex(math.fsum(np.cos(ang)), math.fsum(np.sin(ang))) / q


def weyl_divisible(points: SqPointSet, v) -> bool:
    """Whether q divides f(omega_q) where f has coefficient vector v (exact integers)."""
    value = sum(int(a) * pow(points.omega_q, j, points.q) for j, a in enumerate(v))
    return value % points.q == 0


def _as_points(cloud) -> np.ndarray:
    if isinstance(cloud, ValueCloud):
        return np.asarray(cloud.points)
    return np.asarray(cloud, dtype=complex).ravel()


def coverage_fraction(
    cloud, region: BoundarySpec, grid_cells: int = 32, eps: float = 0.1
) -> float:
    """Fraction of grid cells inside the region that have a cloud point within eps.

    The grid is grid_cells x grid_cells over [-d, d]^2; a cell counts as inside
    when its center lies in the region, and as covered when some cloud point lies
    within eps of that center.
    """
    if grid_cells < 1 or eps <= 0:
        raise BadParameter("grid_cells must be >= 1 and eps > 0")
    d = region.d
    edges = np.linspace(-d, d, grid_cells + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    gx, gy = np.meshgrid(mids, mids)
    centers = (gx + 1j * gy).ravel()
    if region.kind == "hypocycloid":
        inside = region.contains(centers, tol=0.0)
    else:
        inside = region.contains(centers, tol=(edges[1] - edges[0]) / 2)
    centers = centers[inside]
    if len(centers) == 0:
        return 0.0
    pts = _as_points(cloud)
    if len(pts) == 0:
        return 0.0
    pts = np.unique(pts)
    tree = cKDTree(np.column_stack([pts.real, pts.imag]))
    dist, _ = tree.query(np.column_stack([centers.real, centers.imag]))
    return float(np.mean(dist < eps))
