"""Predictors and brute-force verifiers for the structure of supercharacter images."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .cyclotomic import (
    BoundarySpec,
    filled_hypocycloid_contains,
    hypocycloid_radius,
    laurent_eval,
    laurent_image_samples,
    reduction_table,
)
from .errors import BadParameter, HypothesesNotVerified, NotAUnit, NotOfForm
from .evaluate import ValueCloud, image_of, supercharacter_image
from .numtheory import (
    ModulusContext,
    crt_components,
    divisors,
    factorize,
    is_prime,
    prime_power_parts,
)
from .orbits import CyclicAction, PMDecomposition, cyclic_subgroup, orbit, pm_decompose

DEFAULT_TOL = 1e-9


def _xy(z):
    z = np.asarray(z, dtype=complex).ravel()
    return np.column_stack([z.real, z.imag])


def directed_hausdorff(a, b) -> float:
    """max over a of the distance to the nearest point of b."""
    a = np.unique(np.asarray(a, dtype=complex))
    b = np.unique(np.asarray(b, dtype=complex))
    if len(a) == 0:
        return 0.0
    if len(b) == 0:
        return math.inf
    dist, _ = cKDTree(_xy(b)).query(_xy(a))
    return float(dist.max())


def hausdorff(a, b) -> float:
    return max(directed_hausdorff(a, b), directed_hausdorff(b, a))


@dataclass
class Check:
    """One verified claim with the measured quantity it was judged on."""

    claim: str
    passed: bool
    measured: float
    tolerance: float
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------- symmetry


def symmetry_order(n: int, omega: int, r: int = 1) -> int:
    """Order of the rotational part of the guaranteed dihedral symmetry."""
    if math.gcd(omega, n) != 1:
        raise NotAUnit(f"{omega} is not a unit modulo {n}")
    return math.gcd(omega - 1, n // math.gcd(r, n))


def verify_dihedral(cloud: ValueCloud | np.ndarray, k: int, tol: float) -> Check:
    """Compare the image with its rotation by e(1/k) and with its conjugate."""
    pts = cloud.points if isinstance(cloud, ValueCloud) else np.asarray(cloud, complex)
    pts = np.unique(pts)
    rot = hausdorff(pts, pts * np.exp(2j * np.pi / k))
    conj = hausdorff(pts, np.conj(pts))
    worst = max(rot, conj)
    return Check(
        f"{k}-fold dihedral symmetry",
        worst <= tol,
        worst,
        tol,
        {"rotation_distance": rot, "conjugation_distance": conj},
    )


# ---------------------------------------------------------------- real / imaginary


@dataclass
class Realness:
    kind: str  # "real", "real_or_imaginary" or "generic"
    reason: str
    decomposition: Optional[PMDecomposition] = None

    def to_json(self) -> dict:
        out = {"kind": self.kind, "reason": self.reason}
        if self.decomposition is not None:
            dec = self.decomposition
            out["decomposition"] = {
                "k": dec.k,
                "j0": dec.j0,
                "J_plus": sorted(dec.J_plus),
                "J_minus": sorted(dec.J_minus),
            }
        return out


def antisymmetric_decomposition(action: CyclicAction) -> Optional[PMDecomposition]:
    """Smallest even k | n with A = {jn/k + 1} u {jn/k - 1} and J_- = k/2 - J_+."""
    for k in divisors(action.n):
        if k % 2:
            continue
        try:
            dec = pm_decompose(action, k)
        except NotOfForm:
            continue
        if dec.is_antisymmetric():
            return dec
    return None


def realness_classification(
    action: CyclicAction, r: int, decomposition: Optional[PMDecomposition] = None
) -> Realness:
    n = action.n
    if r % n == 0:
        return Realness("real", "r = 0 gives the constant image {1}")
    if action.contains(-1):
        return Realness("real", "-1 lies in A")
    dec = decomposition
    if dec is not None and not dec.is_antisymmetric():
        dec = None
    if dec is None:
        dec = antisymmetric_decomposition(action)
    if dec is None:
        return Realness("generic", "no qualifying decomposition")
    if r % 2 == 0:
        return Realness("real", "antisymmetric decomposition with r even", dec)
    return Realness(
        "real_or_imaginary", "real at even y, imaginary at odd y", dec
    )


def verify_realness(cloud: ValueCloud, realness: Realness, tol: float) -> Check:
    pts = cloud.points
    if realness.kind == "real":
        worst = float(np.abs(pts.imag).max())
    elif realness.kind == "real_or_imaginary":
        even = pts[0::2]
        odd = pts[1::2]
        worst = max(
            float(np.abs(even.imag).max(initial=0.0)),
            float(np.abs(odd.real).max(initial=0.0)),
        )
    else:
        return Check("no realness claim", True, 0.0, tol)
    return Check(f"values {realness.kind.replace('_', ' ')}", worst <= tol, worst, tol)


def explicit_hypotheses(action: CyclicAction, k: int) -> bool:
    """k > 2 even, and A splits as even j for +1 and odd j for -1."""
    if k <= 2 or k % 2 or action.n % k:
        return False
    try:
        dec = pm_decompose(action, k)
    except NotOfForm:
        return False
    return dec.is_parity_split()


def explicit_eval(n: int, k: int, r: int, y: int, hypotheses_verified: bool = True) -> complex:
    """Closed form for the parity-split case: k cos, i k sin, or 0 by y mod k."""
    if not hypotheses_verified:
        raise HypothesesNotVerified("closed form requested without its hypotheses")
    if k <= 2 or k % 2:
        raise BadParameter("k must be an even integer > 2")
    angle = 2 * math.pi * r * y / n
    if y % k == 0:
        return complex(k * math.cos(angle), 0.0)
    if y % k == k // 2:
        return complex(0.0, k * math.sin(angle))
    return 0j


# ---------------------------------------------------------------- ellipses


@dataclass
class EllipseReport:
    p: int
    ellipse_deviation: float  # max |Re^2 + Im^2/p - 1| over p !| y
    real_deviation: float  # max |Im| over p | y
    interval_ok: bool  # p | y values inside [1-p, p-1]
    closed_form_deviation: float  # max |sigma - (p-1)cos(2 pi y/n)| over p | y
    tolerance: float

    @property
    def passed(self) -> bool:
        return (
            self.ellipse_deviation <= self.tolerance
            and self.real_deviation <= self.tolerance
            and self.interval_ok
        )

    def to_json(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


def ellipse_report(cloud: ValueCloud, p: int, tol: float = DEFAULT_TOL) -> EllipseReport:
    n = cloud.n
    if not is_prime(p) or p % 4 != 1:
        raise BadParameter(f"{p} is not a prime congruent to 1 mod 4")
    if n % p:
        raise BadParameter(f"{p} does not divide {n}")
    y = np.arange(n)
    pts = cloud.points
    on = y % p == 0
    off = pts[~on]
    ell = np.abs(off.real**2 + off.imag**2 / p - 1)
    div = pts[on]
    closed = (p - 1) * np.cos(2 * np.pi * y[on] / n)
    return EllipseReport(
        p,
        float(ell.max(initial=0.0)),
        float(np.abs(div.imag).max(initial=0.0)),
        bool(np.all((div.real >= 1 - p - tol) & (div.real <= p - 1 + tol))),
        float(np.abs(div - closed).max(initial=0.0)),
        tol,
    )


def ellipse_primes(cloud: ValueCloud, tol: float = DEFAULT_TOL) -> list:
    """Prime divisors p = 1 mod 4 of n whose ellipse conclusion holds on this cloud."""
    if cloud.n < 2:
        return []
    found = []
    for p, _ in factorize(cloud.n):
        if p % 4 == 1 and ellipse_report(cloud, p, tol).passed:
            found.append(p)
    return found


# ---------------------------------------------------------------- multiplicativity


@dataclass
class SplitComponent:
    modulus: int
    omega: int
    r: int  # x_j * psi_j(r)
    size: int


@dataclass
class MultiplicativeSplit:
    n: int
    components: list
    applicable: bool

    def to_json(self) -> dict:
        return {
            "applicable": self.applicable,
            "components": [asdict(c) for c in self.components],
        }


def multiplicative_split(ctx: ModulusContext, omega: int, r: int) -> MultiplicativeSplit:
    comps = []
    for c in crt_components(ctx):
        w = omega % c.modulus
        rj = c.x * c.reduce(r) % c.modulus
        size = orbit(cyclic_subgroup(c.modulus, w), rj).size
        comps.append(SplitComponent(c.modulus, w, rj, size))
    sizes = [c.size for c in comps]
    applicable = all(
        math.gcd(a, b) == 1 for i, a in enumerate(sizes) for b in sizes[i + 1 :]
    )
    return MultiplicativeSplit(ctx.n, comps, applicable)


def split_product(split: MultiplicativeSplit, ys=None) -> np.ndarray:
    """prod_j sigma_{X_j}(y mod q_j) for each y (all of Z/nZ by default)."""
    ys = np.arange(split.n) if ys is None else np.asarray(ys)
    out = np.ones(len(ys), dtype=complex)
    for c in split.components:
        img = image_of(c.modulus, c.omega, c.r).points
        out *= img[ys % c.modulus]
    return out


def verify_multiplicative(n: int, omega: int, r: int = 1, ys=None) -> Check:
    split = multiplicative_split(ModulusContext.from_modulus(n), omega, r)
    cloud = image_of(n, omega, r)
    tol = DEFAULT_TOL * cloud.d
    if not split.applicable:
        return Check("multiplicative split", False, math.nan, tol, {"applicable": False})
    ys = np.arange(n) if ys is None else np.asarray(ys)
    err = float(np.abs(cloud.points[ys] - split_product(split, ys)).max())
    return Check(
        "sigma equals the product of its prime-power components",
        err <= tol,
        err,
        tol,
        {"sizes": [c.size for c in split.components]},
    )


# ---------------------------------------------------------------- nesting


@dataclass
class NestingReport:
    n: int
    omega: int
    r: int
    reduced_modulus: int  # d' = n / gcd(r, n)
    gcd: int
    xi: int  # unit mod n congruent to r / gcd(r, n) mod d'
    scale: float  # |A| / |psi_{d'}(A)|
    equal_image_distances: dict
    containment_distance: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return (
            max(self.equal_image_distances.values()) <= self.tolerance
            and self.containment_distance <= self.tolerance
        )

    def to_json(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


def _unit_lift(residue: int, dprime: int, n: int) -> int:
    """Least unit modulo n that is congruent to residue modulo d'."""
    x = residue % dprime if dprime > 1 else 0
    while math.gcd(x, n) != 1:
        x += dprime
    return x


def nesting_report(n: int, omega: int, r: int = 1, tol: Optional[float] = None) -> NestingReport:
    action = cyclic_subgroup(n, omega)
    g = math.gcd(r % n, n)
    dprime = n // g
    xi = _unit_lift((r % n) // g, dprime, n)
    reduced = cyclic_subgroup(dprime, omega % dprime)
    scale = action.order / reduced.order
    tol = DEFAULT_TOL * action.order if tol is None else tol

    img_r = supercharacter_image(orbit(action, r)).points
    img_g = supercharacter_image(orbit(action, g)).points
    img_red = supercharacter_image(orbit(reduced, 1)).points
    img_xi = supercharacter_image(orbit(action, xi)).points
    distances = {
        "Ar~A(r,n)": hausdorff(img_r, img_g),
        "Ar~psi(A)1": hausdorff(img_r, img_red),
        "A(r,n)~psi(A)1": hausdorff(img_g, img_red),
    }
    return NestingReport(
        n, omega, r, dprime, g, xi, scale, distances,
        directed_hausdorff(scale * img_red, img_xi), tol,
    )


# ---------------------------------------------------------------- prime powers


@dataclass
class CollapseReport:
    p: int
    a: int
    b: int
    omega: int
    orbit_size: int
    reduced_size: int
    pointwise_error: float  # vs p^b sigma'(y / p^b) on p^b | y, 0 elsewhere
    image_distance: float  # Hausdorff to {0} u p^b * image'
    tolerance: float

    @property
    def passed(self) -> bool:
        return max(self.pointwise_error, self.image_distance) <= self.tolerance

    def to_json(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


def prime_power_collapse(p: int, a: int, b: int, omega: int, tol: Optional[float] = None) -> CollapseReport:
    """Check sigma_X over Z/p^a against the scaled reduced character over Z/p^(a-b)."""
    if p < 3 or not is_prime(p):
        raise BadParameter(f"{p} is not an odd prime")
    if not a > b >= 0:
        raise BadParameter("need a > b >= 0")
    q = p**a
    action = cyclic_subgroup(q, omega)
    pb = p**b
    if action.order % pb:
        raise BadParameter(f"{pb} does not divide the orbit size {action.order}")
    low = p ** (a - b)
    reduced = cyclic_subgroup(low, omega % low)
    tol = DEFAULT_TOL * action.order if tol is None else tol

    full = supercharacter_image(orbit(action, 1)).points
    small = supercharacter_image(orbit(reduced, 1)).points
    y = np.arange(q)
    predicted = np.zeros(q, dtype=complex)
    hit = y % pb == 0
    predicted[hit] = pb * small[(y[hit] // pb) % low]
    target = pb * small
    if b > 0:
        target = np.append(target, 0)
    return CollapseReport(
        p, a, b, omega % q, action.order, reduced.order,
        float(np.abs(full - predicted).max()),
        hausdorff(full, target),
        tol,
    )


# ---------------------------------------------------------------- boundaries


def boundary_predict(q: int, d: int) -> BoundarySpec:
    parts = prime_power_parts(q)
    if parts is None or parts[0] == 2:
        raise BadParameter(f"{q} is not a power of an odd prime")
    p = parts[0]
    if d < 1 or (p - 1) % d:
        raise BadParameter(f"{d} does not divide {p} - 1")
    if d % 2 == 0:
        return BoundarySpec.real_segment(d)
    if d >= 3 and is_prime(d):
        return BoundarySpec.hypocycloid(d)
    return BoundarySpec.laurent(d)


@dataclass
class BoundaryCheck:
    spec: BoundarySpec
    containment: Check
    torus_identity_error: float  # |sigma(y) - g(y w^j / q)| maximized over y

    @property
    def passed(self) -> bool:
        return self.containment.passed

    def to_json(self) -> dict:
        return {
            "boundary": self.spec.to_json(),
            "containment": self.containment.to_json(),
            "torus_identity_error": self.torus_identity_error,
            "passed": self.passed,
        }


def torus_angles(q: int, omega: int, phi_d: int, ys=None) -> np.ndarray:
    """The torus point (y w^j / q mod 1)_{j < phi(d)} that maps to sigma_X(y)."""
    ys = np.arange(q) if ys is None else np.asarray(ys)
    powers = np.array([pow(omega, j, q) for j in range(phi_d)], dtype=np.int64)
    return ((ys[:, None].astype(np.int64) * powers[None, :]) % q) / q


def verify_boundary(q: int, omega: int, tol: float = DEFAULT_TOL, laurent_samples: int = 200_000) -> BoundaryCheck:
    cloud = image_of(q, omega)
    d = cloud.d
    spec = boundary_predict(q, d)
    pts = np.unique(cloud.points)
    if spec.kind == "hypocycloid":
        inside = filled_hypocycloid_contains(d, pts, tol)
        # radial excess of the worst point, kept for auditing
        excess = float(np.max(np.abs(pts) - hypocycloid_radius(d, np.angle(pts))))
        contain = Check(f"inside filled {d}-cusped hypocycloid", bool(inside.all()), excess, tol)
    elif spec.kind == "real_segment":
        worst = float(np.abs(pts.imag).max())
        contain = Check("real values in [-d, d]", worst <= tol and np.abs(pts.real).max() <= d + tol, worst, tol)
    else:
        near_tol = 0.05 * d
        samp = laurent_image_samples(spec.table, laurent_samples)
        dist, _ = cKDTree(_xy(samp)).query(_xy(pts))
        worst = float(dist.max())
        contain = Check("near sampled torus image", worst < near_tol, worst, near_tol)
    table = spec.table if spec.table is not None else reduction_table(d)
    ang = torus_angles(q, omega % q, table.phi_d)
    err = float(np.abs(laurent_eval(table, ang) - cloud.points).max())
    return BoundaryCheck(spec, contain, err)


# ---------------------------------------------------------------- full report


@dataclass
class AnalysisReport:
    n: int
    omega: int
    r: int
    d: int
    symmetry_order: int
    realness: Realness
    multiplicative_split: Optional[MultiplicativeSplit]
    nesting: Optional[NestingReport]
    boundary: Optional[BoundarySpec]
    verification: list

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "parameters": {"n": self.n, "omega": self.omega, "r": self.r, "d": self.d},
            "symmetry_order": self.symmetry_order,
            "realness": self.realness.to_json(),
            "multiplicative_split": None if self.multiplicative_split is None else self.multiplicative_split.to_json(),
            "nesting": None if self.nesting is None else self.nesting.to_json(),
            "boundary": None if self.boundary is None else self.boundary.to_json(),
            "verification": [c.to_json() for c in self.verification],
        }


def analyze(n: int, omega: int, r: int = 1, cloud: Optional[ValueCloud] = None) -> AnalysisReport:
    """Predict every structural feature of sigma_X and check each one against the image."""
    action = cyclic_subgroup(n, omega)
    orb = orbit(action, r)
    if cloud is None:
        cloud = supercharacter_image(orb)
    d = orb.size
    tol = DEFAULT_TOL * max(d, 1)
    checks = []

    k = symmetry_order(n, omega, r)
    dihedral = verify_dihedral(cloud, k, 1e-8 * max(d, 1))
    dihedral.detail["proposition"] = "k-fold dihedral symmetry"
    checks.append(dihedral)

    realness = realness_classification(action, r)
    real_check = verify_realness(cloud, realness, tol)
    real_check.detail["proposition"] = "realness"
    checks.append(real_check)

    split = None
    if n >= 2:
        split = multiplicative_split(ModulusContext.from_modulus(n), omega, r)
        if split.applicable and len(split.components) > 1:
            prod = split_product(split)
            err = float(np.abs(prod - cloud.points).max())
            checks.append(Check("multiplicative split", err <= tol, err, tol, {"proposition": "multiplicativity"}))

    nest = nesting_report(n, omega, r)
    checks.append(Check(
        "nesting and image equality",
        nest.passed,
        max(max(nest.equal_image_distances.values()), nest.containment_distance),
        nest.tolerance,
        {"proposition": "nesting"},
    ))

    boundary = None
    parts = prime_power_parts(n) if n >= 2 else None
    if parts and parts[0] != 2 and r % n and math.gcd(r, n) == 1 and (parts[0] - 1) % d == 0:
        # sigma_{Ar}(y) = sigma_A(ry), so a unit r leaves the image unchanged
        bc = verify_boundary(n, omega)
        boundary = bc.spec
        bc.containment.detail["proposition"] = "boundary"
        checks.append(bc.containment)
    elif realness.kind == "real":
        boundary = BoundarySpec.real_segment(d)

    for p in ellipse_primes(cloud):
        rep = ellipse_report(cloud, p)
        checks.append(Check(
            f"ellipse for p={p}", rep.passed, rep.ellipse_deviation, rep.tolerance,
            {"proposition": "ellipse"},
        ))

    return AnalysisReport(n, omega % n, r % n, d, k, realness, split, nest, boundary, checks)
