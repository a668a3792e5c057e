import math
import random

import numpy as np
import pytest

from supercharacters.analysis import (
    analyze,
    boundary_predict,
    ellipse_primes,
    ellipse_report,
    explicit_eval,
    explicit_hypotheses,
    hausdorff,
    multiplicative_split,
    nesting_report,
    prime_power_collapse,
    realness_classification,
    symmetry_order,
    verify_boundary,
    verify_dihedral,
    verify_multiplicative,
    verify_realness,
)
from supercharacters.errors import BadParameter, HypothesesNotVerified, NotAUnit
from supercharacters.evaluate import image_of, supercharacter_value
from supercharacters.numtheory import ModulusContext, mul_order
from supercharacters.orbits import cyclic_subgroup, orbit


def brute_image_set(n, omega, r):
    """Value set by direct iteration of the orbit and per-y summation."""
    elems = sorted({r * pow(omega, k, n) % n for k in range(n)})
    return np.array(
        [sum(np.exp(2j * np.pi * (x * y % n) / n) for x in elems) for y in range(n)]
    )


def test_hausdorff_basic():
    a = np.array([0, 1, 1j])
    assert hausdorff(a, a) == 0
    assert hausdorff(a, np.array([0, 1])) == pytest.approx(1.0)


@pytest.mark.parametrize(
    "n, w, r, k", [(20485, 4609, 1, 1), (20485 * 6, 4609, 1, 6), (60, 1, 1, 60)]
)
def test_symmetry_order_examples(n, w, r, k):
    assert symmetry_order(n, w, r) == k


def test_symmetry_order_nonunit():
    with pytest.raises(NotAUnit):
        symmetry_order(10, 4)


def test_verify_dihedral_examples():
    cloud = image_of(40970, 4609)
    assert verify_dihedral(cloud, 2, 1e-8).passed
    assert verify_dihedral(cloud, 1, 1e-8).passed
    bare = image_of(20485, 4609)
    assert verify_dihedral(bare, 1, 1e-8).passed
    assert not verify_dihedral(bare, 3, 1e-8).passed


def test_dihedral_holds_on_random_instances():
    rng = random.Random(8)
    for _ in range(30):
        n = rng.randint(20, 3000)
        w = rng.randint(1, n - 1)
        if math.gcd(w, n) != 1:
            continue
        r = rng.randint(0, n - 1)
        cloud = image_of(n, w, r)
        k = symmetry_order(n, w, r)
        assert verify_dihedral(cloud, k, 1e-8 * cloud.d).passed, (n, w, r)


@pytest.mark.parametrize(
    "n, w, r, kind", [(855, 164, 1, "real"), (912, 71, 1, "real_or_imaginary"), (7, 2, 1, "generic")]
)
def test_realness_examples(n, w, r, kind):
    cls = realness_classification(cyclic_subgroup(n, w), r)
    assert cls.kind == kind
    assert verify_realness(image_of(n, w, r), cls, 1e-9).passed


def test_realness_912_decomposition():
    cls = realness_classification(cyclic_subgroup(912, 71), 1)
    assert cls.decomposition.k == 38
    assert cls.decomposition.is_antisymmetric()


def test_realness_classification_never_wrong():
    rng = random.Random(12)
    for _ in range(60):
        n = rng.randint(3, 1500)
        w = rng.randint(1, n - 1)
        if math.gcd(w, n) != 1:
            continue
        r = rng.randint(0, n - 1)
        cls = realness_classification(cyclic_subgroup(n, w), r)
        cloud = image_of(n, w, r)
        assert verify_realness(cloud, cls, 1e-9 * cloud.d).passed, (n, w, r)


def test_explicit_examples():
    x = orbit(cyclic_subgroup(400, 39), 1)
    assert explicit_hypotheses(x.action, 10)
    assert explicit_eval(400, 10, 1, 0) == 10
    v5 = explicit_eval(400, 10, 1, 5)
    assert v5 == pytest.approx(10j * math.sin(math.pi / 40))
    assert abs(v5 - supercharacter_value(x, 5)) < 1e-9
    assert explicit_eval(400, 10, 1, 3) == 0


def test_explicit_matches_direct_for_all_y():
    for r in [1, 3, 7]:
        pts = image_of(400, 39, r).points
        closed = np.array([explicit_eval(400, 10, r, y) for y in range(400)])
        assert np.abs(closed - pts).max() < 1e-9


def test_explicit_refuses_without_hypotheses():
    with pytest.raises(HypothesesNotVerified):
        explicit_eval(400, 10, 1, 1, hypotheses_verified=False)
    with pytest.raises(BadParameter):
        explicit_eval(400, 5, 1, 1)
    assert not explicit_hypotheses(cyclic_subgroup(912, 71), 38)


def test_ellipse_1535():
    cloud = image_of(1535, 613)
    assert ellipse_primes(cloud) == [5]
    rep = ellipse_report(cloud, 5, 1e-8)
    assert rep.passed
    assert rep.closed_form_deviation < 1e-9


def test_ellipse_bad_prime():
    with pytest.raises(BadParameter):
        ellipse_report(image_of(7, 2), 7)


def test_multiplicative_examples():
    (c,) = multiplicative_split(ModulusContext.from_modulus(101), 3, 1).components
    split = multiplicative_split(ModulusContext.from_modulus(15), 2, 1)
    assert [c.size for c in split.components] == [2, 4]
    assert not split.applicable
    assert not verify_multiplicative(15, 2).passed


def _coprime_instance(rng):
    primes = [p for p in range(11, 400) if all(p % q for q in range(2, int(p**0.5) + 1))]
    while True:
        p, q = rng.sample(primes, 2)
        n = p * q
        w = rng.randint(2, n - 1)
        if math.gcd(w, n) == 1 and math.gcd(mul_order(w, p), mul_order(w, q)) == 1:
            return n, w


def test_multiplicative_product_identity_random():
    rng = random.Random(21)
    for _ in range(5):
        n, w = _coprime_instance(rng)
        ys = rng.sample(range(n), 100)
        chk = verify_multiplicative(n, w, 1, ys)
        assert chk.passed and chk.measured < 1e-9, (n, w)


def test_nesting_self():
    rep = nesting_report(912, 71, 1)
    assert rep.reduced_modulus == 912 and rep.scale == 1 and rep.passed


def test_nesting_60():
    rep = nesting_report(60, 7, 6)
    assert rep.reduced_modulus == 10
    assert max(rep.equal_image_distances.values()) < 1e-10
    reduced = np.unique(np.round(image_of(10, 7).points, 10))
    direct = np.unique(np.round(brute_image_set(60, 7, 6), 10))
    assert hausdorff(reduced, direct) < 1e-9


@pytest.mark.parametrize("r", [37, 7, 5, 3, 4, 1])
def test_nesting_62160(r):
    rep = nesting_report(62160, 319, r)
    assert rep.passed, rep.to_json()
    assert rep.reduced_modulus == 62160 // math.gcd(r, 62160)


def test_collapse_examples():
    rep = prime_power_collapse(5, 2, 0, 6)
    assert rep.passed and rep.orbit_size == rep.reduced_size
    rep = prime_power_collapse(5, 2, 1, 6)
    assert rep.passed and rep.pointwise_error < 1e-10
    pts = image_of(25, 6).points
    assert np.abs(pts[np.arange(25) % 5 != 0]).max() < 1e-10
    rep = prime_power_collapse(3, 3, 1, 4)
    assert rep.passed and rep.image_distance < 1e-9


def test_collapse_bad_parameters():
    with pytest.raises(BadParameter):
        prime_power_collapse(4, 2, 1, 3)
    with pytest.raises(BadParameter):
        prime_power_collapse(5, 2, 2, 6)
    with pytest.raises(BadParameter):
        prime_power_collapse(5, 2, 1, 7)  # order 4, not divisible by 5


def test_boundary_predict_kinds():
    assert boundary_predict(2791, 3).kind == "hypocycloid"
    assert boundary_predict(13, 2).kind == "real_segment"
    assert boundary_predict(19, 9).kind == "laurent"
    with pytest.raises(BadParameter):
        boundary_predict(15, 2)


def test_verify_boundary_2791():
    bc = verify_boundary(2791, 800)
    assert bc.passed
    assert bc.torus_identity_error < 1e-9


def test_verify_boundary_laurent_d9():
    # 9 | 36 = 37 - 1; pick an element of order 9
    w = next(x for x in range(2, 37) if mul_order(x, 37) == 9)
    bc = verify_boundary(37, w, laurent_samples=50_000)
    assert bc.spec.kind == "laurent" and bc.passed
    assert bc.torus_identity_error < 1e-9


def test_analyze_report_json():
    rep = analyze(855, 164).to_json()
    assert rep["schema"] == 1
    assert rep["realness"]["kind"] == "real"
    assert all(c["passed"] for c in rep["verification"])
