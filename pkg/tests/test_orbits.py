import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from supercharacters.errors import BadParameter, NotAUnit, NotOfForm
from supercharacters.numtheory import mul_order
from supercharacters.orbits import (
    cyclic_subgroup,
    orbit,
    pm_decompose,
    superclass_labels,
    superclass_partition,
)


def brute_orbits(n, omega):
    seen, out = set(), []
    for y in range(n):
        if y in seen:
            continue
        cls, z = [], y
        while z not in cls:
            cls.append(z)
            z = z * omega % n
        seen.update(cls)
        out.append(sorted(cls))
    return out


def test_cyclic_subgroup_examples():
    a = cyclic_subgroup(7, 2)
    assert a.elements.tolist() == [1, 2, 4] and a.order == 3
    assert cyclic_subgroup(31, 1).elements.tolist() == [1]
    b = cyclic_subgroup(855, 164)
    assert b.order == 6 and b.contains(854)


def test_cyclic_subgroup_rejects_nonunit():
    with pytest.raises(NotAUnit):
        cyclic_subgroup(20, 4)


def test_orbit_examples():
    act = cyclic_subgroup(7, 2)
    assert orbit(act, 1).elements.tolist() == [1, 2, 4]
    zero = orbit(act, 0)
    assert zero.elements.tolist() == [0] and zero.size == 1
    big = cyclic_subgroup(20485, 4609)
    assert orbit(big, 1).size == mul_order(4609, 20485) == 8


def test_orbit_nonunit_r_is_smaller():
    act = cyclic_subgroup(62160, 319)
    assert orbit(act, 37).size == len({37 * pow(319, k, 62160) % 62160 for k in range(act.order)})


def test_superclass_partition_examples():
    parts = [p.tolist() for p in superclass_partition(cyclic_subgroup(7, 2))]
    assert parts == [[0], [1, 2, 4], [3, 5, 6]]
    assert len(superclass_partition(cyclic_subgroup(12, 1))) == 12
    parts = [p.tolist() for p in superclass_partition(cyclic_subgroup(5, 4))]
    assert parts == [[0], [1, 4], [2, 3]]


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=2, max_value=600), st.integers(min_value=1, max_value=10**6))
def test_partition_matches_iteration(n, seed):
    units = [u for u in range(1, n) if math.gcd(u, n) == 1] or [1]
    omega = random.Random(seed).choice(units)
    parts = [p.tolist() for p in superclass_partition(cyclic_subgroup(n, omega))]
    assert parts == brute_orbits(n, omega)
    labels = superclass_labels(cyclic_subgroup(n, omega))
    assert labels[0] == 0 and labels.max() == len(parts) - 1


def test_pm_decompose_912():
    dec = pm_decompose(cyclic_subgroup(912, 71), 38)
    assert sorted(dec.J_plus) == [0, 2, 12, 16, 20, 22, 24, 26, 32]
    assert sorted(dec.J_minus) == [3, 7, 17, 19, 25, 31, 33, 35, 37]
    assert dec.is_antisymmetric()
    assert dec.j0 == 3
    assert dec.reconstruct() == set(cyclic_subgroup(912, 71).elements.tolist())


def test_pm_decompose_negation_and_400():
    dec = pm_decompose(cyclic_subgroup(11, 10), 1)
    assert dec.J_plus == dec.J_minus == frozenset({0})
    dec = pm_decompose(cyclic_subgroup(400, 39), 10)
    assert dec.J_plus == frozenset({0, 2, 4, 6, 8})
    assert dec.J_minus == frozenset({1, 3, 5, 7, 9})
    assert dec.is_parity_split()


def test_pm_decompose_errors():
    with pytest.raises(BadParameter):
        pm_decompose(cyclic_subgroup(912, 71), 5)
    with pytest.raises(NotOfForm):
        pm_decompose(cyclic_subgroup(7, 2), 1)


def test_large_modulus_object_path():
    n = (1 << 31) + 11
    act = cyclic_subgroup(n, n - 1)
    assert act.elements.dtype == object and act.order == 2
    assert orbit(act, 5).elements.tolist() == [5, n - 5]


@pytest.mark.parametrize("n, omega", [(912, 71), (20485, 4609), (62160, 319)])
def test_partition_both_labelling_paths(n, omega):
    # the first instance takes the direct walk, the others the graph path
    parts = [p.tolist() for p in superclass_partition(cyclic_subgroup(n, omega))]
    assert parts == brute_orbits(n, omega)
