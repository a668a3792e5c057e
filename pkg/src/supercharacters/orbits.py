"""Cyclic unit subgroups acting on Z/nZ, their orbits, and the jn/k +- 1 decomposition."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import BadParameter, NotAUnit, NotOfForm
from .numtheory import mul_order

# products of two residues must fit in int64
VECTOR_LIMIT = 1 << 31
# above this the superclass partition is not materialized
SMALL_WORK = 1 << 16  # n * |A| below which orbits are walked directly
PARTITION_LIMIT = 10**8


def mulmod(a, b, n: int):
    """a * b mod n for ints or int64 arrays without overflow."""
    if n < VECTOR_LIMIT:
        return (np.asarray(a, dtype=np.int64) * np.asarray(b, dtype=np.int64)) % n
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    return (a * b) % n


@dataclass(frozen=True)
class CyclicAction:
    n: int
    omega: int
    order: int
    elements: np.ndarray = field(repr=False, compare=False)  # omega**k, k < order

    def contains(self, a: int) -> bool:
        return bool(np.any(self.elements == a % self.n))


def cyclic_subgroup(n: int, omega: int) -> CyclicAction:
    if n < 1:
        raise BadParameter(f"modulus must be positive, got {n}")
    omega %= n
    if math.gcd(omega, n) != 1:
        raise NotAUnit(f"{omega} is not a unit modulo {n}")
    d = mul_order(omega, n)
    elems = [1 % n]
    for _ in range(d - 1):
        elems.append(elems[-1] * omega % n)
    arr = np.array(elems, dtype=np.int64 if n < VECTOR_LIMIT else object)
    arr.setflags(write=False)
    return CyclicAction(n, omega, d, arr)


@dataclass(frozen=True)
class Orbit:
    action: CyclicAction
    r: int
    elements: np.ndarray = field(repr=False, compare=False)  # sorted, distinct

    @property
    def n(self) -> int:
        return self.action.n

    @property
    def size(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        i = np.searchsorted(self.elements, x % self.n)
        return bool(i < self.size and self.elements[i] == x % self.n)


def orbit(action: CyclicAction, r: int) -> Orbit:
    r %= action.n
    elems = np.unique(mulmod(action.elements, r, action.n))
    if elems.dtype == object:
        elems = np.array(sorted(set(elems.tolist())), dtype=object)
    elems.setflags(write=False)
    return Orbit(action, r, elems)


def superclass_labels(action: CyclicAction) -> np.ndarray:
    """Label each y in Z/nZ by its orbit; labels ascend with each orbit's least element."""
    n = action.n
    if n > PARTITION_LIMIT:
        raise BadParameter(f"refusing to materialize a partition of size {n}")
    y = np.arange(n, dtype=np.int64)
    if n * action.order <= SMALL_WORK:
        # orbit minimum by direct iteration; cheaper than the graph setup here
        low, z = y.copy(), y
        for _ in range(action.order - 1):
            z = z * action.omega % n
            np.minimum(low, z, out=low)
        return np.unique(low, return_inverse=True)[1].astype(np.int64)
    image = mulmod(y, action.omega, n)
    graph = coo_matrix((np.ones(n, dtype=np.int8), (y, image)), shape=(n, n))
    _, raw = connected_components(graph, directed=True, connection="weak")
    # first occurrence of each raw label is the orbit minimum, since y ascends
    _, first = np.unique(raw, return_index=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first)] = np.arange(len(first))
    return rank[raw]


def superclass_partition(action: CyclicAction) -> list:
    """The orbits of the action on Z/nZ, each a sorted array, ordered by least element."""
    labels = superclass_labels(action)
    order = np.argsort(labels, kind="stable")
    bounds = np.flatnonzero(np.diff(labels[order])) + 1
    return np.split(order, bounds)


@dataclass(frozen=True)
class PMDecomposition:
    """Every element of A written as j n/k + 1 (j in J_plus) or j n/k - 1 (j in J_minus)."""

    n: int
    k: int
    j0: Optional[int]
    J_plus: frozenset
    J_minus: frozenset

    def reconstruct(self) -> set:
        step = self.n // self.k
        return {(j * step + 1) % self.n for j in self.J_plus} | {
            (j * step - 1) % self.n for j in self.J_minus
        }

    def is_antisymmetric(self) -> bool:
        """k even and J_minus == k/2 - J_plus (mod k)."""
        if self.k % 2:
            return False
        half = self.k // 2
        return self.J_minus == frozenset((half - j) % self.k for j in self.J_plus)

    def is_parity_split(self) -> bool:
        """J_plus are exactly the even residues and J_minus the odd ones mod k."""
        evens = frozenset(range(0, self.k, 2))
        odds = frozenset(range(1, self.k, 2))
        return self.k % 2 == 0 and self.J_plus == evens and self.J_minus == odds


def pm_decompose(action: CyclicAction, k: int) -> PMDecomposition:
    n = action.n
    if k < 1 or n % k:
        raise BadParameter(f"{k} does not divide {n}")
    step = n // k
    plus, minus = set(), set()
    for a in action.elements.tolist():
        lo, hi = (a - 1) % n, (a + 1) % n
        fits = False
        if lo % step == 0:
            plus.add(lo // step)
            fits = True
        if hi % step == 0:
            minus.add(hi // step)
            fits = True
        if not fits:
            raise NotOfForm(f"{a} is not of the form j*{step} +- 1 modulo {n}")
    w = (action.omega + 1) % n
    j0 = w // step if w % step == 0 and 1 <= w // step < k else None
    return PMDecomposition(n, k, j0, frozenset(plus), frozenset(minus))
