"""Exact integer arithmetic: factorization, totient, orders, Legendre symbols, CRT data.

Python integers are unbounded, so products of two residues below 2**63 never
overflow; no explicit wide-integer handling is needed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

from .errors import BadModulus, NotAUnit, OutOfRange

MAX_MODULUS = 1 << 63
TRIAL_LIMIT = 10**6

# Deterministic Miller-Rabin witnesses for every n < 3.3e24 (covers 2**63).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def _sieve(limit):
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i, f in enumerate(flags) if f]


_SMALL_PRIMES = _sieve(TRIAL_LIMIT)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random) -> int:
    """Return a nontrivial factor of the odd composite n."""
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: dict, rng: random.Random) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    f = _pollard_brent(n, rng)
    _split(f, out, rng)
    _split(n // f, out, rng)


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as ascending (prime, exponent) pairs."""

    pairs: tuple

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __getitem__(self, i):
        return self.pairs[i]

    @property
    def primes(self):
        return [p for p, _ in self.pairs]

    def value(self) -> int:
        return math.prod(p**a for p, a in self.pairs)


@lru_cache(maxsize=4096)
def factorize(n: int) -> Factorization:
    """Factor 2 <= n < 2**63 by trial division, then Pollard rho on the cofactor."""
    if not 2 <= n < MAX_MODULUS:
        raise OutOfRange(f"factorize needs 2 <= n < 2**63, got {n}")
    found = {}
    m = n
    for p in _SMALL_PRIMES:
        if p * p > m:
            break
        if m % p == 0:
            a = 0
            while m % p == 0:
                m //= p
                a += 1
            found[p] = a
    if m > 1:
        # fixed seed keeps the rho walk, and so timing, reproducible
        _split(m, found, random.Random(m))
    return Factorization(tuple(sorted(found.items())))


def _factor_dict(n: int) -> dict:
    return {} if n == 1 else dict(factorize(n).pairs)


def euler_phi(n: int) -> int:
    if n < 1:
        raise OutOfRange(f"euler_phi needs n >= 1, got {n}")
    result = 1
    for p, a in _factor_dict(n).items():
        result *= p ** (a - 1) * (p - 1)
    return result


def divisors(n: int) -> list:
    """All positive divisors of n, ascending."""
    divs = [1]
    for p, a in _factor_dict(n).items():
        divs = [d * p**e for d in divs for e in range(a + 1)]
    return sorted(divs)


def _phi_factors(n: int) -> dict:
    out = {}
    for p, a in _factor_dict(n).items():
        if a > 1:
            out[p] = out.get(p, 0) + a - 1
        for q, b in _factor_dict(p - 1).items():
            out[q] = out.get(q, 0) + b
    return out


def mul_order(a: int, n: int) -> int:
    """Multiplicative order of a modulo n.

    Starts from phi(n) and strips prime factors while the power stays 1, so the
    cost is polylogarithmic in n rather than linear in phi(n).
    """
    if n < 1:
        raise OutOfRange(f"modulus must be positive, got {n}")
    if n == 1:
        return 1
    a %= n
    if math.gcd(a, n) != 1:
        raise NotAUnit(f"{a} is not a unit modulo {n}")
    order = euler_phi(n)
    for q in _phi_factors(n):
        while order % q == 0 and pow(a, order // q, n) == 1:
            order //= q
    return order


def legendre_symbol(m: int, p: int) -> int:
    """(m|p) for an odd prime p, via Euler's criterion."""
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise BadModulus(f"{p} is not an odd prime")
    t = pow(m % p, (p - 1) // 2, p)
    return -1 if t == p - 1 else t


def inverse_mod(a: int, m: int) -> int:
    try:
        return pow(a, -1, m)
    except ValueError:
        raise NotAUnit(f"{a} is not a unit modulo {m}") from None


@dataclass(frozen=True)
class CRTComponent:
    prime: int
    exponent: int
    modulus: int  # p**a
    x: int  # inverse of n / p**a modulo p**a

    def reduce(self, y):
        """The natural map Z/nZ -> Z/p^aZ (works on ints and integer arrays)."""
        return y % self.modulus


@dataclass(frozen=True)
class ModulusContext:
    n: int
    factorization: Factorization
    totient: int
    crt_inverses: tuple

    @classmethod
    def from_modulus(cls, n: int) -> "ModulusContext":
        fac = factorize(n)
        inverses = []
        for p, a in fac:
            q = p**a
            inverses.append(1 if q == n else inverse_mod(n // q, q))
        return cls(n, fac, euler_phi(n), tuple(inverses))


def crt_components(ctx: ModulusContext) -> list:
    return [
        CRTComponent(p, a, p**a, x)
        for (p, a), x in zip(ctx.factorization, ctx.crt_inverses)
    ]


def prime_power_parts(q: int):
    """Return (p, a) with q == p**a, or None when q is not a prime power."""
    if q < 2:
        return None
    fac = factorize(q)
    return fac[0] if len(fac) == 1 else None
