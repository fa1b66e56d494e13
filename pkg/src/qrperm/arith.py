"""Modular arithmetic kernel: primes, Legendre/Jacobi symbols and residue maps.

Everything here is pure.  ``PrimeCtx`` objects are immutable and cached per
prime, so the O(p^2) verifiers can hit the symbol table without recomputing it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

# Witnesses making Miller-Rabin deterministic below 2**64.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# numpy kernels multiply two residues in int64
NUMPY_MODULUS_LIMIT = 1 << 31


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for every n < 2**64."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
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


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization (intended for n up to ~10^6)."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@lru_cache(maxsize=4096)
def _is_odd_prime(p: int) -> bool:
    return p >= 3 and p % 2 == 1 and is_prime(p)


def _require_odd_prime(p: int) -> None:
    if not _is_odd_prime(p):
        raise ValueError(f"{p} is not an odd prime")


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) by Euler's criterion."""
    _require_odd_prime(p)
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1, by binary reciprocity (no factoring)."""
    if n < 1 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol needs odd positive modulus, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@dataclass(frozen=True)
class ResidueClass:
    value: int
    modulus: int

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.modulus:
            raise ValueError(f"{self.value} is not reduced mod {self.modulus}")

    def __int__(self) -> int:
        return self.value


def residue_ratio(a: int, b: int, n: int) -> ResidueClass:
    """The unique r in [0, n) with a = b*r (mod n), i.e. {a/b}_n."""
    if b == 0 or math.gcd(b, n) != 1:
        raise ValueError(f"gcd({b}, {n}) != 1")
    return ResidueClass(a * pow(b, -1, n) % n, n)


def half_residue(k: int, n: int) -> int:
    """R(k, n): the r in [0, (n-1)/2] with k = r or -r (mod n)."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"modulus must be odd and >= 3, got {n}")
    r = k % n
    return min(r, n - r)


def count_np(x_num: int, x_den: int, p: int) -> int:
    """N_p(x) = #{1 <= k <= (p-1)/2 : {kx}_p > k} for x = x_num/x_den mod p."""
    _require_odd_prime(p)
    if x_den % p == 0:
        raise ValueError(f"{p} divides the denominator {x_den}")
    x = x_num * pow(x_den, -1, p) % p
    k = np.arange(1, (p - 1) // 2 + 1, dtype=np.int64)
    return int(np.count_nonzero(k * x % p > k))


def gauss_lemma_count(x: int, p: int) -> int:
    """#{1 <= k <= (p-1)/2 : {kx}_p > p/2}; its parity gives (x/p)."""
    k = np.arange(1, (p - 1) // 2 + 1, dtype=np.int64)
    return int(np.count_nonzero(2 * (k * (x % p) % p) > p))


def sieve_primes(lo: int, hi: int,
                 residue_filter: Optional[tuple[int, int]] = None) -> list[int]:
    """All primes in [lo, hi], optionally only those = r (mod m), ascending."""
    if lo > hi:
        return []
    lo = max(lo, 2)
    if hi < 2:
        return []
    flags = np.ones(hi + 1, dtype=bool)
    flags[:2] = False
    for q in range(2, math.isqrt(hi) + 1):
        if flags[q]:
            flags[q * q::q] = False
    primes = np.nonzero(flags[lo:])[0] + lo
    if residue_filter is not None:
        r, m = residue_filter
        primes = primes[primes % m == r % m]
    return [int(q) for q in primes]


def smallest_nonresidue(p: int) -> int:
    _require_odd_prime(p)
    for a in range(2, p):
        if legendre(a, p) == -1:
            return a
    raise AssertionError("unreachable for odd primes")


def _find_sqrt_minus_one(p: int) -> Optional[int]:
    if p % 4 != 1:
        return None
    # deterministic scan over 2, 3, 5, ... for a non-residue c; c^((p-1)/4) squares to -1
    c = 2
    while legendre(c, p) != -1:
        c += 1
    return pow(c, (p - 1) // 4, p)


@dataclass(frozen=True)
class PrimeCtx:
    """Precomputed tables for one odd prime p."""

    p: int
    legendre_table: np.ndarray = field(repr=False)
    inverse_table: np.ndarray = field(repr=False)
    sqrt_mod: Optional[int] = None

    @property
    def half(self) -> int:
        return (self.p - 1) // 2

    def symbol(self, a: int) -> int:
        return int(self.legendre_table[a % self.p])

    def squares(self, scale: int = 1) -> np.ndarray:
        """{scale*k^2}_p for k = 1..(p-1)/2 as an int64 array."""
        k = np.arange(1, self.half + 1, dtype=np.int64)
        return (k * k % self.p) * (scale % self.p) % self.p


@lru_cache(maxsize=256)
def prime_ctx(p: int) -> PrimeCtx:
    _require_odd_prime(p)
    if p >= NUMPY_MODULUS_LIMIT:
        raise ValueError(f"{p} exceeds the int64 table limit")
    table = np.full(p, -1, dtype=np.int8)
    k = np.arange(1, p, dtype=np.int64)
    table[k * k % p] = 1
    table[0] = 0
    # inverses via a primitive-root-free recurrence: inv[k] = -(p//k) * inv[p%k]
    inv = [0, 1] + [0] * (p - 2)
    for i in range(2, p):
        inv[i] = (p - (p // i) * inv[p % i] % p) % p
    table.setflags(write=False)
    inv_arr = np.array(inv, dtype=np.int64)
    inv_arr.setflags(write=False)
    return PrimeCtx(p, table, inv_arr, _find_sqrt_minus_one(p))


def prod_mod(values: Sequence[int] | np.ndarray, p: int) -> int:
    """Exact product of residues mod p by pairwise tree reduction."""
    arr = np.asarray(values, dtype=np.int64) % p
    if arr.size == 0:
        return 1 % p
    while arr.size > 1:
        if arr.size % 2:
            arr = np.append(arr, 1)
        arr = arr[0::2] * arr[1::2] % p
    return int(arr[0])


def factorial_mod(n: int, p: int) -> int:
    return prod_mod(np.arange(1, n + 1, dtype=np.int64), p)
