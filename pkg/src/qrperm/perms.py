"""The permutations built from residues mod n, and their signs by inversion counting.

Signs here are always obtained by counting inversions of an explicit image list;
the closed forms (Legendre/Jacobi symbols, factorization criteria) are only ever
used on the other side of a comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import arith
from .pairs import count_dominance, count_upper
from .verdict import Verdict

DOMAINS = ("pi_a", "frobenius", "pi_star", "sigma", "tau", "squares", "list")


@dataclass(frozen=True)
class PermSeq:
    entries: tuple[int, ...]
    domain_desc: str = "list"

    def __post_init__(self) -> None:
        if self.domain_desc not in DOMAINS:
            raise ValueError(f"unknown domain {self.domain_desc!r}")
        if len(set(self.entries)) != len(self.entries):
            raise ValueError("permutation entries must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.entries)


def count_inversions_batch(rows: np.ndarray) -> np.ndarray:
    """Inversion counts #{i < j : x[i] > x[j]} of every row of a 2-D integer array.

    Bottom-up merge sort: at each level the two sorted halves of a block are
    merged and every right-half element learns how many left-half elements
    exceed it from its merged position.  Equal entries never count as an
    inversion (ties are ranked by position first).
    """
    rows = np.atleast_2d(np.asarray(rows))
    R, L = rows.shape
    counts = np.zeros(R, dtype=np.int64)
    if L < 2:
        return counts
    order = np.argsort(rows, axis=1, kind="stable")
    ranks = np.empty((R, L), dtype=np.int64)
    np.put_along_axis(ranks, order, np.arange(L, dtype=np.int64)[None, :].repeat(R, 0), axis=1)
    N = 1 << (L - 1).bit_length()
    cur = np.empty((R, N), dtype=np.int64)
    cur[:, :L] = ranks
    cur[:, L:] = np.arange(L, N, dtype=np.int64)  # padding: larger and increasing
    row_base = (np.arange(R, dtype=np.int64) * N)[:, None]
    pos = np.empty(R * N, dtype=np.int64)
    w = 1
    while w < N:
        nb = N // (2 * w)
        blocks = cur.reshape(R, nb, 2 * w)
        merged = np.sort(blocks, axis=2)
        slot = np.broadcast_to(np.arange(2 * w, dtype=np.int64), (R, nb, 2 * w))
        pos[(merged.reshape(R, N) + row_base).ravel()] = slot.ravel()
        right = blocks[:, :, w:]
        rpos = pos[(right.reshape(R, -1) + row_base).ravel()].reshape(R, nb, w)
        smaller_left = rpos - np.arange(w, dtype=np.int64)
        counts += (w - smaller_left).sum(axis=(1, 2))
        cur = merged.reshape(R, N)
        w *= 2
    return counts


def count_inversions(values) -> int:
    """Inversion count of one sequence (ties allowed, never counted)."""
    arr = np.asarray(values)
    if arr.size < 2:
        return 0
    return int(count_inversions_batch(arr[None, :])[0])


def inversion_sign(seq: PermSeq) -> tuple[int, int]:
    """(sign, inversions) of a permutation given by its image list."""
    inv = count_inversions(np.array(seq.entries, dtype=np.int64))
    return (-1 if inv % 2 else 1), inv


def _sign(count) -> int:
    return -1 if int(count) % 2 else 1


# ---------------------------------------------------------------- constructions

def _units(m: int) -> np.ndarray:
    k = np.arange(1, m, dtype=np.int64)
    return k[np.gcd(k, m) == 1]


def _euler_phi(m: int) -> int:
    phi = m
    for q in arith.factorize(m):
        phi = phi // q * (q - 1)
    return phi


def _powmod_vec(base: np.ndarray, e: int, m: int) -> np.ndarray:
    result = np.ones_like(base)
    b = base % m
    while e:
        if e & 1:
            result = result * b % m
        b = b * b % m
        e >>= 1
    return result


def inverses_mod(units: np.ndarray, m: int) -> np.ndarray:
    """Vectorised inverses of units mod m via k^(phi(m)-1)."""
    if m >= 1 << 31:
        raise ValueError("modulus too large for int64 kernels")
    if m == 1:
        return np.zeros_like(units)
    return _powmod_vec(units.astype(np.int64), _euler_phi(m) - 1, m)


def zolotarev_perm(a: int, n: int, variant: str = "prime_1_to_p-1") -> PermSeq:
    if math.gcd(a, n) != 1:
        raise ValueError(f"gcd({a}, {n}) != 1")
    if variant == "prime_1_to_p-1":
        if not arith.is_prime(n) or n < 3:
            raise ValueError(f"{n} is not an odd prime")
        k = np.arange(1, n, dtype=np.int64)
        return PermSeq(tuple(int(v) for v in k * (a % n) % n), "pi_a")
    if variant == "frobenius_0_to_n-1":
        k = np.arange(0, n, dtype=np.int64)
        return PermSeq(tuple(int(v) for v in k * (a % n) % n), "frobenius")
    raise ValueError(f"unknown variant {variant!r}")


def zolotarev_sign(a: int, n: int, variant: str = "prime_1_to_p-1") -> int:
    """Sign of k -> {ak}_n, by inversion counting."""
    return inversion_sign(zolotarev_perm(a, n, variant))[0]


def pan_perm(a: int, n: int) -> PermSeq:
    if n < 3 or n % 2 == 0:
        raise ValueError(f"need odd n > 1, got {n}")
    if math.gcd(a, n) != 1:
        raise ValueError(f"gcd({a}, {n}) != 1")
    k = np.arange(1, (n - 1) // 2 + 1, dtype=np.int64)
    r = k * (a % n) % n
    return PermSeq(tuple(int(v) for v in np.minimum(r, n - r)), "pi_star")


def pan_sign(a: int, n: int) -> int:
    return inversion_sign(pan_perm(a, n))[0]


def multiplier_signs(n: int, variant: str) -> dict[int, int]:
    """Signs of k -> {ak}_n (variant 'prime'/'frobenius') or pi*_a ('pan') for all units a."""
    a = _units(n)
    if variant == "prime":
        k = np.arange(1, n, dtype=np.int64)
        rows = a[:, None] * k[None, :] % n
    elif variant == "frobenius":
        k = np.arange(0, n, dtype=np.int64)
        rows = a[:, None] * k[None, :] % n
    elif variant == "pan":
        k = np.arange(1, (n - 1) // 2 + 1, dtype=np.int64)
        r = a[:, None] * k[None, :] % n
        rows = np.minimum(r, n - r)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    counts = count_inversions_batch(rows)
    return {int(x): _sign(c) for x, c in zip(a, counts)}


def sigma_tau_perms(m: int) -> tuple[PermSeq, PermSeq]:
    if m < 3 or m % 2 == 0:
        raise ValueError(f"need odd m >= 3, got {m}")
    units = _units(m)
    inv = inverses_mod(units, m)
    half = units <= (m - 1) // 2
    folded = np.minimum(inv[half], m - inv[half])
    return (PermSeq(tuple(int(v) for v in inv), "sigma"),
            PermSeq(tuple(int(v) for v in folded), "tau"))


def sigma_tau_signs(m: int) -> tuple[int, int]:
    """(sign sigma_m, sign tau_m), each from an explicit inversion count."""
    if m < 3 or m % 2 == 0:
        raise ValueError(f"need odd m >= 3, got {m}")
    units = _units(m)
    inv = inverses_mod(units, m)
    half = units <= (m - 1) // 2
    folded = np.minimum(inv[half], m - inv[half])
    return _sign(count_inversions(inv)), _sign(count_inversions(folded))


def theorem_1_1_closed_form(m: int) -> tuple[int, int]:
    """Signs of sigma_m and tau_m predicted from the factorization of m."""
    fac = sorted(arith.factorize(m).items())
    r = len(fac)
    sigma = -1 if (r == 1 and fac[0][0] % 4 == 1) else 1
    tau_odd = False
    if r == 1:
        p1, a1 = fac[0]
        tau_odd = p1 % 8 == 1 or p1 % 8 == (4 * a1 + 3) % 8
    elif r == 2:
        tau_odd = (fac[0][0] + fac[1][0]) % 4 == 0
    return sigma, (-1 if tau_odd else 1)


def verify_theorem_1_1(m: int) -> Verdict:
    observed = sigma_tau_signs(m)
    expected = theorem_1_1_closed_form(m)
    return Verdict("thm1.1", {"m": m}, observed == expected,
                   lhs=list(observed), rhs=list(expected))


# ---------------------------------------------------------------- S_p statistics

def square_list(p: int) -> PermSeq:
    ctx = arith.prime_ctx(p)
    return PermSeq(tuple(int(v) for v in ctx.squares()), "squares")


def s_count(p: int) -> int:
    """s(p) by direct enumeration of pairs j < k."""
    sq = arith.prime_ctx(p).squares()
    return count_upper(sq, lambda x, y: x > y)


def t_count(p: int) -> int:
    """t(p) = #{j < k : {k^2 - j^2}_p > p/2}, direct enumeration."""
    sq = arith.prime_ctx(p).squares()
    return count_upper(sq, lambda x, y: 2 * ((y - x) % p) > p)


def t_count_fast(p: int) -> int:
    """t(p) in O(n log^2 n): split on whether {k^2} exceeds {j^2}."""
    x = arith.prime_ctx(p).squares().astype(np.int64)
    # y > x:  y - x > p/2  <=>  2x + p < 2y
    up = count_dominance(2 * x + p, 2 * x)
    # y < x:  x - y < p/2; take all descents, drop those with 2x > 2y + p
    far_down = count_dominance(-2 * x, -2 * x - p)
    return up + count_inversions(x) - far_down


@dataclass(frozen=True)
class SpStats:
    p: int
    sign_sp: int
    s_p: int
    t_p: int
    inversions: int = field(default=-1, compare=False)

    def __post_init__(self) -> None:
        if self.sign_sp != _sign(self.s_p):
            raise ArithmeticError(
                f"p={self.p}: merge-sort sign {self.sign_sp} disagrees with s(p)={self.s_p}")


def sp_stats(p: int, fast: bool = False) -> SpStats:
    """s(p), t(p) by direct double loop; sign(S_p) from the merge-sort count.

    With fast=True, s(p) is the merge-sort count itself and t(p) comes from
    t_count_fast; the direct loops stay as the reference.
    """
    sign, inv = inversion_sign(square_list(p))
    if fast:
        return SpStats(p, sign, inv, t_count_fast(p), inv)
    return SpStats(p, sign, s_count(p), t_count(p), inv)
