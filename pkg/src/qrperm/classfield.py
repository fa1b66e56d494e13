"""Class numbers h(-p), h(p), fundamental units of Q(sqrt p), and Mordell's congruence."""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from . import arith
from .verdict import Verdict


@dataclass(frozen=True)
class QuadUnit:
    """(u + v*sqrt(p)) / denom, with u^2 - p v^2 = norm * denom^2."""

    p: int
    u: int
    v: int
    denom: int
    norm: int

    def __post_init__(self) -> None:
        if self.denom not in (1, 2):
            raise ValueError("denominator must be 1 or 2")
        if self.u * self.u - self.p * self.v * self.v != self.norm * self.denom ** 2:
            raise ArithmeticError(f"({self.u}, {self.v}, {self.denom}) is not a unit of norm {self.norm}")
        if self.denom == 2 and ((self.u - self.v) % 2 or self.p % 4 != 1):
            raise ValueError("half-integer units need u = v (mod 2) and p = 1 (mod 4)")

    def log(self) -> float:
        """Natural log of the unit (> 1), from the big integers directly."""
        # math.log reads the leading bits of arbitrarily large ints; v/u is a
        # correctly rounded big-int quotient, so nothing overflows
        return math.log(self.u) + math.log1p(self.v / self.u * math.sqrt(self.p)) - math.log(self.denom)

    def as_pair(self) -> tuple[Fraction, Fraction]:
        """Rational coordinates (x, y) with unit = x + y*sqrt(p)."""
        return Fraction(self.u, self.denom), Fraction(self.v, self.denom)


def _cf_omega(p: int):
    """Convergents of omega = (1 + sqrt p)/2, yielded as (numerator, denominator)."""
    r = math.isqrt(p)
    P, Q = 1, 2
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    while True:
        a = (P + r) // Q
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        yield h, k
        P = a * Q - P
        Q = (p - P * P) // Q


def fundamental_unit(p: int) -> QuadUnit:
    """Fundamental unit of Q(sqrt p), p = 1 (mod 4) prime, via the continued fraction."""
    if p % 4 != 1 or not arith.is_prime(p):
        raise ValueError(f"{p} is not a prime = 1 (mod 4)")
    for h, k in _cf_omega(p):
        t, u = 2 * h - k, k
        n4 = t * t - p * u * u
        if t > 0 and n4 in (4, -4):
            if t % 2 == 0 and u % 2 == 0:
                return QuadUnit(p, t // 2, u // 2, 1, n4 // 4)
            return QuadUnit(p, t, u, 2, n4 // 4)
    raise AssertionError("unreachable")


def fundamental_unit_bruteforce(p: int, vmax: int = 10**6) -> QuadUnit:
    """Smallest v > 0 with t^2 - p v^2 = +-4; used as an oracle for small p."""
    for v in range(1, vmax):
        for n4 in (-4, 4):
            t2 = p * v * v + n4
            t = math.isqrt(t2) if t2 > 0 else -1
            if t > 0 and t * t == t2:
                if t % 2 == 0 and v % 2 == 0:
                    return QuadUnit(p, t // 2, v // 2, 1, n4 // 4)
                return QuadUnit(p, t, v, 2, n4 // 4)
    raise ValueError(f"no unit with v < {vmax}")


def h_minus_dirichlet(p: int) -> int:
    """h(-p) = -(1/p) sum k (k/p), for primes p = 3 (mod 4)."""
    if p % 4 != 3 or not arith.is_prime(p):
        raise ValueError(f"{p} is not a prime = 3 (mod 4)")
    if p == 3:
        return 1
    ctx = arith.prime_ctx(p)
    k = np.arange(p, dtype=np.int64)
    total = -int(np.dot(k, ctx.legendre_table.astype(np.int64)))
    if total % p:
        raise ArithmeticError(f"weighted symbol sum {total} not divisible by {p}")
    return total // p


def h_minus_forms_oracle(p: int) -> int:
    """Count reduced positive definite forms (A, B, C) of discriminant -p."""
    if p % 4 != 3:
        raise ValueError(f"{p} is not = 3 (mod 4)")
    count = 0
    A = 1
    while 3 * A * A <= p:
        for B in range(-A + 1, A + 1):
            if B % 2 == 0:
                continue
            num = B * B + p
            if num % (4 * A):
                continue
            C = num // (4 * A)
            if C < A:
                continue
            if B < 0 and A == C:
                continue
            count += 1
        A += 1
    return count


def _reduced_indefinite_forms(D: int) -> list[tuple[int, int, int]]:
    """Reduced forms (a, b, c) with b^2 - 4ac = D: 0 < b < sqrt D, |sqrt D - 2|a|| < b."""
    forms = []
    r = math.isqrt(D)
    for b in range(1, r + 1):
        if (b - D) % 2 or b * b >= D:
            continue
        prod = (D - b * b) // 4  # = -a*c > 0
        for d in range(1, math.isqrt(prod) + 1):
            if prod % d:
                continue
            for a_abs in {d, prod // d}:
                for sign in (1, -1):
                    a = sign * a_abs
                    c = -prod // a
                    # sqrt D - 2|a| < b  and  sqrt D - 2|a| > -b
                    lo = b + 2 * a_abs
                    if D < lo * lo and (2 * a_abs <= b or (2 * a_abs - b) ** 2 < D):
                        forms.append((a, b, c))
    return sorted(set(forms))


def _rho(form: tuple[int, int, int], D: int) -> tuple[int, int, int]:
    a, b, c = form
    r = math.isqrt(D)
    m = 2 * abs(c)
    # b' = -b (mod 2|c|), with sqrt D - 2|c| < b' < sqrt D
    top = r  # D is never a square here
    b2 = top - ((top + b) % m)
    a2 = (b2 * b2 - D) // (4 * c)
    return c, b2, a2


def h_plus_cycles(p: int) -> int:
    """Number of cycles of reduced indefinite forms of discriminant p."""
    forms = _reduced_indefinite_forms(p)
    seen: set = set()
    cycles = 0
    for f in forms:
        if f in seen:
            continue
        cycles += 1
        g = f
        while g not in seen:
            seen.add(g)
            g = _rho(g, p)
            if g not in forms:
                raise ArithmeticError(f"rho left the reduced set at {g}")
    return cycles


def log_dirichlet_product(p: int) -> float:
    """log | prod_n (1 - zeta^n)^((n/p)) | = sum (n/p) log(2 sin(pi n / p))."""
    ctx = arith.prime_ctx(p)
    n = np.arange(1, p, dtype=np.int64)
    m = np.minimum(n, p - n)
    terms = ctx.legendre_table[1:].astype(np.float64) * np.log(2.0 * np.sin(np.pi * m / p))
    return math.fsum(terms.tolist())


def h_plus_analytic(p: int, unit: Optional[QuadUnit] = None) -> int:
    unit = unit or fundamental_unit(p)
    value = -log_dirichlet_product(p) / (2.0 * unit.log())
    h = round(value)
    if h < 1 or abs(value - h) > 1e-6:
        raise ArithmeticError(f"h({p}) estimate {value} is not near a positive integer")
    return h


def h_plus(p: int, cross_check: bool = True) -> int:
    """Class number of Q(sqrt p), analytic route with a form-cycle cross-check."""
    if p % 4 != 1 or not arith.is_prime(p):
        raise ValueError(f"{p} is not a prime = 1 (mod 4)")
    h = h_plus_analytic(p)
    if cross_check:
        c = h_plus_cycles(p)
        if c != h:
            raise ArithmeticError(f"h({p}): analytic {h} vs cycle count {c}")
    return h


def mordell_check(p: int) -> Verdict:
    """((p-1)/2)! = (-1)^((h(-p)+1)/2) (mod p) for primes 3 < p = 3 (mod 4)."""
    if p % 4 != 3 or p <= 3:
        raise ValueError(f"need prime p > 3 with p = 3 (mod 4), got {p}")
    fact = arith.factorial_mod((p - 1) // 2, p)
    h = h_minus_dirichlet(p)
    expected = (-1) ** ((h + 1) // 2) % p
    return Verdict("mordell", {"p": p}, fact == expected, lhs=fact, rhs=expected)


# ---------------------------------------------------------------- cached records

@dataclass(frozen=True)
class ClassData:
    p: int
    h_minus: Optional[int] = None
    h_plus: Optional[int] = None
    unit: Optional[QuadUnit] = None

    def __post_init__(self) -> None:
        if self.h_minus is not None and self.p > 3 and self.h_minus % 2 == 0:
            raise ArithmeticError(f"h(-{self.p}) = {self.h_minus} should be odd")

    def to_record(self) -> dict:
        rec = {"p": str(self.p),
               "h_minus": None if self.h_minus is None else str(self.h_minus),
               "h_plus": None if self.h_plus is None else str(self.h_plus)}
        if self.unit is not None:
            rec.update(u=str(self.unit.u), v=str(self.unit.v),
                       denom=str(self.unit.denom), norm=str(self.unit.norm))
        else:
            rec.update(u=None, v=None, denom=None, norm=None)
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "ClassData":
        p = int(rec["p"])
        unit = None
        if rec.get("u") is not None:
            unit = QuadUnit(p, int(rec["u"]), int(rec["v"]), int(rec["denom"]), int(rec["norm"]))
        opt = lambda key: None if rec.get(key) is None else int(rec[key])  # noqa: E731
        return cls(p, opt("h_minus"), opt("h_plus"), unit)


_memo: dict[int, ClassData] = {}
_memo_lock = threading.Lock()


def class_data(p: int) -> ClassData:
    """Class number data for an odd prime p (memoised, thread-safe)."""
    with _memo_lock:
        hit = _memo.get(p)
    if hit is not None:
        return hit
    if p % 4 == 3:
        data = ClassData(p, h_minus=h_minus_dirichlet(p))
    else:
        unit = fundamental_unit(p)
        data = ClassData(p, h_plus=h_plus_analytic(p, unit), unit=unit)
    with _memo_lock:
        _memo.setdefault(p, data)
    return data


def save_cache(records: Iterable[ClassData], path: str | Path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_record()) + "\n")


def load_cache(path: str | Path) -> list[ClassData]:
    out = []
    with open(path, encoding="ascii") as fh:
        for line in fh:
            if line.strip():
                out.append(ClassData.from_record(json.loads(line)))
    return out


def prime_cache(records: Iterable[ClassData]) -> None:
    """Seed the in-process memo table from previously saved records."""
    with _memo_lock:
        for rec in records:
            _memo.setdefault(rec.p, rec)
