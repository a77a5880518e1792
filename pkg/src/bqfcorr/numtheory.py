"""Integer utilities: factorization, divisors, the Kronecker symbol."""
from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass
from functools import lru_cache

TRIAL_BOUND = 10**6
MAX_FACTOR_INPUT = 2**63


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    sieve = bytearray([1]) * (TRIAL_BOUND + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(TRIAL_BOUND) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, TRIAL_BOUND + 1, i)))
    return tuple(i for i, v in enumerate(sieve) if v)


@lru_cache(maxsize=1)
def _smallest_factor_table() -> list[int]:
    spf = list(range(TRIAL_BOUND + 1))
    for p in _small_primes():
        if p * p > TRIAL_BOUND:
            break
        if spf[p] == p:
            for k in range(p * p, TRIAL_BOUND + 1, p):
                if spf[k] == k:
                    spf[k] = p
    return spf


def primes_up_to(n: int) -> list[int]:
    if n <= TRIAL_BOUND:
        ps = _small_primes()
        return list(ps[: bisect.bisect_right(ps, n)])
    return [p for p in range(2, n + 1) if is_prime(p)]


# Bases proven sufficient for n < 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for the range we care about."""
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
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g, r, q = 1, 1, 1
        x = ys = y
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


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"malformed factor list {self.factors}")
            last = p
            prod *= p**e
        if prod != self.value:
            raise ValueError(f"factors multiply to {prod}, not {self.value}")

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]


def factorize(n: int) -> Factorization:
    if n < 1:
        raise ValueError(f"factorize needs a positive integer, got {n}")
    if n > MAX_FACTOR_INPUT:
        raise ValueError(f"{n} exceeds the supported range 2**63")
    exps: dict[int, int] = {}
    m = n
    if m <= TRIAL_BOUND:
        spf = _smallest_factor_table()
        while m > 1:
            p = spf[m]
            m //= p
            exps[p] = exps.get(p, 0) + 1
        return Factorization(n, tuple(sorted(exps.items())))
    for p in _small_primes():
        if p * p > m:
            break
        while m % p == 0:
            m //= p
            exps[p] = exps.get(p, 0) + 1
    if m > 1:
        rng = random.Random(m)
        stack = [m]
        while stack:
            k = stack.pop()
            if is_prime(k):
                exps[k] = exps.get(k, 0) + 1
                continue
            d = _pollard_brent(k, rng)
            stack.extend((d, k // d))
    return Factorization(n, tuple(sorted(exps.items())))


def divisors(n: int) -> list[int]:
    """Positive divisors of |n| in increasing order."""
    if n == 0:
        raise ValueError("0 has infinitely many divisors")
    divs = [1]
    for p, e in factorize(abs(n)).factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def num_divisors(n: int) -> int:
    return math.prod(e + 1 for _, e in factorize(abs(n)).factors)


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def is_discriminant(D: int) -> bool:
    return D % 4 in (0, 1)


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def jacobi(a: int, n: int) -> int:
    if n <= 0 or n % 2 == 0:
        raise ValueError("n must be a positive odd integer")
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


def kronecker(D: int, d: int) -> int:
    """Kronecker symbol (D/d) for a discriminant D and d >= 1."""
    if not is_discriminant(D):
        raise ValueError(f"{D} is not a discriminant (must be 0 or 1 mod 4)")
    if d < 1:
        raise ValueError(f"kronecker needs d >= 1, got {d}")
    if math.gcd(D, d) > 1:
        return 0
    v = 0
    while d % 2 == 0:
        d //= 2
        v += 1
    # D odd here whenever v > 0; (D/2) = +1 for D = +-1 mod 8, -1 for D = +-3 mod 8.
    sign = 1
    if v % 2 == 1 and D % 8 in (3, 5):
        sign = -1
    return sign * jacobi(D, d)


def divisor_sum_chi(D: int, n: int) -> int:
    """Sum of kronecker(D, d) over the positive divisors d of |n|."""
    if n == 0:
        raise ValueError("divisor_sum_chi is undefined at n = 0")
    if not is_discriminant(D):
        raise ValueError(f"{D} is not a discriminant (must be 0 or 1 mod 4)")
    # Multiplicative: for p^e, 1 + chi(p) + ... + chi(p)^e.
    total = 1
    for p, e in factorize(abs(n)).factors:
        chi = kronecker(D, p)
        if chi == 0:
            continue
        total *= e + 1 if chi == 1 else (1 if e % 2 == 0 else 0)
    return total
