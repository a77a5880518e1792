"""Local representation counts rho_{f,A}(q) and the p-adic factors beta_p.

beta_p is the limit over m of the average, over a in (Z/p^m)^d, of
prod_i rho_{f_i, psi_i(a)}(p^m) / p^m. We evaluate the average exactly for
m = 1, 2, ... and stop once two consecutive levels agree.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .forms import QuadForm
from .numtheory import factorize, is_prime, primes_up_to, valuation

DENSITY_MODULUS_CAP = 10**4
BETA_MODULUS_CAP = 3 * 10**3
BETA_GRID_CAP = 10**7
MAX_DIM = 3


def density_cap() -> int:
    return int(os.environ.get("BQF_DENSITY_CAP", DENSITY_MODULUS_CAP))


@dataclass(frozen=True)
class DensityTable:
    form: QuadForm
    modulus: int
    counts: np.ndarray

    def __getitem__(self, A: int) -> int:
        return int(self.counts[A % self.modulus])


@lru_cache(maxsize=512)
def _density_counts(a: int, b: int, c: int, q: int) -> np.ndarray:
    counts = np.zeros(q, dtype=np.int64)
    x = np.arange(q, dtype=np.int64)
    ax2 = (a % q) * (x * x % q) % q
    bx = (b % q) * x % q
    cy2 = (c % q) * (x * x % q) % q
    # blocks of y rows; intermediates stay below q^3
    rows = max(1, (1 << 20) // q)
    for y0 in range(0, q, rows):
        y = x[y0 : y0 + rows, None]
        vals = (ax2[None, :] + bx[None, :] * y + cy2[y0 : y0 + rows, None]) % q
        counts += np.bincount(vals.ravel(), minlength=q)
    counts.setflags(write=False)
    return counts


def build_density_table(f: QuadForm, q: int) -> DensityTable:
    if q < 1:
        raise ValueError("modulus must be positive")
    if q > density_cap():
        raise MemoryError(f"modulus {q} exceeds the density cap {density_cap()}")
    return DensityTable(f, q, _density_counts(f.a, f.b, f.c, q))


def rho(f: QuadForm, A: int, q: int) -> int:
    """Number of (x, y) mod q with f(x, y) = A mod q, assembled over prime powers."""
    if q < 1:
        raise ValueError("modulus must be positive")
    result = 1
    for p, e in factorize(q).factors:
        result *= build_density_table(f, p**e)[A]
    return result


@dataclass(frozen=True)
class LocalFactor:
    prime: int
    m_used: int
    value: Fraction
    stabilized: bool
    history: tuple[Fraction, ...] = field(default=(), compare=False)


def default_m_max(forms: Sequence[QuadForm], p: int) -> int:
    prod = 2 * math.prod(f.D for f in forms)
    return max(4, 2 * valuation(prod, p) + 2)


def _average_numerator(linear, constant, tables, q: int) -> int:
    """Sum over a in (Z/q)^d of prod_i table_i[psi_i(a) mod q], exactly."""
    t, d = len(linear), len(linear[0])
    L = np.array([[x % q for x in row] for row in linear], dtype=np.int64)
    C = np.array([x % q for x in constant], dtype=np.int64)
    # the last coordinate is vectorized, the others are looped in blocks
    last = np.arange(q, dtype=np.int64)
    bound = max(1, math.prod(int(tb.max()) for tb in tables))
    exact_rows = bound * q < 2**62
    outer = q ** (d - 1)
    block = max(1, min(outer, (1 << 20) // q))
    total = 0
    for start in range(0, outer, block):
        idx = np.arange(start, min(start + block, outer), dtype=np.int64)
        coords = []
        rem = idx
        for _ in range(d - 1):
            coords.append(rem % q)
            rem = rem // q
        coords.reverse()
        prod = None
        for i in range(t):
            base = np.full(idx.size, C[i], dtype=np.int64)
            for j in range(d - 1):
                base = (base + L[i, j] * coords[j]) % q
            vals = (base[:, None] + L[i, d - 1] * last[None, :]) % q
            looked = tables[i][vals]
            if exact_rows:
                prod = looked if prod is None else prod * looked
            else:
                looked = looked.astype(object)
                prod = looked if prod is None else prod * looked
        if exact_rows:
            total += sum(int(s) for s in prod.sum(axis=1))
        else:
            total += int(prod.sum())
    return total


def beta_average(linear, constant, forms: Sequence[QuadForm], q: int) -> Fraction:
    """The exact average E_{a mod q} prod_i rho_{f_i, psi_i(a)}(q) / q."""
    d, t = len(linear[0]), len(forms)
    tables = [build_density_table(f, q).counts for f in forms]
    total = _average_numerator(linear, constant, tables, q)
    return Fraction(total, q**d * q**t)


def beta_p(system, forms: Sequence[QuadForm], p: int, m_max: int | None = None) -> LocalFactor:
    """Local factor at p for an affine system (anything with .linear and .constant)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    linear, constant = system.linear, system.constant
    if len(linear) != len(forms):
        raise ValueError("system and form list have different lengths")
    d = len(linear[0])
    if d > MAX_DIM:
        raise ValueError(f"dimension {d} exceeds the supported maximum {MAX_DIM}")
    if m_max is None:
        m_max = default_m_max(forms, p)
    history: list[Fraction] = []
    m = 0
    while m < m_max:
        q = p ** (m + 1)
        if q > BETA_MODULUS_CAP or q**d > BETA_GRID_CAP:
            if not history:
                raise MemoryError(f"p = {p}, d = {d}: even m = 1 exceeds the cost cap")
            break
        m += 1
        history.append(beta_average(linear, constant, forms, q))
        if len(history) >= 2 and history[-1] == history[-2]:
            # m_used is the first level whose value the next level reproduces
            return LocalFactor(p, m - 1, history[-1], True, tuple(history))
    return LocalFactor(p, m, history[-1], False, tuple(history))


@dataclass(frozen=True)
class SingularSeries:
    value: Fraction
    factors: tuple[LocalFactor, ...]
    p_max: int

    @property
    def all_stabilized(self) -> bool:
        return all(lf.stabilized for lf in self.factors)


def singular_series(system, forms: Sequence[QuadForm], p_max: int, m_max: int | None = None) -> SingularSeries:
    factors = tuple(beta_p(system, forms, p, m_max) for p in primes_up_to(p_max)) if p_max >= 2 else ()
    value = math.prod((lf.value for lf in factors), start=Fraction(1))
    return SingularSeries(value, factors, p_max)
