"""Exact representation numbers r_f(n).

For a positive definite form r_f(n) is the number of integer solutions of
f(x, y) = n divided by the order w(D) of the automorph group. For an
indefinite form it is the number of solutions inside the fundamental cone,
and r_f(-n) = r_{-f}(n).
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .forms import FormClass, QuadForm, classify, normalize_indefinite
from .unitcone import ConePiece, FundamentalCone, cone_pieces, fundamental_cone

DEFAULT_TABLE_CAP = 10**8
_BATCH = 1 << 22


def table_cap() -> int:
    return int(os.environ.get("BQF_TABLE_CAP", DEFAULT_TABLE_CAP))


def automorph_count(D: int) -> int:
    """w(D): 6, 4, 2 for D = -3, -4, D < -4."""
    if D >= 0:
        raise ValueError("w(D) is defined for negative discriminants")
    return {-3: 6, -4: 4}.get(D, 2)


@lru_cache(maxsize=256)
def cone_of(f: QuadForm) -> FundamentalCone:
    return fundamental_cone(f)


@lru_cache(maxsize=256)
def pieces_of(f: QuadForm) -> tuple[ConePiece, ...]:
    return tuple(cone_pieces(cone_of(f)))


@lru_cache(maxsize=256)
def normalized(f: QuadForm) -> QuadForm:
    return f if f.is_normalized_indefinite() else normalize_indefinite(f)


def count_rep_definite(f: QuadForm, n: int) -> int:
    if classify(f) is not FormClass.POSITIVE_DEFINITE:
        raise ValueError(f"count_rep_definite needs a positive definite form, got {f}")
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n == 0:
        return 0
    a, b, D = f.a, f.b, f.D
    y_max = math.isqrt(4 * a * n // -D)
    total = 0
    for y in range(-y_max, y_max + 1):
        disc = D * y * y + 4 * a * n
        if disc < 0:
            continue
        s = math.isqrt(disc)
        if s * s != disc:
            continue
        for root in {s, -s}:
            num = -b * y + root
            if num % (2 * a) == 0:
                total += 1
    w = automorph_count(D)
    if total % w:
        raise ArithmeticError(f"{total} solutions of {f} = {n} not divisible by w = {w}")
    return total // w


def count_rep_indefinite(f: QuadForm, n: int) -> int:
    if not f.is_normalized_indefinite():
        raise ValueError(f"{f} is not normalized (need a > 0 > c)")
    if n == 0:
        return 0
    if n < 0:
        return count_rep_indefinite(normalized(-f), -n)
    D = f.D
    total = 0
    for piece in pieces_of(f):
        A, B = piece.A, piece.B
        for r in range(math.isqrt(n // piece.C) + 1):
            disc = D * r * r + 4 * A * n
            s = math.isqrt(disc)
            if s * s != disc:
                continue
            # the other root is negative since B*r >= 0
            top = -B * r + s
            if top > 0 and top % (2 * A) == 0:
                total += 1
    return total


def count_rep(f: QuadForm, n: int) -> int:
    """r_f(n) for any admissible form; n < 0 allowed for indefinite forms."""
    kind = classify(f)
    if kind is FormClass.NEGATIVE_DEFINITE:
        raise ValueError("negative definite forms are not supported; pass -f")
    if kind is FormClass.POSITIVE_DEFINITE:
        return 0 if n < 0 else count_rep_definite(f, n)
    return count_rep_indefinite(normalized(f), n)


def _row_bounds(a: int, b: int, D: int, y: int, limit: int) -> tuple[int, int]:
    """Integer x with a x^2 + b x y + c y^2 <= limit (a > 0), as a closed interval."""
    disc = D * y * y + 4 * a * limit
    if disc < 0:
        return 1, 0
    s = math.isqrt(disc)
    return -((b * y + s) // (2 * a)), (-b * y + s) // (2 * a)


def _rows(f: QuadForm, limit: int):
    """Yield (A, B, C, r, s_lo, s_hi): the values A s^2 + B r s + C r^2 for
    s_lo <= s <= s_hi, taken over all rows, are the values of f <= limit on
    its fundamental region (the whole plane for definite f, K0 otherwise).
    """
    a, b, c, D = f.a, f.b, f.c, f.D
    if D < 0:
        y_max = math.isqrt(4 * a * limit // -D)
        for y in range(-y_max, y_max + 1):
            lo, hi = _row_bounds(a, b, D, y, limit)
            if lo <= hi:
                yield a, b, c, y, lo, hi
        return
    for piece in pieces_of(f):
        A, B, C = piece.A, piece.B, piece.C
        for r in range(math.isqrt(limit // C) + 1):
            hi = _row_bounds(A, B, D, r, limit)[1]
            if hi >= 1:
                yield A, B, C, r, 1, hi


def _sweep(f: QuadForm, limit: int, modulus: int = 1, residue: int = 0) -> np.ndarray:
    """counts[m] = r_f(modulus*m + residue) for modulus*m + residue <= limit.

    f must be positive definite or normalized indefinite.
    """
    size = (limit - residue) // modulus + 1 if limit >= residue else 0
    if size > table_cap():
        raise MemoryError(f"table of {size} entries exceeds cap {table_cap()} (BQF_TABLE_CAP)")
    counts = np.zeros(size, dtype=np.int64)
    if size == 0:
        return counts
    if limit >= 2**62 // 4:
        raise OverflowError("limit too large for the vectorized sweep")
    pending: list[np.ndarray] = []
    pending_len = 0

    def flush():
        nonlocal pending, pending_len
        if pending:
            vals = np.concatenate(pending)
            counts[:] += np.bincount(vals, minlength=size)[:size]
        pending, pending_len = [], 0

    for a, b, c, y, lo, hi in _rows(f, limit):
        x = np.arange(lo, hi + 1, dtype=np.int64)
        vals = (a * x + b * y) * x + c * y * y
        vals = vals[(vals >= 1) & (vals <= limit)]
        if modulus != 1:
            vals = vals - residue
            vals = vals[vals % modulus == 0] // modulus
        elif residue:
            vals = vals - residue
        vals = vals[vals >= 0]
        pending.append(vals)
        pending_len += vals.size
        if pending_len >= _BATCH:
            flush()
    flush()
    if f.D < 0:
        w = automorph_count(f.D)
        if np.any(counts % w):
            raise ArithmeticError(f"solution counts of {f} not divisible by w = {w}")
        counts //= w
    return counts


def class_counts(f: QuadForm, modulus: int, residue: int, length: int) -> np.ndarray:
    """Array of r_f(modulus*m + residue) for 0 <= m < length (residue >= 0)."""
    if length <= 0:
        return np.zeros(0, dtype=np.int64)
    kind = classify(f)
    if kind is FormClass.NEGATIVE_DEFINITE:
        raise ValueError("negative definite forms are not supported; pass -f")
    g = f if kind is FormClass.POSITIVE_DEFINITE else normalized(f)
    return _sweep(g, modulus * (length - 1) + residue, modulus, residue)


@dataclass(frozen=True)
class RepTable:
    form: QuadForm
    limit: int
    counts: np.ndarray

    def __getitem__(self, n: int) -> int:
        return int(self.counts[n])

    def total(self) -> int:
        return int(self.counts.sum())


def build_rep_table(f: QuadForm, limit: int) -> RepTable:
    if limit < 1:
        raise ValueError("limit must be >= 1")
    kind = classify(f)
    if kind is FormClass.NEGATIVE_DEFINITE:
        raise ValueError("negative definite forms are not supported; pass -f")
    g = f if kind is FormClass.POSITIVE_DEFINITE else normalized(f)
    counts = _sweep(g, limit)
    counts.setflags(write=False)
    return RepTable(f, limit, counts)


def signed_values(f: QuadForm, lo: int, hi: int) -> np.ndarray:
    """Array of r_f(n) for lo <= n <= hi, negative n via -f for indefinite f.

    Positive definite forms have r_f(n) = 0 for n < 0.
    """
    out = np.zeros(max(hi - lo + 1, 0), dtype=np.int64)
    if hi >= 1:
        pos = build_rep_table(f, hi).counts
        start = max(lo, 0)
        out[start - lo :] = pos[start:]
    if lo <= -1 and classify(f) is FormClass.INDEFINITE:
        neg = build_rep_table(normalized(-f), -lo).counts
        stop = min(hi, -1)
        # out[n - lo] = neg[-n] for lo <= n <= stop
        out[: stop - lo + 1] = neg[-lo : -stop - 1 : -1]
    return out
