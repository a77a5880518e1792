"""Linear correlations of representation functions and their predicted main term.

For forms f_1..f_t, an affine system psi = (psi_1..psi_t): Z^d -> Z^t and a box
K in [-1, 1]^d, the sum over integer n in N*K of prod_i r_{f_i}(psi_i(n)) is
compared with beta_inf * prod_{p <= p_max} beta_p, where beta_inf is the volume
of N*K times one archimedean density per form.
"""
from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .forms import FormClass, QuadForm, classify
from .localdensities import LocalFactor, rho, singular_series
from .numtheory import primes_up_to
from .repcount import automorph_count, class_counts, count_rep, signed_values
from .unitcone import fundamental_pell


class ValidationError(ValueError):
    pass


class LocallyObstructedError(ValueError):
    """rho_{f,A}(W) = 0: the class A mod W carries no representations at all."""


@dataclass(frozen=True)
class AffineSystem:
    linear: tuple[tuple[int, ...], ...]
    constant: tuple[int, ...]

    def __post_init__(self):
        linear = tuple(tuple(int(x) for x in row) for row in self.linear)
        constant = tuple(int(x) for x in self.constant)
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "constant", constant)
        if not linear or not linear[0]:
            raise ValueError("need t >= 1 forms and d >= 1 variables")
        if any(len(row) != len(linear[0]) for row in linear):
            raise ValueError("ragged linear part")
        if len(constant) != len(linear):
            raise ValueError("constant vector length differs from the number of forms")

    @property
    def t(self) -> int:
        return len(self.linear)

    @property
    def d(self) -> int:
        return len(self.linear[0])

    def __call__(self, n: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(l * x for l, x in zip(row, n)) + c for row, c in zip(self.linear, self.constant))


@dataclass(frozen=True)
class Box:
    bounds: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        bounds = tuple((Fraction(lo), Fraction(hi)) for lo, hi in self.bounds)
        object.__setattr__(self, "bounds", bounds)
        for lo, hi in bounds:
            if lo > hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")
            if abs(lo) > 1 or abs(hi) > 1:
                raise ValueError("box bounds must lie in [-1, 1]")

    @classmethod
    def unit(cls, d: int) -> Box:
        return cls(((Fraction(0), Fraction(1)),) * d)

    @property
    def d(self) -> int:
        return len(self.bounds)

    def volume(self) -> Fraction:
        return math.prod((hi - lo for lo, hi in self.bounds), start=Fraction(1))

    def integer_ranges(self, N: int) -> list[range]:
        return [range(math.ceil(lo * N), math.floor(hi * N) + 1) for lo, hi in self.bounds]

    def vertices(self, N: int = 1):
        return itertools.product(*[(lo * N, hi * N) for lo, hi in self.bounds])


@dataclass
class ValidationReport:
    ok: bool
    proportional_pairs: list[tuple[int, int]] = field(default_factory=list)
    negative_forms: list[int] = field(default_factory=list)
    unsupported_forms: list[int] = field(default_factory=list)

    def describe(self) -> str:
        if self.ok:
            return "ok"
        parts = []
        if self.proportional_pairs:
            parts.append(f"proportional linear parts: {self.proportional_pairs}")
        if self.negative_forms:
            parts.append(f"psi_i < 0 somewhere on the box for definite forms {self.negative_forms}")
        if self.unsupported_forms:
            parts.append(f"negative definite forms {self.unsupported_forms}")
        return "; ".join(parts)


def _proportional(u: Sequence[int], v: Sequence[int]) -> bool:
    return all(u[i] * v[j] == u[j] * v[i] for i in range(len(u)) for j in range(i + 1, len(u)))


def validate_system(system: AffineSystem, forms: Sequence[QuadForm], box: Box, N: int = 1) -> ValidationReport:
    if len(forms) != system.t or box.d != system.d:
        raise ValueError("system, forms and box sizes disagree")
    report = ValidationReport(ok=True)
    for i, j in itertools.combinations(range(system.t), 2):
        if _proportional(system.linear[i], system.linear[j]):
            report.proportional_pairs.append((i, j))
    for i, f in enumerate(forms):
        kind = classify(f)
        if kind is FormClass.NEGATIVE_DEFINITE:
            report.unsupported_forms.append(i)
        elif kind is FormClass.POSITIVE_DEFINITE:
            row, c = system.linear[i], system.constant[i]
            # an affine function attains its minimum over a box at a vertex
            if any(sum(l * x for l, x in zip(row, v)) + c < 0 for v in box.vertices(N)):
                report.negative_forms.append(i)
    report.ok = not (report.proportional_pairs or report.negative_forms or report.unsupported_forms)
    return report


def arch_density(f: QuadForm) -> float:
    """2 pi / (w(D) sqrt(-D)) for positive definite f, log(eps) / sqrt(D) for indefinite f."""
    kind = classify(f)
    if kind is FormClass.NEGATIVE_DEFINITE:
        raise ValueError("negative definite forms are not supported; pass -f")
    if kind is FormClass.POSITIVE_DEFINITE:
        return 2 * math.pi / (automorph_count(f.D) * math.sqrt(-f.D))
    return fundamental_pell(f.D).log_eps / math.sqrt(f.D)


def beta_inf(box: Box, forms: Sequence[QuadForm], N: int) -> float:
    vol = float(box.volume()) * float(N) ** box.d
    return vol * math.prod(arch_density(f) for f in forms)


def _psi_range(row, c, ranges) -> tuple[int, int]:
    lo = hi = c
    for l, r in zip(row, ranges):
        ends = (l * r.start, l * (r.stop - 1))
        lo += min(ends)
        hi += max(ends)
    return lo, hi


def empirical_sum(
    system: AffineSystem,
    forms: Sequence[QuadForm],
    box: Box,
    N: int,
    unsafe: bool = False,
    threads: int = 1,
) -> int:
    """Exact value of sum_{n in Z^d cap N*K} prod_i r_{f_i}(psi_i(n))."""
    if not unsafe:
        report = validate_system(system, forms, box, N)
        if not report.ok:
            raise ValidationError(report.describe())
    ranges = box.integer_ranges(N)
    if any(len(r) == 0 for r in ranges):
        return 0
    lookups = []
    for row, c, f in zip(system.linear, system.constant, forms):
        lo, hi = _psi_range(row, c, ranges)
        lookups.append((lo, signed_values(f, lo, hi)))
    bound = math.prod(max(1, int(vals.max(initial=0))) for _, vals in lookups)
    inner = len(ranges[-1])
    if bound * inner >= 2**62:
        raise OverflowError("products of representation numbers may overflow int64")
    outer_ranges = ranges[:-1]
    outer = math.prod(len(r) for r in outer_ranges)
    block = max(1, min(outer, (1 << 21) // inner, (2**62 // (bound * inner))))
    last = np.arange(ranges[-1].start, ranges[-1].stop, dtype=np.int64)
    starts = np.array([r.start for r in outer_ranges], dtype=np.int64)
    sizes = [len(r) for r in outer_ranges]

    def block_sum(start: int) -> int:
        idx = np.arange(start, min(start + block, outer), dtype=np.int64)
        coords = []
        rem = idx
        for size in reversed(sizes):
            coords.append(rem % size)
            rem = rem // size
        coords.reverse()
        prod = None
        for (lo, vals), row, c in zip(lookups, system.linear, system.constant):
            base = np.full(idx.size, c, dtype=np.int64)
            for j, coord in enumerate(coords):
                base = base + row[j] * (coord + starts[j])
            arg = base[:, None] + row[-1] * last[None, :]
            looked = vals[arg - lo]
            prod = looked if prod is None else prod * looked
        return sum(int(s) for s in prod.sum(axis=1))

    block_starts = range(0, outer, block)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return sum(pool.map(block_sum, block_starts))
    return sum(block_sum(s) for s in block_starts)


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass
class CorrelationReport:
    forms: list[str]
    linear: list[list[int]]
    constant: list[int]
    box: list[list[str]]
    N: int
    p_max: int
    m_max: int | None
    empirical_sum: int
    beta_inf: float
    singular_series: Fraction
    predicted: float
    relative_error: float
    factors: list[LocalFactor]
    timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self, with_timings: bool = False) -> dict:
        out = {
            "forms": self.forms,
            "linear": self.linear,
            "constant": self.constant,
            "box": self.box,
            "N": self.N,
            "p_max": self.p_max,
            "m_max": self.m_max,
            "empirical_sum": self.empirical_sum,
            "beta_inf": self.beta_inf,
            "singular_series": _frac(self.singular_series),
            "predicted": self.predicted,
            "relative_error": self.relative_error,
            "factors": [
                {"p": lf.prime, "m_used": lf.m_used, "value": _frac(lf.value), "stabilized": lf.stabilized}
                for lf in self.factors
            ],
        }
        if with_timings:
            out["timings"] = self.timings
        return out


def predict_and_compare(
    system: AffineSystem,
    forms: Sequence[QuadForm],
    box: Box,
    N: int,
    p_max: int = 97,
    m_max: int | None = None,
    threads: int = 1,
) -> CorrelationReport:
    t0 = time.perf_counter()
    emp = empirical_sum(system, forms, box, N, threads=threads)
    t1 = time.perf_counter()
    b_inf = beta_inf(box, forms, N)
    series = singular_series(system, forms, p_max, m_max)
    t2 = time.perf_counter()
    predicted = b_inf * float(series.value)
    rel = abs(emp - predicted) / predicted if predicted > 0 else math.inf
    return CorrelationReport(
        forms=[str(f) for f in forms],
        linear=[list(r) for r in system.linear],
        constant=list(system.constant),
        box=[[str(lo), str(hi)] for lo, hi in box.bounds],
        N=N,
        p_max=p_max,
        m_max=m_max,
        empirical_sum=emp,
        beta_inf=b_inf,
        singular_series=series.value,
        predicted=predicted,
        relative_error=rel,
        factors=list(series.factors),
        timings={"empirical_s": t1 - t0, "prediction_s": t2 - t1},
    )


@dataclass(frozen=True)
class APAverage:
    empirical: float
    predicted: float
    deviation: float
    length: int
    rho: int


def ap_average(f: QuadForm, q: int, A: int, N: int) -> APAverage:
    """Mean of r_f(n) over 1 <= n <= N, n = A mod q, against density * rho_{f,A}(q) / q.

    The relative deviation is reported when the prediction is positive, the
    absolute one otherwise.
    """
    if q < 1 or not 0 <= A < q:
        raise ValueError("need q >= 1 and 0 <= A < q")
    first = 1 if A == 0 else 0
    length = (N - A) // q + 1 if N >= A else 0
    if length - first <= 0:
        raise ValueError("empty progression")
    counts = class_counts(f, q, A, length)[first:]
    empirical = int(counts.sum()) / counts.size
    r = rho(f, A, q)
    predicted = arch_density(f) * r / q
    deviation = abs(empirical - predicted) / predicted if predicted > 0 else abs(empirical)
    return APAverage(empirical, predicted, deviation, int(counts.size), r)


@dataclass(frozen=True)
class WTrickConfig:
    w: int
    threshold: int
    W: int
    alphas: tuple[tuple[int, int], ...]
    A: int
    admissible: bool


def build_wtrick(w: int, threshold: int, A: int = 1) -> WTrickConfig:
    """W = prod_{p < w} p^alpha(p) with alpha(p) minimal such that p^alpha(p) >= threshold."""
    if w < 3 or threshold < 2:
        raise ValueError("need w >= 3 and threshold >= 2")
    alphas = []
    W = 1
    for p in primes_up_to(w - 1):
        alpha = 1
        while p**alpha < threshold:
            alpha += 1
        alphas.append((p, alpha))
        W *= p**alpha
    if W >= 2**63:
        raise OverflowError(f"W = {W} exceeds 2**63")
    if not 0 <= A < W:
        raise ValueError(f"residue {A} outside [0, {W})")
    admissible = all(A % p**alpha != 0 for p, alpha in alphas)
    return WTrickConfig(w, threshold, W, tuple(alphas), A, admissible)


def _normalizer(f: QuadForm, cfg: WTrickConfig) -> float:
    r = rho(f, cfg.A, cfg.W)
    if r == 0:
        raise LocallyObstructedError(f"rho_(f,{cfg.A})({cfg.W}) = 0 for f = {f}")
    return arch_density(f) * r / cfg.W


def normalized_rep(f: QuadForm, cfg: WTrickConfig, n: int) -> float:
    """r_f(W n + A) divided by its local-global density."""
    return count_rep(f, cfg.W * n + cfg.A) / _normalizer(f, cfg)


def normalized_mean(f: QuadForm, cfg: WTrickConfig, M: int) -> float:
    """Mean of the normalized function over 0 <= n < M."""
    scale = _normalizer(f, cfg)
    counts = class_counts(f, cfg.W, cfg.A, M)
    return int(counts.sum()) / M / scale
