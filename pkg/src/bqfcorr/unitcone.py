"""Fundamental units, automorphs and the fundamental cone of an indefinite form.

The cone K0 is the sector between the ray y = 0 and its image y = theta*x
under the generating automorph. Membership uses the convention
x >= 1, y >= 0, y/x < theta: the lower edge is included, the upper edge
(the image of the lower one) is excluded, so every orbit of {+-sigma^k}
on {f > 0} meets the cone in exactly one point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .forms import QuadForm
from .numtheory import is_discriminant, is_square


@dataclass(frozen=True)
class PellSolution:
    D: int
    t0: int
    u0: int
    log_eps: float

    @property
    def eps(self) -> float:
        return math.exp(self.log_eps)


def _log_eps(D: int, t: int, u: int) -> float:
    # t and u grow fast; work in logs once they leave float range.
    if t.bit_length() < 500:
        return math.log((t + u * math.sqrt(D)) / 2)
    # t + u sqrt(D) ~ 2t for large t (the conjugate is 4/(t + u sqrt D))
    return math.log(t) + math.log1p(u * math.sqrt(D) / t) - math.log(2)


def _check_pell_disc(D: int) -> None:
    if D <= 0 or is_square(D) or not is_discriminant(D):
        raise ValueError(f"{D} is not a positive nonsquare discriminant")


def fundamental_pell(D: int) -> PellSolution:
    """Minimal positive solution of t^2 - D u^2 = 4.

    Walks the continued fraction of omega = (s + sqrt D)/2, s = D mod 2, and
    stops at the first convergent p/q whose element p - q*omega is a unit.
    A unit of norm -1 is squared.
    """
    _check_pell_disc(D)
    s = D % 2
    r = math.isqrt(D)
    P, Q = s, 2
    p_prev, p = 1, 0
    q_prev, q = 0, 1
    while True:
        a = (P + r) // Q if Q > 0 else (P + r + 1) // Q
        p_prev, p = a * p_prev + p, p_prev
        q_prev, q = a * q_prev + q, q_prev
        pk, qk = p_prev, q_prev
        t, u = 2 * pk - qk * s, qk
        norm4 = t * t - D * u * u
        if norm4 in (4, -4) and u > 0:
            break
        P = a * Q - P
        Q = (D - P * P) // Q
    t = abs(t)
    if norm4 == -4:
        t, u = (t * t + D * u * u) // 2, t * u
    assert t * t - D * u * u == 4
    return PellSolution(D, t, u, _log_eps(D, t, u))


def fundamental_pell_bruteforce(D: int, u_limit: int = 10**6) -> tuple[int, int]:
    """Search u = 1, 2, ... for 4 + D u^2 a square. Only for small D."""
    _check_pell_disc(D)
    for u in range(1, u_limit + 1):
        t2 = 4 + D * u * u
        t = math.isqrt(t2)
        if t * t == t2:
            return t, u
    raise ValueError(f"no solution with u <= {u_limit}")


@dataclass(frozen=True)
class Automorph:
    """Integer 2x2 matrix acting on column vectors (x, y)."""

    m11: int
    m12: int
    m21: int
    m22: int

    def __post_init__(self):
        if self.det() != 1:
            raise ValueError(f"automorph must have determinant 1, got {self.det()}")

    def det(self) -> int:
        return self.m11 * self.m22 - self.m12 * self.m21

    def apply(self, x: int, y: int) -> tuple[int, int]:
        return self.m11 * x + self.m12 * y, self.m21 * x + self.m22 * y

    def inverse(self) -> Automorph:
        return Automorph(self.m22, -self.m12, -self.m21, self.m11)

    def __matmul__(self, other: Automorph) -> Automorph:
        return Automorph(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def power(self, k: int) -> Automorph:
        base = self if k >= 0 else self.inverse()
        result = Automorph(1, 0, 0, 1)
        for _ in range(abs(k)):
            result = base @ result
        return result

    def preserves(self, f: QuadForm) -> bool:
        """Exact polynomial identity f(sigma(x, y)) == f(x, y)."""
        a, b, c = f.coeffs()
        p, q, r, s = self.m11, self.m12, self.m21, self.m22
        # f(px + qy, rx + sy) expanded coefficient by coefficient
        xx = a * p * p + b * p * r + c * r * r
        xy = 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s
        yy = a * q * q + b * q * s + c * s * s
        return (xx, xy, yy) == (a, b, c)


def _require_normalized(f: QuadForm) -> None:
    if not f.is_normalized_indefinite():
        raise ValueError(f"{f} is not a normalized indefinite form (need a > 0 > c)")


def automorph_of(f: QuadForm) -> Automorph:
    """The generator sigma of the proper automorphs, built from (t0, u0)."""
    _require_normalized(f)
    sol = fundamental_pell(f.D)
    t, u = sol.t0, sol.u0
    a, b, c = f.coeffs()
    # t = b*u mod 2 because t^2 - (b^2 - 4ac) u^2 = 4
    sigma = Automorph((t - b * u) // 2, -c * u, a * u, (t + b * u) // 2)
    assert sigma.preserves(f)
    return sigma


@dataclass(frozen=True)
class FundamentalCone:
    form: QuadForm
    theta_num: int
    theta_den: int
    automorph: Automorph

    @property
    def theta(self) -> Fraction:
        return Fraction(self.theta_num, self.theta_den)

    def contains(self, x: int, y: int) -> bool:
        return x >= 1 and y >= 0 and y * self.theta_den < x * self.theta_num

    def edge_value(self) -> Fraction:
        """a + b*theta + c*theta^2, the value of f on the upper edge direction (1, theta)."""
        th = self.theta
        return self.form.a + self.form.b * th + self.form.c * th * th


def fundamental_cone(f: QuadForm) -> FundamentalCone:
    _require_normalized(f)
    sigma = automorph_of(f)
    for cand in (sigma, sigma.inverse()):
        x, y = cand.apply(1, 0)
        if x <= 0 or y <= 0:
            continue
        th = Fraction(y, x)
        if f.a + f.b * th + f.c * th * th > 0:
            return FundamentalCone(f, th.numerator, th.denominator, cand)
    raise RuntimeError(f"no admissible cone slope for {f}; this is a bug")


@dataclass(frozen=True)
class ConePiece:
    """Sub-cone {s*v + r*u : s >= 1, r >= 0} of K0 with det(v, u) = 1.

    A, B, C are the coefficients of f(s*v + r*u); A, C > 0 and B > 0 because
    the closed quadrant lies in {f > 0}.
    """

    v: tuple[int, int]
    u: tuple[int, int]
    A: int
    B: int
    C: int

    def point(self, s: int, r: int) -> tuple[int, int]:
        return s * self.v[0] + r * self.u[0], s * self.v[1] + r * self.u[1]


def cone_pieces(cone: FundamentalCone) -> list[ConePiece]:
    """Split K0 into unimodular sub-cones along a chain (1,0) = v_0, ..., v_m = sigma(1,0).

    Each step takes the lattice vector u = k*v + v' (det(v, u) = 1) closest in
    angle to the target from below; det(u, target) strictly drops, as in
    Euclid's algorithm. Row counts then scale like sqrt(N) per piece instead of
    with the size of the unit.
    """
    f = cone.form
    target = cone.automorph.apply(1, 0)
    v, v2 = (1, 0), (0, 1)
    chain = [v]
    while True:
        beta = v[0] * target[1] - v[1] * target[0]  # det(v, target)
        if beta == 0:
            break
        alpha = target[0] * v2[1] - target[1] * v2[0]  # det(target, v')
        k = -((-alpha) // beta)  # ceil(alpha / beta)
        u = (k * v[0] + v2[0], k * v[1] + v2[1])
        v, v2 = u, (u[0] - v[0], u[1] - v[1])
        chain.append(v)
    assert chain[-1] == target
    pieces = []
    for v, u in zip(chain, chain[1:]):
        A, C = f(*v), f(*u)
        B = f(v[0] + u[0], v[1] + u[1]) - A - C
        assert A > 0 and C > 0 and B > 0
        pieces.append(ConePiece(v, u, A, B, C))
    return pieces


def orbit_canonicalize(
    cone: FundamentalCone, x: int, y: int, with_path: bool = False
):
    """Move (x, y) with f(x, y) > 0 into the cone by +-sigma^k.

    Returns the canonical point, or (point, sign, k) with point = sign * sigma^k (x, y)
    when ``with_path`` is set.
    """
    f = cone.form
    if f(x, y) <= 0:
        raise ValueError(f"orbit_canonicalize needs f(p) > 0, got f{(x, y)} = {f(x, y)}")
    sign = 1
    if x < 0:
        x, y, sign = -x, -y, -1
    sigma = cone.automorph
    sigma_inv = sigma.inverse()
    num, den = cone.theta_num, cone.theta_den
    k = 0
    # sigma pushes slopes up toward the positive asymptote, sigma^-1 down.
    while y < 0:
        x, y = sigma.apply(x, y)
        k += 1
    while y * den >= x * num:
        x, y = sigma_inv.apply(x, y)
        k -= 1
    assert cone.contains(x, y)
    if with_path:
        return (x, y), sign, k
    return x, y


def vol_K0(f: QuadForm, N: float) -> float:
    """Area of {(x, y) in K0 : f(x, y) <= N}, equal to N log(eps) / sqrt(D)."""
    _require_normalized(f)
    if N < 0:
        raise ValueError("N must be nonnegative")
    return N * fundamental_pell(f.D).log_eps / math.sqrt(f.D)
