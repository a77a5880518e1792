"""Cross-module oracle checks run by ``bqfcorr selftest``."""
from __future__ import annotations

import math
from types import SimpleNamespace

from .forms import QuadForm
from .localdensities import beta_p, build_density_table, rho
from .numtheory import divisor_sum_chi, primes_up_to
from .repcount import build_rep_table, cone_of, normalized
from .unitcone import orbit_canonicalize

ONE_CLASS_FORMS = {
    -3: QuadForm(1, 1, 1),
    -4: QuadForm(1, 0, 1),
    -7: QuadForm(1, 1, 2),
    -8: QuadForm(1, 0, 2),
    -11: QuadForm(1, 1, 3),
    5: QuadForm(1, 1, -1),
    8: QuadForm(1, 0, -2),
    13: QuadForm(1, 1, -3),
}


def check_divisor_sum(limit: int = 2000) -> tuple[bool, str]:
    for D, f in ONE_CLASS_FORMS.items():
        counts = build_rep_table(f, limit).counts
        for n in range(1, limit + 1):
            if math.gcd(n, D) == 1 and counts[n] != divisor_sum_chi(D, n):
                return False, f"r_f({n}) = {counts[n]} for f = {f}"
    return True, f"{len(ONE_CLASS_FORMS)} forms, n <= {limit}"


def check_orbit_tiling(n_max: int = 60, box: int = 200) -> tuple[bool, str]:
    for f in (QuadForm(1, 0, -2), QuadForm(1, 1, -1), QuadForm(2, 1, -2)):
        g = normalized(f)
        cone = cone_of(g)
        table = build_rep_table(g, n_max).counts
        seen: dict[int, set] = {}
        for x in range(-box, box + 1):
            for y in range(-box, box + 1):
                v = g(x, y)
                if 0 < v <= n_max:
                    seen.setdefault(v, set()).add(orbit_canonicalize(cone, x, y))
        for n in range(1, n_max + 1):
            if len(seen.get(n, ())) != table[n]:
                return False, f"{g}: {len(seen.get(n, ()))} canonical points for n = {n}, table says {table[n]}"
    return True, f"n <= {n_max}"


def check_crt(q_max: int = 12) -> tuple[bool, str]:
    for f in (QuadForm(1, 0, 1), QuadForm(1, 0, -2), QuadForm(2, 1, 3)):
        for q1 in range(1, q_max + 1):
            for q2 in range(1, q_max + 1):
                if math.gcd(q1, q2) != 1:
                    continue
                direct = build_density_table(f, q1 * q2)
                for A in range(q1 * q2):
                    if direct[A] != rho(f, A, q1) * rho(f, A, q2):
                        return False, f"{f}, A = {A}, q = {q1}*{q2}"
    return True, f"q1, q2 <= {q_max}"


def check_beta_identity(p_max: int = 23) -> tuple[bool, str]:
    system = SimpleNamespace(linear=[[1]], constant=[0])
    for f in (QuadForm(1, 0, 1), QuadForm(1, 0, -2)):
        for p in primes_up_to(p_max):
            lf = beta_p(system, [f], p)
            if lf.value != 1:
                return False, f"beta_{p} = {lf.value} for {f}"
    return True, f"p <= {p_max}"


CHECKS = {
    "divisor_sum_identity": check_divisor_sum,
    "orbit_tiling": check_orbit_tiling,
    "crt_multiplicativity": check_crt,
    "beta_p_identity": check_beta_identity,
}


def run_selftest() -> dict[str, dict]:
    results = {}
    for name, check in CHECKS.items():
        ok, detail = check()
        results[name] = {"ok": ok, "detail": detail}
    return results
