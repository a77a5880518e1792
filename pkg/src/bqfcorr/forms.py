"""Binary quadratic forms <a,b,c> = ax^2 + bxy + cy^2."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .numtheory import is_square


class FormClass(enum.Enum):
    POSITIVE_DEFINITE = "PositiveDefinite"
    NEGATIVE_DEFINITE = "NegativeDefinite"
    INDEFINITE = "Indefinite"


@dataclass(frozen=True)
class QuadForm:
    a: int
    b: int
    c: int
    D: int = field(init=False, compare=False)

    def __post_init__(self):
        for name in ("a", "b", "c"):
            if not isinstance(getattr(self, name), int):
                raise TypeError(f"coefficient {name} must be an int")
        object.__setattr__(self, "D", self.b * self.b - 4 * self.a * self.c)
        if math.gcd(self.a, self.b, self.c) != 1:
            raise ValueError(f"{self} is not primitive")
        if is_square(self.D):
            raise ValueError(f"{self} has square discriminant {self.D}")

    @classmethod
    def parse(cls, text: str) -> QuadForm:
        """Parse the "a,b,c" notation used on the command line and in configs."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected 'a,b,c', got {text!r}")
        return cls(*(int(p) for p in parts))

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def __neg__(self) -> QuadForm:
        return QuadForm(-self.a, -self.b, -self.c)

    def __str__(self):
        return f"{self.a},{self.b},{self.c}"

    def coeffs(self) -> tuple[int, int, int]:
        return self.a, self.b, self.c

    def is_normalized_indefinite(self) -> bool:
        return self.D > 0 and self.a > 0 > self.c


def classify(f: QuadForm) -> FormClass:
    if f.D > 0:
        return FormClass.INDEFINITE
    return FormClass.POSITIVE_DEFINITE if f.a > 0 else FormClass.NEGATIVE_DEFINITE


def _translate(a: int, b: int, c: int, k: int) -> tuple[int, int, int]:
    # x -> x + k y
    return a, b + 2 * k * a, a * k * k + b * k + c


def reduce_definite(f: QuadForm) -> QuadForm:
    """Gauss reduction: the equivalent form with -a < b <= a <= c, b >= 0 if a == c."""
    if classify(f) is not FormClass.POSITIVE_DEFINITE:
        raise ValueError(f"reduce_definite needs a positive definite form, got {f}")
    a, b, c = f.coeffs()
    while True:
        # bring b into (-a, a]
        k = (a - b) // (2 * a)
        a, b, c = _translate(a, b, c, k)
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return QuadForm(a, b, c)


def normalize_indefinite(f: QuadForm) -> QuadForm:
    """An equivalent form with a > 0 > c and |b| as small as that allows."""
    if f.D <= 0:
        raise ValueError(f"normalize_indefinite needs an indefinite form, got {f}")
    a, b, c = f.coeffs()
    # a, c are nonzero since D is not a square. Shrink |a| until a and c differ in sign.
    while a * c > 0:
        k = (abs(a) - b) // (2 * abs(a)) if a > 0 else -((abs(a) - b) // (2 * abs(a)))
        a, b, c = _translate(a, b, c, k)
        if a * c > 0:
            a, b, c = c, -b, a
    if a < 0:
        a, b, c = c, -b, a
    # Centre b modulo 2a while c stays negative.
    k = (a - b) // (2 * a)
    a2, b2, c2 = _translate(a, b, c, k)
    if c2 < 0:
        a, b, c = a2, b2, c2
    g = QuadForm(a, b, c)
    assert g.D == f.D and g.a > 0 > g.c
    return g
