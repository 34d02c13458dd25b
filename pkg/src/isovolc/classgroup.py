"""Imaginary quadratic orders realized through binary quadratic forms.

A discriminant is a negative integer congruent to 0 or 1 mod 4.  The class
group of the order of discriminant D is represented by primitive reduced
forms (a, b, c) with b^2 - 4ac = D under Gauss composition.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import arith

__all__ = [
    "QuadForm",
    "SplittingType",
    "NON_INVERTIBLE",
    "validate_discriminant",
    "fundamental_discriminant",
    "conductor",
    "unit_count",
    "principal_form",
    "reduced_forms",
    "class_number",
    "compose",
    "form_power",
    "prime_form",
    "kronecker_symbol_disc",
    "order_of_class",
    "splitting_type",
    "hurwitz_class_number",
]


def validate_discriminant(D: int) -> int:
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not an imaginary quadratic discriminant")
    return D


@dataclass(frozen=True)
class QuadForm:
    """Integral binary quadratic form a x^2 + b xy + c y^2 with a > 0."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("form must have a > 0")

    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_primitive(self) -> bool:
        return math.gcd(math.gcd(self.a, abs(self.b)), self.c) == 1

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        return abs(b) <= a <= c and (b >= 0 or (abs(b) != a and a != c))

    def normalized(self) -> "QuadForm":
        a, b, c = self.a, self.b, self.c
        if -a < b <= a:
            return self
        r = (a - b) // (2 * a)
        return QuadForm(a, b + 2 * r * a, a * r * r + b * r + c)

    def reduced(self) -> "QuadForm":
        a, b, c = self.normalized()
        while a > c or (a == c and b < 0):
            s = (c + b) // (2 * c)
            a, b, c = c, -b + 2 * s * c, c * s * s - b * s + a
            f = QuadForm(a, b, c).normalized()
            a, b, c = f.a, f.b, f.c
        return QuadForm(a, b, c)

    def inverse(self) -> "QuadForm":
        return QuadForm(self.a, -self.b, self.c).reduced()

    def __iter__(self):
        yield self.a
        yield self.b
        yield self.c

    def __mul__(self, other: "QuadForm") -> "QuadForm":
        return compose(self, other)


@dataclass(frozen=True)
class SplittingType:
    """How a prime behaves in the order: inert, ramified, or split.

    For the non-inert cases `order` is the order of the class of a prime
    ideal above the prime, and `principal` tells whether that class is
    trivial.
    """

    kind: str  # "inert" | "ramified" | "split"
    order: int | None = None

    @property
    def principal(self) -> bool:
        return self.order == 1


class _NonInvertibleMarker:
    """Marker for the unique non-invertible prime ideal above ell | conductor."""

    def __repr__(self):
        return "NON_INVERTIBLE"


NON_INVERTIBLE = _NonInvertibleMarker()


@lru_cache(maxsize=None)
def fundamental_discriminant(D: int) -> tuple[int, int]:
    """Split D = f^2 * D_K with D_K fundamental; returns (D_K, f)."""
    validate_discriminant(D)
    s, x = arith.squarefree_decompose(-D)
    if (-s) % 4 == 1:
        return -s, x
    # -s = 2,3 mod 4: D_K = -4s and x carries a factor 2
    assert x % 2 == 0
    return -4 * s, x // 2


def conductor(D: int) -> int:
    return fundamental_discriminant(D)[1]


def unit_count(D: int) -> int:
    """Number of units of the order: 6 at D=-3, 4 at D=-4, else 2."""
    if D == -3:
        return 6
    if D == -4:
        return 4
    return 2


def principal_form(D: int) -> QuadForm:
    validate_discriminant(D)
    k = D % 2
    return QuadForm(1, k, (k * k - D) // 4)


@lru_cache(maxsize=None)
def reduced_forms(D: int) -> tuple[QuadForm, ...]:
    """All primitive reduced forms of discriminant D, each exactly once."""
    validate_discriminant(D)
    forms = []
    for a in range(1, math.isqrt(-D // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            forms.append(QuadForm(a, b, c))
    forms.sort(key=lambda f: (f.a, f.b, f.c))
    return tuple(forms)


def class_number(D: int) -> int:
    return len(reduced_forms(D))


def _solve_linmod(a: int, b: int, m: int) -> tuple[int, int]:
    """Solutions x = u + v*k of a x = b (mod m)."""
    g, d, _ = _xgcd(a, m)
    q, r = divmod(b, g)
    if r:
        raise ValueError("linear congruence has no solution")
    return q * d % m, m // g


def _xgcd(b: int, n: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while n:
        q, b, n = b // n, n, b % n
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return b, x0, y0


def compose(f1: QuadForm, f2: QuadForm) -> QuadForm:
    """Gauss composition of primitive forms; returns the reduced product."""
    if f1.discriminant() != f2.discriminant():
        raise ValueError("forms must share a discriminant")
    a1, b1, c1 = f1.reduced()
    a2, b2, c2 = f2.reduced()
    g = (b2 + b1) // 2
    h = (b2 - b1) // 2
    w = math.gcd(math.gcd(a1, a2), g)
    s = a1 // w
    t = a2 // w
    u = g // w
    k0, step = _solve_linmod(t * u, h * u + s * c1, s * t)
    n, _ = _solve_linmod(t * step, h - t * k0, s)
    k = k0 + step * n
    l = (t * k - h) // s
    m = (t * u * k - h * u - s * c1) // (s * t)
    a3 = s * t
    b3 = w * u - (k * t + l * s)
    c3 = k * l - w * m
    return QuadForm(a3, b3, c3).reduced()


def form_power(f: QuadForm, n: int) -> QuadForm:
    """n-th power of the class of f (n >= 0), reduced."""
    result = principal_form(f.discriminant())
    base = f.reduced()
    while n > 0:
        if n & 1:
            result = compose(result, base)
        base = compose(base, base)
        n >>= 1
    return result


def prime_form(D: int, ell: int):
    """A form (ell, b, c) of discriminant D representing a prime ideal of
    norm ell.

    Returns None when ell is inert, NON_INVERTIBLE when ell divides the
    conductor of D, and otherwise the form with the smallest b in
    [0, 2*ell] satisfying b^2 = D mod 4*ell (a documented tie-break, so
    certificates are reproducible).  The conjugate class is its inverse.
    """
    validate_discriminant(D)
    if conductor(D) % ell == 0:
        return NON_INVERTIBLE
    if kronecker_symbol_disc(D, ell) == -1:
        return None
    for b in range(0, 2 * ell + 1):
        if (b - D) % 2 == 0 and (b * b - D) % (4 * ell) == 0:
            return QuadForm(ell, b, (b * b - D) // (4 * ell))
    raise AssertionError(f"no prime form for D={D}, ell={ell}")


def kronecker_symbol_disc(D: int, ell: int) -> int:
    """(D/ell) as a Kronecker symbol; D may be negative."""
    if ell == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 == 1 else -1
    return arith.kronecker(D % ell, ell)


def order_of_class(f: QuadForm) -> int:
    """Least k >= 1 with f^k principal."""
    D = f.discriminant()
    validate_discriminant(D)
    if not f.is_primitive():
        raise ValueError("order is defined for primitive forms only")
    identity = principal_form(D)
    acc = f.reduced()
    k = 1
    while acc != identity:
        acc = compose(acc, f)
        k += 1
        if k > -D:
            raise AssertionError("order iteration exceeded the class bound")
    return k


def splitting_type(D: int, ell: int) -> SplittingType:
    """Inert/Ramified/Split behaviour of ell in the order of discriminant D.

    Rejects ell dividing the conductor: that prime is not invertible and
    must be handled by the caller.
    """
    form = prime_form(D, ell)
    if form is NON_INVERTIBLE:
        raise ValueError(f"{ell} divides the conductor of {D}")
    if form is None:
        return SplittingType("inert")
    order = order_of_class(form)
    kind = "ramified" if kronecker_symbol_disc(D, ell) == 0 else "split"
    return SplittingType(kind, order)


def hurwitz_class_number(N: int) -> Fraction:
    """H(N) for N < 0, N = 0 or 1 mod 4: class numbers of all orders whose
    discriminant divides N by a square, weighted 1/3 at -3 and 1/2 at -4.
    """
    if N >= 0 or N % 4 not in (0, 1):
        raise ValueError("N must be a negative discriminant")
    total = Fraction(0)
    f = 1
    while f * f <= -N:
        if N % (f * f) == 0:
            D = N // (f * f)
            if D % 4 in (0, 1):
                if D == -3:
                    total += Fraction(1, 3)
                elif D == -4:
                    total += Fraction(1, 2)
                else:
                    total += class_number(D)
        f += 1
    return total
