"""Exact arithmetic in a rational quaternion algebra (a, b | Q).

Elements are stored by their coordinates over the basis 1, i, j, k with
i^2 = a, j^2 = b, ij = -ji = k.  Everything is :class:`fractions.Fraction`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterable, Optional, Union

from sympy import primefactors

Rational = Union[int, Fraction]
REAL = "real"
Place = Union[int, str]


class QuaternionError(ValueError):
    pass


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and "num/den" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


@dataclass(frozen=True)
class QuatAlgebra:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        a, b = as_fraction(self.a), as_fraction(self.b)
        if a == 0 or b == 0:
            raise QuaternionError("structure constants must be nonzero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def element(self, x0=0, x1=0, x2=0, x3=0) -> "QuatElement":
        return QuatElement(self, (x0, x1, x2, x3))

    def one(self) -> "QuatElement":
        return self.element(1)

    def gens(self) -> tuple["QuatElement", "QuatElement", "QuatElement"]:
        return self.element(0, 1), self.element(0, 0, 1), self.element(0, 0, 0, 1)

    def __repr__(self):
        return f"QuatAlgebra({self.a}, {self.b})"


@dataclass(frozen=True, eq=False)
class QuatElement:
    algebra: QuatAlgebra
    coords: tuple[Fraction, Fraction, Fraction, Fraction]

    def __post_init__(self):
        c = tuple(as_fraction(x) for x in self.coords)
        if len(c) != 4:
            raise QuaternionError("a quaternion has exactly four coordinates")
        object.__setattr__(self, "coords", c)

    def _check(self, other: "QuatElement"):
        if other.algebra != self.algebra:
            raise QuaternionError(f"mismatched algebras {self.algebra} and {other.algebra}")

    def _coerce(self, other) -> "QuatElement":
        if isinstance(other, QuatElement):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.algebra.element(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuatElement(self.algebra, tuple(x + y for x, y in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return QuatElement(self.algebra, tuple(-x for x in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuatElement(self.algebra, tuple(x * other for x in self.coords))
        if not isinstance(other, QuatElement):
            return NotImplemented
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuatElement(self.algebra, tuple(other * x for x in self.coords))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuatElement(self.algebra, tuple(x / other for x in self.coords))
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.coords == (Fraction(other), 0, 0, 0)
        if not isinstance(other, QuatElement):
            return NotImplemented
        return self.algebra == other.algebra and self.coords == other.coords

    def __hash__(self):
        return hash((self.algebra, self.coords))

    def inverse(self) -> "QuatElement":
        n = reduced_norm(self)
        if n == 0:
            raise ZeroDivisionError(f"{self} has reduced norm 0")
        return conjugate_main(self) / n

    def __repr__(self):
        terms = []
        for c, s in zip(self.coords, ("", "i", "j", "k")):
            if c:
                terms.append(f"{c}{'*' + s if s else ''}")
        return " + ".join(terms) if terms else "0"


def mul(q1: QuatElement, q2: QuatElement) -> QuatElement:
    q1._check(q2)
    a, b = q1.algebra.a, q1.algebra.b
    x0, x1, x2, x3 = q1.coords
    y0, y1, y2, y3 = q2.coords
    return QuatElement(
        q1.algebra,
        (
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ),
    )


def conjugate_main(q: QuatElement) -> QuatElement:
    x0, x1, x2, x3 = q.coords
    return QuatElement(q.algebra, (x0, -x1, -x2, -x3))


def reduced_trace(q: QuatElement) -> Fraction:
    return 2 * q.coords[0]


def reduced_norm(q: QuatElement) -> Fraction:
    a, b = q.algebra.a, q.algebra.b
    x0, x1, x2, x3 = q.coords
    return x0 * x0 - a * x1 * x1 - b * x2 * x2 + a * b * x3 * x3


# -- Hilbert symbols --------------------------------------------------------

def _valuation(n: int, p: int) -> tuple[int, int]:
    """Return (v, u) with n = p**v * u and p not dividing u."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def _integral_rep(x: Fraction) -> int:
    # x * den^2 lies in the same square class as x
    return x.numerator * x.denominator


def hilbert_symbol(a: Rational, b: Rational, v: Place) -> int:
    """Local Hilbert symbol (a, b)_v at a prime v or at the real place."""
    a, b = as_fraction(a), as_fraction(b)
    if a == 0 or b == 0:
        raise QuaternionError("Hilbert symbol needs nonzero arguments")
    if v == REAL:
        return -1 if (a < 0 and b < 0) else 1
    p = int(v)
    A, B = _integral_rep(a), _integral_rep(b)
    alpha, u = _valuation(A, p)
    beta, w = _valuation(B, p)
    if p == 2:
        eps = lambda t: ((t - 1) // 2) % 2
        omega = lambda t: ((t * t - 1) // 8) % 2
        e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u)
        return -1 if e % 2 else 1
    legendre = lambda t: 1 if pow(t % p, (p - 1) // 2, p) == 1 else -1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    return sign * legendre(u) ** beta * legendre(w) ** alpha


def _reduce_square_class(x: Fraction, p: int) -> int:
    """Integer in the square class of x with p-valuation 0 or 1."""
    n = _integral_rep(x)
    while n % (p * p) == 0:
        n //= p * p
    return n


def hilbert_symbol_bruteforce(a: Rational, b: Rational, p: int, k: Optional[int] = None) -> int:
    """(a, b)_p from primitive solutions of z^2 = a x^2 + b y^2 modulo p^k.

    The default k is 3 for odd p and 4 for p = 2; modulo 8 is too coarse
    when both arguments have odd 2-adic valuation, e.g. (-10, -10).
    """
    from quatks import kernels

    a, b = as_fraction(a), as_fraction(b)
    if a == 0 or b == 0:
        raise QuaternionError("Hilbert symbol needs nonzero arguments")
    if k is None:
        k = 4 if p == 2 else 3
    A, B = _reduce_square_class(a, p), _reduce_square_class(b, p)
    return 1 if kernels.local_solution_exists(A, B, p, k) else -1


def candidate_primes(a: Rational, b: Rational) -> list[int]:
    """Primes at which (a, b)_p can be -1: those dividing 2*num*den of a and b."""
    a, b = as_fraction(a), as_fraction(b)
    n = 2 * abs(a.numerator * a.denominator * b.numerator * b.denominator)
    return primefactors(n)


def ramified_places(A: QuatAlgebra) -> list[Place]:
    places: list[Place] = [p for p in candidate_primes(A.a, A.b) if hilbert_symbol(A.a, A.b, p) == -1]
    if hilbert_symbol(A.a, A.b, REAL) == -1:
        places.append(REAL)
    return places


def discriminant(A: QuatAlgebra) -> int:
    return prod(p for p in ramified_places(A) if p != REAL)


def is_indefinite(A: QuatAlgebra) -> bool:
    return hilbert_symbol(A.a, A.b, REAL) == 1


def product_formula(a: Rational, b: Rational) -> int:
    """Product of (a, b)_v over the real place and every candidate prime."""
    return hilbert_symbol(a, b, REAL) * prod(hilbert_symbol(a, b, p) for p in candidate_primes(a, b))


def span(algebra: QuatAlgebra, coeffs: Iterable, basis: Iterable[QuatElement]) -> QuatElement:
    out = algebra.element()
    for c, e in zip(coeffs, basis):
        out = out + e * as_fraction(c)
    return out
