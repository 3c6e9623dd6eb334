"""Orders in a quaternion algebra, maximality, and the polarization element mu."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Optional, Sequence

from quatks import kernels
from quatks.linalg import det, inverse, is_integral
from quatks.quat import (
    QuatAlgebra,
    QuatElement,
    QuaternionError,
    conjugate_main,
    discriminant,
    is_indefinite,
    reduced_norm,
    reduced_trace,
    span,
)


class MuNotFound(LookupError):
    pass


@dataclass
class OrderReport:
    contains_one: bool
    closed: bool
    trace_integral: bool
    norm_integral: bool
    witnesses: dict[str, object] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.contains_one and self.closed and self.trace_integral and self.norm_integral


@dataclass(frozen=True, eq=False)
class Order:
    """A Z-lattice with basis e1..e4 in a quaternion algebra.

    Use :func:`make_order` to build one with the order axioms checked.
    """

    algebra: QuatAlgebra
    basis: tuple[QuatElement, QuatElement, QuatElement, QuatElement]

    def __post_init__(self):
        rows = [list(e.coords) for e in self.basis]
        if len(rows) != 4:
            raise QuaternionError("an order basis has four elements")
        if det(rows) == 0:
            raise QuaternionError("order basis is linearly dependent over Q")
        object.__setattr__(self, "_inv", inverse(rows))

    def coordinates(self, q: QuatElement) -> list[Fraction]:
        """Coordinates of q over the order basis (rational in general)."""
        # q = sum c_k e_k  <=>  q.coords = B^T c,  c = q.coords * B^{-1}
        inv = self._inv
        return [sum(q.coords[i] * inv[i][k] for i in range(4)) for k in range(4)]

    def contains(self, q: QuatElement) -> bool:
        return all(is_integral(c) for c in self.coordinates(q))

    def element(self, coeffs: Sequence[int]) -> QuatElement:
        return span(self.algebra, coeffs, self.basis)

    def trace_gram(self) -> list[list[Fraction]]:
        """Matrix of trd(e_i e_j)."""
        return [[reduced_trace(x * y) for y in self.basis] for x in self.basis]

    def norm_gram(self) -> list[list[Fraction]]:
        """Matrix of trd(e_i conj(e_j)); the polar form of twice the reduced norm."""
        return [[reduced_trace(x * conjugate_main(y)) for y in self.basis] for x in self.basis]


def verify_order(algebra: QuatAlgebra, basis: Sequence[QuatElement]) -> OrderReport:
    """Check the order axioms for the lattice spanned by ``basis``.

    Raises QuaternionError if the basis is linearly dependent.
    """
    lat = Order(algebra, tuple(basis))
    w: dict[str, object] = {}

    one = algebra.one()
    contains_one = lat.contains(one)
    if not contains_one:
        w["contains_one"] = one

    closed = True
    for x in lat.basis:
        for y in lat.basis:
            if not lat.contains(x * y):
                closed = False
                w.setdefault("closed", (x, y, x * y))

    trace_integral = True
    for x in lat.basis:
        if not is_integral(reduced_trace(x)):
            trace_integral = False
            w.setdefault("trace_integral", x)

    # nrd(sum c_k e_k) = sum c_k^2 nrd(e_k) + sum_{k<l} c_k c_l trd(e_k conj(e_l))
    norm_integral = True
    for k, x in enumerate(lat.basis):
        if not is_integral(reduced_norm(x)):
            norm_integral = False
            w.setdefault("norm_integral", x)
        for y in lat.basis[k + 1:]:
            if not is_integral(reduced_trace(x * conjugate_main(y))):
                norm_integral = False
                w.setdefault("norm_integral", x + y)
    return OrderReport(contains_one, closed, trace_integral, norm_integral, w)


def make_order(algebra: QuatAlgebra, basis: Sequence[QuatElement]) -> Order:
    report = verify_order(algebra, basis)
    if not report.ok:
        failed = [k for k in ("contains_one", "closed", "trace_integral", "norm_integral") if not getattr(report, k)]
        raise QuaternionError(f"not an order: fails {', '.join(failed)} (witness {report.witnesses[failed[0]]!r})")
    return Order(algebra, tuple(basis))


def reduced_discriminant(O: Order) -> int:
    d = abs(det(O.trace_gram()))
    if d.denominator != 1 or isqrt(d.numerator) ** 2 != d.numerator:
        raise QuaternionError(f"|det trd(e_i e_j)| = {d} is not a square; input is not an order")
    return isqrt(d.numerator)


def is_maximal(O: Order) -> bool:
    return reduced_discriminant(O) == discriminant(O.algebra)


@dataclass(frozen=True, eq=False)
class MuElement:
    """Trace-zero element with mu^2 = -d_B."""

    mu: QuatElement
    d_B: int

    def __post_init__(self):
        if reduced_trace(self.mu) != 0:
            raise QuaternionError(f"mu = {self.mu!r} has nonzero trace")
        if self.mu * self.mu != -self.d_B:
            raise QuaternionError(f"mu^2 != -{self.d_B} for mu = {self.mu!r}")

    def __neg__(self) -> "MuElement":
        return MuElement(-self.mu, self.d_B)

    def inverse(self) -> QuatElement:
        return self.mu.inverse()


def find_mu(O: Order, bound: Optional[int] = None) -> MuElement:
    """Search the order for mu with trd(mu) = 0 and nrd(mu) = d_B.

    Coordinates over the order basis range over [-bound, bound] (default
    10 * d_B).  The first hit in the order 0 < 1 < -1 < 2 < -2 < ...,
    compared coordinate by coordinate, is returned.
    """
    if not is_indefinite(O.algebra):
        raise QuaternionError("find_mu needs an indefinite algebra")
    if not is_maximal(O):
        raise QuaternionError("find_mu needs a maximal order")
    d_B = discriminant(O.algebra)
    if bound is None:
        bound = 10 * d_B
    traces = [reduced_trace(e) for e in O.basis]
    gram = O.norm_gram()
    hit = kernels.mu_search([int(t) for t in traces], [[int(x) for x in row] for row in gram], 2 * d_B, bound)
    if hit is None:
        raise MuNotFound(f"no mu with coordinates in [-{bound}, {bound}]")
    return MuElement(O.element(hit), d_B)


def star_involution(q: QuatElement, mu: MuElement) -> QuatElement:
    return mu.inverse() * conjugate_main(q) * mu.mu


def check_star_stabilizes(O: Order, mu: MuElement) -> bool:
    return all(O.contains(star_involution(e, mu)) for e in O.basis)


def basis_change(O: Order, U: Sequence[Sequence[int]]) -> Order:
    """The same lattice with basis f_i = sum_j U[i][j] e_j."""
    if abs(det(U)) != 1:
        raise QuaternionError("basis change must be unimodular")
    return Order(O.algebra, tuple(O.element(row) for row in U))
