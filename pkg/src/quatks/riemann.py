"""The Riemann form on O_B, the real embedding, period lattices and covolumes.

C^2 is identified with R^4 via (Re z1, Im z1, Re z2, Im z2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Optional

import numpy as np

from quatks.linalg import det, is_integral
from quatks.orders import MuElement, Order
from quatks.quat import QuatAlgebra, QuatElement, QuaternionError, conjugate_main, is_indefinite, reduced_trace


@dataclass(frozen=True)
class SymplecticGram:
    m: tuple[tuple[int, ...], ...]

    def as_array(self) -> np.ndarray:
        return np.array(self.m, dtype=float)

    @property
    def determinant(self) -> int:
        return int(det(self.m))

    def is_skew(self) -> bool:
        return all(self.m[i][j] == -self.m[j][i] for i in range(4) for j in range(4))

    def pfaffian(self) -> int:
        m = self.m
        return m[0][1] * m[2][3] - m[0][2] * m[1][3] + m[0][3] * m[1][2]


def riemann_form(mu: MuElement, x: QuatElement, y: QuatElement) -> Fraction:
    """E(x(tau,1)^t, y(tau,1)^t) = -trd(mu^-1 x conj(y))."""
    return -reduced_trace(mu.inverse() * x * conjugate_main(y))


def riemann_gram(O: Order, mu: MuElement) -> SymplecticGram:
    rows = []
    for x in O.basis:
        row = []
        for y in O.basis:
            e = riemann_form(mu, x, y)
            if not is_integral(e):
                raise QuaternionError(f"E({x!r}, {y!r}) = {e} is not an integer")
            row.append(int(e))
        rows.append(tuple(row))
    return SymplecticGram(tuple(rows))


# -- real embedding ---------------------------------------------------------

def _sqrt(x: Fraction):
    """Exact square root when x is a rational square, else a float."""
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return math.sqrt(x)


@dataclass(frozen=True)
class RealEmbedding:
    """Images of i and j in M_2(R).  Entries are Fractions when the recipe is rational."""

    algebra: QuatAlgebra
    img_i: tuple
    img_j: tuple

    @property
    def exact(self) -> bool:
        return all(isinstance(x, (int, Fraction)) for row in self.img_i + self.img_j for x in row)

    def _mat(self, m):
        return [list(r) for r in m]

    def image(self, q: QuatElement, exact: Optional[bool] = None):
        """sigma(q) as a 2x2 nested list (exact entries) or a numpy array."""
        if exact is None:
            exact = self.exact
        I, J = self._mat(self.img_i), self._mat(self.img_j)
        K = _matmul(I, J)
        x0, x1, x2, x3 = q.coords
        out = [[(x0 if r == c else 0) + x1 * I[r][c] + x2 * J[r][c] + x3 * K[r][c] for c in range(2)] for r in range(2)]
        if exact:
            return out
        return np.array([[float(v) for v in row] for row in out])

    def conjugated(self, g) -> "RealEmbedding":
        """The embedding q -> g sigma(q) g^-1."""
        g = np.asarray(g, dtype=float)
        gi = np.linalg.inv(g)
        to = lambda m: tuple(tuple(float(v) for v in row) for row in g @ np.array(m, dtype=float) @ gi)
        return RealEmbedding(self.algebra, to(self.img_i), to(self.img_j))


def _matmul(A, B):
    return [[sum(A[r][t] * B[t][c] for t in range(2)) for c in range(2)] for r in range(2)]


def real_embedding(A: QuatAlgebra) -> RealEmbedding:
    """sigma: B (x) R -> M_2(R) with i -> diag(sqrt a, -sqrt a), j -> [[0,1],[b,0]] when a > 0;
    otherwise the same recipe for the presentation (b, a) with the roles of i and j swapped."""
    if not is_indefinite(A):
        raise QuaternionError(f"{A} is definite; it has no real embedding into M_2(R)")
    if A.a > 0:
        s = _sqrt(A.a)
        return RealEmbedding(A, ((s, 0), (0, -s)), ((0, 1), (A.b, 0)))
    s = _sqrt(A.b)
    return RealEmbedding(A, ((0, 1), (A.a, 0)), ((s, 0), (0, -s)))


# -- period lattice ---------------------------------------------------------

@dataclass(frozen=True)
class PeriodLattice:
    tau: complex
    columns: np.ndarray  # 4x4, column k = sigma(e_k)(tau, 1)^t flattened

    def matrix(self) -> np.ndarray:
        return self.columns


def _check_tau(tau: complex):
    if complex(tau).imag <= 0:
        raise ValueError(f"tau = {tau} is not in the upper half plane")


def lattice_vector(m: np.ndarray, tau: complex) -> np.ndarray:
    z1 = m[0, 0] * tau + m[0, 1]
    z2 = m[1, 0] * tau + m[1, 1]
    return np.array([z1.real, z1.imag, z2.real, z2.imag])


def period_lattice(O: Order, sig: RealEmbedding, tau: complex) -> PeriodLattice:
    tau = complex(tau)
    _check_tau(tau)
    cols = np.column_stack([lattice_vector(sig.image(e, exact=False), tau) for e in O.basis])
    if np.linalg.matrix_rank(cols) < 4:
        raise QuaternionError("period vectors are not R-linearly independent")
    return PeriodLattice(tau, cols)


def covolume(L: PeriodLattice) -> float:
    return abs(float(np.linalg.det(L.columns)))


def dual_lattice_index(O: Order) -> int:
    """[Lambda^# : Lambda] for the pairing (x, y) -> trd(x conj(y))."""
    d = abs(det(O.norm_gram()))
    if d.denominator != 1:
        raise QuaternionError("trace pairing is not integral on this lattice")
    return d.numerator


def faltings_norm_sq_closed(tau: complex, d_B: int) -> float:
    """||dz1 ^ dz2||^2_Fal = d_B Im(tau)^2 / pi^2."""
    tau = complex(tau)
    _check_tau(tau)
    return d_B * tau.imag**2 / math.pi**2


def faltings_norm_sq_numeric(L: PeriodLattice) -> float:
    # |int dz1^dz2^dz1b^dz2b| = 4 vol(C^2/Lambda); times (2 pi)^-2
    return covolume(L) / math.pi**2


def petersson_norm(tau: complex) -> float:
    tau = complex(tau)
    _check_tau(tau)
    return 2 * tau.imag


# -- positivity -------------------------------------------------------------

_COMPLEX_I = np.array(
    [[0, -1, 0, 0],
     [1, 0, 0, 0],
     [0, 0, 0, -1],
     [0, 0, 1, 0]], dtype=float)


def real_riemann_form(gram: SymplecticGram, L: PeriodLattice) -> np.ndarray:
    """Matrix of E extended R-bilinearly to R^4: E(u, v) = u^T M v."""
    Pinv = np.linalg.inv(L.columns)
    return Pinv.T @ gram.as_array() @ Pinv


def hermitian_real_part(gram: SymplecticGram, L: PeriodLattice) -> np.ndarray:
    """Matrix S with u^T S u = E(iu, u)."""
    M = real_riemann_form(gram, L)
    return _COMPLEX_I.T @ M


def check_positivity(O: Order, mu: MuElement, sig: RealEmbedding, tau: complex,
                     samples: int = 1000, rng: Optional[np.random.Generator] = None) -> bool:
    """Sample nonzero z in C^2 and test E(iz, z) > 0."""
    if rng is None:
        rng = np.random.default_rng(0)
    L = period_lattice(O, sig, tau)
    S = hermitian_real_part(riemann_gram(O, mu), L)
    z = rng.standard_normal((samples, 4))
    z = z[np.linalg.norm(z, axis=1) > 0]
    vals = np.einsum("ni,ij,nj->n", z, S, z)
    return bool(np.all(vals > 0))


def normalize_mu_sign(O: Order, mu: MuElement, sig: RealEmbedding, tau: complex = 1j,
                      samples: int = 1000, rng: Optional[np.random.Generator] = None) -> MuElement:
    """Return whichever of +mu, -mu makes E positive; raise if neither does."""
    seed = rng if rng is not None else np.random.default_rng(0)
    passing = [m for m in (mu, -mu) if check_positivity(O, m, sig, tau, samples, seed)]
    if len(passing) != 1:
        raise QuaternionError(f"{len(passing)} of +-mu give a positive Riemann form; expected exactly one")
    return passing[0]
