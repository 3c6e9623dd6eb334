"""Closed-form Kodaira-Spencer coefficients over the upper half plane.

Notation: sigma(mu) = [[a, b], [c, d]] (these a, b, c, d are matrix
entries, not the structure constants of the algebra).

Sign note: the closed-form vectors w_1 = (b, d), w_2 = (-a, -c) satisfy
E(., w_j) = l_j1, while a direct solve of E(w_j, .) = l_j1 returns their
negatives.  Only det(w_1 | w_2) = ad - bc enters psi, so the metric
identity is insensitive to this sign.  ``solve_beta`` performs the direct
solve; ``closed_form_beta`` / ``ks_images`` give the closed forms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from math import isqrt

import numpy as np

from quatks.orders import MuElement
from quatks.riemann import RealEmbedding, faltings_norm_sq_closed, petersson_norm

TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class MuMatrix:
    a: float
    b: float
    c: float
    d: float

    @classmethod
    def from_element(cls, mu: MuElement, sig: RealEmbedding) -> "MuMatrix":
        m = sig.image(mu.mu, exact=False)
        return cls(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]))

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=float)

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def check(self, d_B: float, tol: float = 1e-9) -> None:
        if abs(self.a + self.d) > 1e-12 * max(1.0, abs(self.a), abs(self.d)):
            raise ValueError(f"sigma(mu) has trace {self.a + self.d}, expected 0")
        if abs(self.det - d_B) > tol * max(1.0, d_B):
            raise ValueError(f"det sigma(mu) = {self.det} does not match d_B = {d_B}")


def adj(m: np.ndarray) -> np.ndarray:
    """Main involution on M_2: m -> tr(m) - m."""
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])


def _unit(r: int, s: int) -> np.ndarray:
    e = np.zeros((2, 2))
    e[r, s] = 1.0
    return e


UNITS = [_unit(0, 0), _unit(0, 1), _unit(1, 0), _unit(1, 1)]


def pairing(mu: np.ndarray, beta: np.ndarray, beta2: np.ndarray) -> float:
    """E(beta v, beta2 v) = -tr(mu^-1 beta beta2^iota)."""
    return -float(np.trace(np.linalg.solve(mu, beta) @ adj(beta2)))


def coefficient(beta2: np.ndarray, j: int, k: int) -> float:
    """l_jk(beta2): the (j, k) entry, 1-indexed."""
    return float(beta2[j - 1, k - 1])


def solve_beta(mu: MuMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Solve -tr(mu^-1 beta_j beta'^iota) = l_j1(beta') for all beta' in M_2(R)."""
    m = mu.as_array()
    if abs(np.linalg.det(m)) < 1e-300:
        raise np.linalg.LinAlgError("sigma(mu) is singular")
    # rows: beta' over matrix units; columns: unknown entries of beta_j
    A = np.array([[pairing(m, u, bp) for u in UNITS] for bp in UNITS])
    out = []
    for j in (1, 2):
        rhs = np.array([coefficient(bp, j, 1) for bp in UNITS])
        out.append(np.linalg.solve(A, rhs).reshape(2, 2))
    return out[0], out[1]


def closed_form_beta(mu: MuMatrix) -> tuple[np.ndarray, np.ndarray]:
    a, b, c, d = mu.a, mu.b, mu.c, mu.d
    return np.array([[0.0, b], [0.0, d]]), np.array([[0.0, -a], [0.0, -c]])


def beta_residuals(mu: MuMatrix, beta: np.ndarray, j: int) -> np.ndarray:
    """-tr(mu^-1 beta beta'^iota) - l_j1(beta') over the four matrix units."""
    m = mu.as_array()
    return np.array([pairing(m, beta, bp) - coefficient(bp, j, 1) for bp in UNITS])


@dataclass(frozen=True)
class KSImage:
    """phi(dz_j) = prefactor * (w_j[0] d/dz1 + w_j[1] d/dz2) (x) dtau."""

    prefactor: complex
    w1: np.ndarray
    w2: np.ndarray

    def vector(self, j: int) -> np.ndarray:
        return self.prefactor * (self.w1 if j == 1 else self.w2)

    def determinant(self) -> complex:
        """det of phi on dz1 ^ dz2, i.e. prefactor^2 det(w1 | w2)."""
        return self.prefactor**2 * float(np.linalg.det(np.column_stack([self.w1, self.w2])))


def ks_images(mu: MuMatrix) -> KSImage:
    return KSImage(1 / TWO_PI_I, np.array([mu.b, mu.d]), np.array([-mu.a, -mu.c]))


def w_from_beta(beta: np.ndarray, tau0: complex) -> np.ndarray:
    return beta @ np.array([tau0, 1.0])


@dataclass(frozen=True)
class PsiConstant:
    """psi((dz1 ^ dz2)^2) = numerator / (2 pi i)^2 (dtau)^2, numerator exact."""

    numerator: int

    @property
    def value(self) -> complex:
        return self.numerator / TWO_PI_I**2

    @property
    def modulus(self) -> float:
        return self.numerator / (4 * math.pi**2)

    def has_integral_square_root(self) -> bool:
        """Whether the constant is (n / 2 pi i)^2 for an integer n."""
        return isqrt(self.numerator) ** 2 == self.numerator


def psi_constant(mu: MuMatrix, d_B: int, tol: float = 1e-9) -> PsiConstant:
    if abs(mu.det - d_B) > tol * max(1, d_B):
        raise ValueError(f"ad - bc = {mu.det} does not match d_B = {d_B}")
    return PsiConstant(int(d_B))


def metric_identity(tau: complex, d_B: int) -> tuple[float, float, float]:
    """(lhs, rhs, relative error) for ||dz1^dz2||^2_Fal = |psi| ||dtau||_Pet^2."""
    lhs = faltings_norm_sq_closed(tau, d_B)
    rhs = PsiConstant(d_B).modulus * petersson_norm(tau) ** 2
    return lhs, rhs, abs(lhs - rhs) / abs(rhs)


def check_metric_identity(tau: complex, d_B: int, rtol: float = 1e-12) -> bool:
    return metric_identity(tau, d_B)[2] <= rtol

