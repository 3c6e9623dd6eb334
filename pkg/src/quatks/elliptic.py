"""Elliptic curves E_tau = C / (tau Z + Z) over the upper half plane.

Unlike the surface case, the curve identity compares the Faltings norm
*squared* with the Petersson norm to the first power:

    ||dz||^2_Fal = |i / 2pi| * ||dtau||_Pet.

Convention: the polarization here is lambda = -i_can, which flips the sign
of the Kodaira-Spencer map without changing any norm.  Nothing below
depends on that sign.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from quatks.riemann import petersson_norm

SIGN_CONVENTION = "lambda = -i_can; phi(dz) = i/(2 pi) d/dz (x) dtau"


@dataclass(frozen=True)
class EllipticLattice:
    tau: complex

    def __post_init__(self):
        if complex(self.tau).imag <= 0:
            raise ValueError(f"tau = {self.tau} is not in the upper half plane")

    @property
    def covolume(self) -> float:
        return complex(self.tau).imag

    def point(self, a: int, b: int) -> complex:
        return a * complex(self.tau) + b


def e_riemann(a: int, b: int, a2: int, b2: int) -> int:
    """E(a tau + b, a2 tau + b2)."""
    return a * b2 - a2 * b


def ks_elliptic_constant() -> complex:
    return 1j / (2 * math.pi)


def faltings_norm_sq_elliptic(tau: complex) -> float:
    # |int dz ^ dz-bar| = 2 * area of the fundamental parallelogram
    return EllipticLattice(tau).covolume / math.pi


def metric_identity_elliptic(tau: complex) -> tuple[float, float, float]:
    lhs = faltings_norm_sq_elliptic(tau)
    rhs = abs(ks_elliptic_constant()) * petersson_norm(tau)
    return lhs, rhs, abs(lhs - rhs) / abs(rhs)


def check_metric_identity_elliptic(tau: complex, rtol: float = 1e-12) -> bool:
    return metric_identity_elliptic(tau)[2] <= rtol
