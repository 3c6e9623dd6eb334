"""Truncated Z_{p^2} arithmetic and rank-2 modules over the local maximal order.

R is the ring Z_{p^2} / p^N, with Z_{p^2} = Z_p[w], w^2 = s for the smallest
quadratic non-residue s mod p.  The local maximal order of the ramified
quaternion algebra is O_D = Z_{p^2} + Z_{p^2} j with j^2 = p, j x = conj(x) j.

Under tau, O_D (x) R is the ring of matrices [[m11, m12], [p m21, m22]];
:class:`OrderMatrix` stores such a matrix by (m11, m12, m21, m22) so that no
division by p is ever needed.

A rank-2 module is stored by structure constants (a, b) with ab = p:
j x = a y, j y = b x, where x spans e1 M and y spans e2 M.  (p, 1) is the
standard module, (1, p) the twisted one.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence

import numpy as np
from sympy import isprime


class UnsupportedPrime(ValueError):
    pass


class NotAUnit(ArithmeticError):
    pass


def smallest_nonresidue(p: int) -> int:
    return next(s for s in range(2, p) if pow(s, (p - 1) // 2, p) == p - 1)


@dataclass(frozen=True)
class Zp2Ring:
    p: int
    N: int = 20

    def __post_init__(self):
        if self.p == 2:
            raise UnsupportedPrime("p = 2 is not supported: x^2 - s does not give the unramified extension")
        if not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.N < 1:
            raise ValueError("precision N must be positive")

    @property
    def s(self) -> int:
        return smallest_nonresidue(self.p)

    @property
    def modulus(self) -> int:
        return self.p**self.N

    def __call__(self, u: int = 0, v: int = 0) -> "Zp2":
        return Zp2(u % self.modulus, v % self.modulus, self)

    def zero(self) -> "Zp2":
        return self(0)

    def one(self) -> "Zp2":
        return self(1)

    def omega(self) -> "Zp2":
        return self(0, 1)

    def elements(self) -> Iterator["Zp2"]:
        m = self.modulus
        for u in range(m):
            for v in range(m):
                yield Zp2(u, v, self)

    def base_elements(self) -> Iterator["Zp2"]:
        """Elements of Z/p^N inside R."""
        for u in range(self.modulus):
            yield Zp2(u, 0, self)

    def random(self, rng: np.random.Generator) -> "Zp2":
        m = self.modulus
        return self(int(rng.integers(0, m)), int(rng.integers(0, m)))


def _vp(n: int, p: int, cap: int) -> int:
    if n == 0:
        return cap
    v = 0
    while n % p == 0 and v < cap:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class Zp2:
    u: int
    v: int
    ring: Zp2Ring

    def _lift(self, other) -> "Zp2":
        if isinstance(other, Zp2):
            if other.ring != self.ring:
                raise ValueError("elements of different rings")
            return other
        if isinstance(other, int):
            return self.ring(other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        return self.ring(self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __neg__(self):
        return self.ring(-self.u, -self.v)

    def __sub__(self, other):
        o = self._lift(other)
        return self.ring(self.u - o.u, self.v - o.v)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        s = self.ring.s
        return self.ring(self.u * o.u + s * self.v * o.v, self.u * o.v + self.v * o.u)

    __rmul__ = __mul__

    def frobenius(self) -> "Zp2":
        return self.ring(self.u, -self.v)

    def norm(self) -> int:
        """x * frobenius(x), an element of Z/p^N."""
        return (self.u * self.u - self.ring.s * self.v * self.v) % self.ring.modulus

    def valuation(self) -> int:
        """p-adic valuation, capped at N (N means zero in R)."""
        p, N = self.ring.p, self.ring.N
        return min(_vp(self.u, p, N), _vp(self.v, p, N))

    def is_unit(self) -> bool:
        return self.valuation() == 0

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def inverse(self) -> "Zp2":
        if not self.is_unit():
            raise NotAUnit(f"{self} is not a unit mod {self.ring.p}")
        n_inv = pow(self.norm(), -1, self.ring.modulus)
        return self.frobenius() * n_inv

    def unit_part(self) -> tuple[int, "Zp2"]:
        """(k, w) with self = p^k w and w a unit (undefined for 0, which returns (N, 0))."""
        k = self.valuation()
        if k >= self.ring.N:
            return k, self.ring.zero()
        q = self.ring.p**k
        return k, self.ring(self.u // q, self.v // q)

    def __repr__(self):
        return f"({self.u} + {self.v}w mod {self.ring.p}^{self.ring.N})"


# -- the order O_D ----------------------------------------------------------

@dataclass(frozen=True)
class ODElement:
    """x + y j in O_D = Z_{p^2} + Z_{p^2} j."""

    x: Zp2
    y: Zp2

    def __mul__(self, other: "ODElement") -> "ODElement":
        p = self.x.ring.p
        return ODElement(
            self.x * other.x + self.y * other.y.frobenius() * p,
            self.x * other.y + self.y * other.x.frobenius(),
        )

    def __add__(self, other: "ODElement") -> "ODElement":
        return ODElement(self.x + other.x, self.y + other.y)

    def main_involution(self) -> "ODElement":
        return ODElement(self.x.frobenius(), -self.y)

    def reduced_norm(self) -> int:
        p, m = self.x.ring.p, self.x.ring.modulus
        return (self.x.norm() - p * self.y.norm()) % m

    def reduced_trace(self) -> int:
        return (2 * self.x.u) % self.x.ring.modulus

    @classmethod
    def j(cls, ring: Zp2Ring) -> "ODElement":
        return cls(ring.zero(), ring.one())

    @classmethod
    def scalar(cls, x: Zp2) -> "ODElement":
        return cls(x, x.ring.zero())


@dataclass(frozen=True)
class OrderMatrix:
    """[[m11, m12], [p*m21, m22]] over R."""

    m11: Zp2
    m12: Zp2
    m21: Zp2
    m22: Zp2

    @property
    def ring(self) -> Zp2Ring:
        return self.m11.ring

    def __mul__(self, o: "OrderMatrix") -> "OrderMatrix":
        p = self.ring.p
        return OrderMatrix(
            self.m11 * o.m11 + self.m12 * o.m21 * p,
            self.m11 * o.m12 + self.m12 * o.m22,
            self.m21 * o.m11 + self.m22 * o.m21,
            self.m21 * o.m12 * p + self.m22 * o.m22,
        )

    def __add__(self, o: "OrderMatrix") -> "OrderMatrix":
        return OrderMatrix(self.m11 + o.m11, self.m12 + o.m12, self.m21 + o.m21, self.m22 + o.m22)

    def scale(self, c: Zp2) -> "OrderMatrix":
        return OrderMatrix(c * self.m11, c * self.m12, c * self.m21, c * self.m22)

    def entries(self) -> tuple[tuple[Zp2, Zp2], tuple[Zp2, Zp2]]:
        return ((self.m11, self.m12), (self.m21 * self.ring.p, self.m22))

    def det(self) -> Zp2:
        return self.m11 * self.m22 - self.m12 * self.m21 * self.ring.p

    def adjugate(self) -> "OrderMatrix":
        """Main involution: M -> tr(M) - M."""
        return OrderMatrix(self.m22, -self.m12, -self.m21, self.m11)

    @classmethod
    def identity(cls, ring: Zp2Ring) -> "OrderMatrix":
        return cls(ring.one(), ring.zero(), ring.zero(), ring.one())

    @classmethod
    def e1(cls, ring: Zp2Ring) -> "OrderMatrix":
        return cls(ring.one(), ring.zero(), ring.zero(), ring.zero())

    @classmethod
    def e2(cls, ring: Zp2Ring) -> "OrderMatrix":
        return cls(ring.zero(), ring.zero(), ring.zero(), ring.one())

    @classmethod
    def j(cls, ring: Zp2Ring) -> "OrderMatrix":
        return cls(ring.zero(), ring.one(), ring.one(), ring.zero())


# elements of O_D (x) R as sums of pure tensors d (x) a
ODTensor = tuple[tuple[ODElement, Zp2], ...]


def tensor_mul(t1: ODTensor, t2: ODTensor) -> ODTensor:
    return tuple((d1 * d2, a1 * a2) for d1, a1 in t1 for d2, a2 in t2)


def rho1(d: ODElement) -> OrderMatrix:
    """x + y j -> diag(x, conj x) + diag(y, conj y) [[0, 1], [p, 0]]."""
    return OrderMatrix(d.x, d.y, d.y.frobenius(), d.x.frobenius())


def tau_isomorphism(t: ODTensor) -> OrderMatrix:
    """O_D (x)_{Z_p} R -> [[R, R], [pR, R]],  x (x) a -> diag(a x, a conj x),  j -> [[0, 1], [p, 0]]."""
    if not t:
        raise ValueError("empty tensor")
    ring = t[0][1].ring
    out = OrderMatrix(ring.zero(), ring.zero(), ring.zero(), ring.zero())
    for d, a in t:
        out = out + rho1(d).scale(a)
    return out


def _diag_preimage(alpha: Zp2, beta: Zp2) -> ODTensor:
    # 1 (x) 1/2 + w (x) w/(2s) -> (1, 0); 1 (x) 1/2 - w (x) w/(2s) -> (0, 1)
    ring = alpha.ring
    half = ring(pow(2, -1, ring.modulus))
    c = ring.omega() * pow(2 * ring.s, -1, ring.modulus)
    one = ODElement.scalar(ring.one())
    w = ODElement.scalar(ring.omega())
    return ((one, half * alpha), (w, c * alpha), (one, half * beta), (w, -(c * beta)))


def tau_preimage(M: OrderMatrix) -> ODTensor:
    """A tensor t with tau(t) = M; shows tau is onto the order of matrices."""
    ring = M.ring
    j = ODElement.j(ring)
    diag = _diag_preimage(M.m11, M.m22)
    off = tuple((d * j, a) for d, a in _diag_preimage(M.m12, M.m21))
    return diag + off


def ad_j(M: OrderMatrix) -> OrderMatrix:
    """Conjugation by j: J M J^-1 with J = [[0, 1], [p, 0]]."""
    return OrderMatrix(M.m22, M.m21, M.m12, M.m11)


# -- modules ----------------------------------------------------------------

class ModuleKind(enum.Enum):
    STANDARD = "standard"
    TWISTED = "twisted"


class ClassificationError(ValueError):
    pass


@dataclass(frozen=True)
class ODModule:
    """Rank-2 module with j x = a y, j y = b x and ab = p."""

    a: Zp2
    b: Zp2

    def __post_init__(self):
        ring = self.a.ring
        if (self.a * self.b - ring.p).valuation() < ring.N:
            raise ValueError(f"structure constants must satisfy ab = p, got a={self.a}, b={self.b}")

    @property
    def ring(self) -> Zp2Ring:
        return self.a.ring

    @classmethod
    def standard(cls, ring: Zp2Ring) -> "ODModule":
        return cls(ring(ring.p), ring.one())

    @classmethod
    def twisted(cls, ring: Zp2Ring) -> "ODModule":
        return cls(ring.one(), ring(ring.p))

    @classmethod
    def of_kind(cls, kind: ModuleKind, ring: Zp2Ring) -> "ODModule":
        return cls.standard(ring) if kind is ModuleKind.STANDARD else cls.twisted(ring)

    @property
    def kind(self) -> ModuleKind:
        return classify_module(self.a, self.b)

    def action(self, M: OrderMatrix) -> list[list[Zp2]]:
        """Matrix of M acting on the basis (x, y)."""
        return [[M.m11, self.b * M.m12], [self.a * M.m21, M.m22]]


def classify_module(a: Zp2, b: Zp2) -> ModuleKind:
    if b.is_unit():
        return ModuleKind.STANDARD
    if a.is_unit():
        return ModuleKind.TWISTED
    raise ClassificationError("neither structure constant is a unit; ab = p is impossible")


def normalize_module(M: ODModule) -> tuple[ODModule, Zp2, Zp2]:
    """(normal form, scale of x, scale of y): rescale x by b^-1 or y by a^-1."""
    ring = M.ring
    if M.kind is ModuleKind.STANDARD:
        return ODModule.standard(ring), M.b.inverse(), ring.one()
    return ODModule.twisted(ring), ring.one(), M.a.inverse()


def module_from_action(ring: Zp2Ring, action: Callable[[OrderMatrix], list[list[Zp2]]]) -> ODModule:
    """Read structure constants off a monomial action on R^2."""
    E1 = action(OrderMatrix.e1(ring))
    one = ring.one()
    # the e1-part is spanned by whichever coordinate vector E1 fixes
    if E1[0][0] == one and E1[1][1].is_zero():
        ix, iy = 0, 1
    elif E1[1][1] == one and E1[0][0].is_zero():
        ix, iy = 1, 0
    else:
        raise ValueError("action of e1 is not a coordinate projection")
    J = action(OrderMatrix.j(ring))
    return ODModule(J[iy][ix], J[ix][iy])


def twist_by_ad_mu(M: ODModule) -> ODModule:
    """(M, i o ad(j)); ad(mu) for any mu with ord_p nrd(mu) = 1 differs by an inner unit."""
    return module_from_action(M.ring, lambda X: M.action(ad_j(X)))


# -- linear algebra over R --------------------------------------------------

@dataclass
class Kernel:
    free: list[list[Zp2]]
    torsion: list[tuple[int, list[Zp2]]]

    @property
    def rank(self) -> int:
        return len(self.free)


def kernel(A: Sequence[Sequence[Zp2]], ring: Zp2Ring) -> Kernel:
    """Solutions of A x = 0 over R, via Smith normal form.

    Returns free generators plus (k, g) pairs meaning p^k g is a solution
    (torsion coming from truncation)."""
    A = [list(r) for r in A]
    m, n = len(A), len(A[0])
    V = [[ring.one() if i == j else ring.zero() for j in range(n)] for i in range(n)]
    vals = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j].valuation()
                if v < ring.N and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        v, i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        for row in V:
            row[t], row[j] = row[j], row[t]
        _, u = A[t][t].unit_part()
        uinv = u.inverse()
        for r in range(m):
            if r != t and not A[r][t].is_zero():
                _, q = A[r][t].unit_part()
                f = q * uinv * ring.p ** (A[r][t].valuation() - v)
                A[r] = [x - f * y for x, y in zip(A[r], A[t])]
        for c in range(n):
            if c != t and not A[t][c].is_zero():
                _, q = A[t][c].unit_part()
                f = q * uinv * ring.p ** (A[t][c].valuation() - v)
                for row in A:
                    row[c] = row[c] - f * row[t]
                for row in V:
                    row[c] = row[c] - f * row[t]
        vals.append(v)
        t += 1
    col = lambda k: [V[r][k] for r in range(n)]
    free = [col(k) for k in range(t, n)]
    torsion = [(ring.N - v, col(k)) for k, v in enumerate(vals) if v > 0]
    return Kernel(free, torsion)


# -- Hom and the determinant image ------------------------------------------

@dataclass
class HomModule:
    generator: tuple[Zp2, Zp2]  # f(x') = g0 x, f(y') = g1 y
    rank: int
    torsion: int
    p_factor: bool  # distinct classes: one coordinate of the generator is p times a unit

    def det_valuation(self) -> int:
        return (self.generator[0] * self.generator[1]).valuation()


def hom_equations(Tprime: ODModule, T: ODModule) -> list[list[Zp2]]:
    """Linear constraints on (alpha, beta) for f(x') = alpha x, f(y') = beta y to commute with j."""
    # f(j x') = a' beta y must equal j f(x') = a alpha y, and likewise for y'
    return [[-T.a, Tprime.a], [Tprime.b, -T.b]]


def _normalize_generator(g: Sequence[Zp2]) -> tuple[Zp2, Zp2]:
    for c in g:
        if c.is_unit():
            inv = c.inverse()
            return tuple(inv * x for x in g)
    return tuple(g)


def hom_module(Tprime: ODModule, T: ODModule) -> HomModule:
    ring = T.ring
    K = kernel(hom_equations(Tprime, T), ring)
    if K.rank != 1:
        raise ValueError(f"Hom has free rank {K.rank}, expected 1")
    g = _normalize_generator(K.free[0])
    same = Tprime.kind is T.kind
    return HomModule(g, K.rank, len(K.torsion), p_factor=not same)


def det_image(Tprime: ODModule, T: ODModule) -> int:
    """Valuation k with Im(N^2 (x) det T' -> det T) = p^k det T."""
    return hom_module(Tprime, T).det_valuation()


def image_decomposition(Tprime: ODModule, T: ODModule) -> tuple[int, int]:
    """Valuations (k1, k2) with image of N (x) T' -> T equal to p^k1 e1T + p^k2 e2T."""
    g = hom_module(Tprime, T).generator
    return g[0].valuation(), g[1].valuation()


def brute_force_hom(Tprime: ODModule, T: ODModule, base_only: bool = True) -> list[tuple[Zp2, Zp2]]:
    """All (alpha, beta) solving the Hom constraints, by exhaustion over Z/p^N (or all of R)."""
    ring = T.ring
    elems = list(ring.base_elements() if base_only else ring.elements())
    eqs = hom_equations(Tprime, T)
    return [
        (al, be)
        for al, be in itertools.product(elems, elems)
        if all((r[0] * al + r[1] * be).is_zero() for r in eqs)
    ]


def det_pairing_defect(action: Callable[[OrderMatrix], list[list[Zp2]]], beta: OrderMatrix,
                       x: Sequence[Zp2], y: Sequence[Zp2]) -> Zp2:
    """det(i(beta) x, y) - det(x, i(beta^iota) y)."""
    def apply(m, v):
        return [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]

    def det2(u, v):
        return u[0] * v[1] - u[1] * v[0]

    return det2(apply(action(beta), x), y) - det2(x, apply(action(beta.adjugate()), y))


# -- good primes ------------------------------------------------------------

@dataclass(frozen=True)
class SplitModule:
    """(Z/p^N)^2 with M_2(Z/p^N) acting through beta -> P beta P^-1."""

    p: int
    N: int
    P: tuple[tuple[int, int], tuple[int, int]] = ((1, 0), (0, 1))

    def __post_init__(self):
        if not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")
        d = (self.P[0][0] * self.P[1][1] - self.P[0][1] * self.P[1][0]) % self.p
        if d == 0:
            raise ValueError("change of basis must be invertible mod p")

    @property
    def modulus(self) -> int:
        return self.p**self.N

    def _inv_P(self):
        m = self.modulus
        (a, b), (c, d) = self.P
        di = pow((a * d - b * c) % m, -1, m)
        return ((d * di % m, -b * di % m), (-c * di % m, a * di % m))

    def action(self, beta) -> np.ndarray:
        m = self.modulus
        P = np.array(self.P, dtype=object)
        Pi = np.array(self._inv_P(), dtype=object)
        return (P.dot(np.array(beta, dtype=object)).dot(Pi)) % m


@dataclass
class SplitReport:
    determinant_condition: bool
    decomposition: bool
    summand_ranks: tuple[int, int]
    epsilon_swaps: bool
    hom_rank: int
    restriction_isomorphism: bool
    det_valuation: int

    @property
    def ok(self) -> bool:
        return (self.determinant_condition and self.decomposition and self.summand_ranks == (1, 1)
                and self.epsilon_swaps and self.hom_rank == 1 and self.restriction_isomorphism
                and self.det_valuation == 0)


def _matrix_units():
    return [((1, 0), (0, 0)), ((0, 1), (0, 0)), ((0, 0), (1, 0)), ((0, 0), (0, 1))]


def _image_rank(M, ring: Zp2Ring) -> int:
    """Number of unit invariant factors of M over Z/p^N: the free rank of its image."""
    A = [[ring(int(x)) for x in row] for row in M]
    K = kernel(A, ring)
    return len(A[0]) - K.rank - len(K.torsion)


def split_prime_check(M: SplitModule, d_B: int = 1, samples: int = 20,
                      rng: Optional[np.random.Generator] = None) -> SplitReport:
    """Idempotent decomposition at a prime p not dividing d_B, with T' = (M, i o ad(mu_p)),
    mu_p = [[0, 1], [-d_B, 0]]."""
    p, m = M.p, M.modulus
    if d_B % p == 0:
        raise ValueError(f"p = {p} divides d_B = {d_B}; not a good prime")
    ring = Zp2Ring(p, M.N) if p != 2 else None
    if ring is None:
        raise UnsupportedPrime("p = 2 is not supported")
    rng = rng if rng is not None else np.random.default_rng(0)
    mod = lambda A: np.array(A, dtype=object) % m
    mat = lambda A: np.array(A, dtype=object)

    det_ok = True
    for _ in range(samples):
        beta = mat(rng.integers(0, m, size=(2, 2)).tolist())
        act = M.action(beta)
        d1 = (act[0, 0] * act[1, 1] - act[0, 1] * act[1, 0]) % m
        d2 = (beta[0, 0] * beta[1, 1] - beta[0, 1] * beta[1, 0]) % m
        det_ok &= d1 == d2

    e1, e12, e21, e2 = _matrix_units()
    E1, E2 = M.action(e1), M.action(e2)
    I = mod(np.eye(2, dtype=int).tolist())
    decomposition = (
        np.array_equal(mod(E1 + E2), I)
        and not mod(E1.dot(E2)).any()
        and np.array_equal(mod(E1.dot(E1)), E1)
    )
    ranks = (_image_rank(E1, ring), _image_rank(E2, ring))
    eps = M.action(((0, 1), (1, 0)))
    swaps = np.array_equal(mod(eps.dot(E1)), mod(E2.dot(eps))) and _image_rank(mod(eps.dot(E1)), ring) == 1

    # Hom_{M_2}(T', T): f i'(beta) = i(beta) f for the four matrix units
    mu = mat(((0, 1), (-d_B % m, 0)))
    mu_inv = mat(((0, -pow(d_B, -1, m) % m), (1, 0)))
    rows = []
    for beta in _matrix_units():
        left = M.action(mod(mu.dot(mat(beta)).dot(mu_inv)))  # i'(beta)
        right = M.action(beta)
        # unknown f = [[f0, f1], [f2, f3]]; entry (r, c) of f left - right f
        for r in range(2):
            for c in range(2):
                row = [0] * 4
                for k in range(2):
                    row[2 * r + k] += int(left[k, c])
                    row[2 * k + c] -= int(right[r, k])
                rows.append([ring(x) for x in row])
    K = kernel(rows, ring)
    f = K.free[0] if K.free else [ring.zero()] * 4
    f_mat = [[f[0], f[1]], [f[2], f[3]]]
    det_f = f_mat[0][0] * f_mat[1][1] - f_mat[0][1] * f_mat[1][0]

    # restriction e1 T' -> e1 T: image of a generator of e1 T' = image of i'(e1)
    E1p = M.action(mod(mu.dot(mat(e1)).dot(mu_inv)))
    col = next(k for k in range(2) if any(int(E1p[r, k]) % p for r in range(2)))
    vec = [ring(int(E1p[0, col])), ring(int(E1p[1, col]))]
    img = [f_mat[0][0] * vec[0] + f_mat[0][1] * vec[1], f_mat[1][0] * vec[0] + f_mat[1][1] * vec[1]]
    restriction_iso = any(c.is_unit() for c in img)

    return SplitReport(
        determinant_condition=bool(det_ok),
        decomposition=bool(decomposition),
        summand_ranks=ranks,
        epsilon_swaps=bool(swaps),
        hom_rank=K.rank,
        restriction_isomorphism=restriction_iso,
        det_valuation=det_f.valuation(),
    )
