"""Pure-Python versions of the search kernels (used when _kernels is not built)."""
from __future__ import annotations

import numpy as np


def balanced(n: int) -> int:
    """The n-th integer in the order 0, 1, -1, 2, -2, ..."""
    if n == 0:
        return 0
    return (n + 1) // 2 if n % 2 else -(n // 2)


def mu_search(traces, gram2, target2: int, bound: int):
    """First integer vector c in balanced-lexicographic order with
    sum(traces[k] c_k) == 0 and c^T gram2 c == target2, |c_k| <= bound."""
    t = [int(x) for x in traces]
    g = [[int(x) for x in row] for row in gram2]
    rng = [balanced(i) for i in range(2 * bound + 1)]

    def form(c):
        return sum(g[i][j] * c[i] * c[j] for i in range(4) for j in range(4))

    for c0 in rng:
        for c1 in rng:
            for c2 in rng:
                lin = t[0] * c0 + t[1] * c1 + t[2] * c2
                if t[3]:
                    if lin % t[3]:
                        continue
                    c3 = -lin // t[3]
                    if abs(c3) <= bound and form((c0, c1, c2, c3)) == target2:
                        return (c0, c1, c2, c3)
                elif lin == 0:
                    for c3 in rng:
                        if form((c0, c1, c2, c3)) == target2:
                            return (c0, c1, c2, c3)
    return None


def local_solution_exists(a: int, b: int, p: int, k: int) -> bool:
    """True iff z^2 = a x^2 + b y^2 has a solution mod p^k with p not dividing all of x, y, z."""
    m = p**k
    sq = np.zeros(m, dtype=bool)
    z = np.arange(m, dtype=np.int64)
    sq[(z * z) % m] = True
    y = np.arange(m, dtype=np.int64)
    by2 = (b % m) * ((y * y) % m) % m
    y_unit = (y % p) != 0
    for x in range(m):
        r = ((a % m) * (x * x % m) + by2) % m
        hit = sq[r] if x % p else sq[r] & y_unit
        if hit.any():
            return True
    return False
