# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels; see _kernels_py.py for the reference versions."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline long long _balanced(long long n):
    # 0, 1, -1, 2, -2, ...
    if n == 0:
        return 0
    if n & 1:
        return (n + 1) >> 1
    return -(n >> 1)


def mu_search(traces, gram2, long long target2, long long bound):
    """First integer vector c in balanced-lexicographic order with
    sum(traces[k] c_k) == 0 and c^T gram2 c == target2, |c_k| <= bound."""
    cdef long long t[4]
    cdef long long g[4][4]
    cdef int i, j
    for i in range(4):
        t[i] = traces[i]
        for j in range(4):
            g[i][j] = gram2[i][j]
    cdef long long n = 2 * bound + 1
    cdef long long i0, i1, i2, i3, c0, c1, c2, c3, lin, q, num
    for i0 in range(n):
        c0 = _balanced(i0)
        for i1 in range(n):
            c1 = _balanced(i1)
            for i2 in range(n):
                c2 = _balanced(i2)
                lin = t[0] * c0 + t[1] * c1 + t[2] * c2
                if t[3] != 0:
                    num = -lin
                    if num % t[3] != 0:
                        continue
                    c3 = num / t[3]
                    if c3 > bound or c3 < -bound:
                        continue
                    q = (g[0][0] * c0 * c0 + g[1][1] * c1 * c1 + g[2][2] * c2 * c2 + g[3][3] * c3 * c3
                         + 2 * (g[0][1] * c0 * c1 + g[0][2] * c0 * c2 + g[0][3] * c0 * c3
                                + g[1][2] * c1 * c2 + g[1][3] * c1 * c3 + g[2][3] * c2 * c3))
                    if q == target2:
                        return (c0, c1, c2, c3)
                elif lin == 0:
                    for i3 in range(n):
                        c3 = _balanced(i3)
                        q = (g[0][0] * c0 * c0 + g[1][1] * c1 * c1 + g[2][2] * c2 * c2 + g[3][3] * c3 * c3
                             + 2 * (g[0][1] * c0 * c1 + g[0][2] * c0 * c2 + g[0][3] * c0 * c3
                                    + g[1][2] * c1 * c2 + g[1][3] * c1 * c3 + g[2][3] * c2 * c3))
                        if q == target2:
                            return (c0, c1, c2, c3)
    return None


def local_solution_exists(long long a, long long b, long long p, int k):
    """True iff z^2 = a x^2 + b y^2 has a solution mod p^k with p not dividing all of x, y, z."""
    cdef long long m = 1
    cdef int e
    for e in range(k):
        m *= p
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] sq = np.zeros(m, dtype=np.uint8)
    cdef long long z, x, y, ax, r
    for z in range(m):
        sq[(z * z) % m] = 1
    # C remainder keeps the sign of the dividend
    a = ((a % m) + m) % m
    b = ((b % m) + m) % m
    for x in range(m):
        ax = (a * ((x * x) % m)) % m
        for y in range(m):
            if x % p == 0 and y % p == 0:
                continue
            r = (ax + b * ((y * y) % m)) % m
            if sq[r]:
                return True
    return False
