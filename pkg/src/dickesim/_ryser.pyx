# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Gray-code Ryser permanent for complex matrices.

per(A) = (-1)^n * sum over nonempty column subsets S of
         (-1)^|S| * prod_i sum_{j in S} A[i, j]

Subsets are visited in Gray-code order so each step updates the running
row sums with a single column add or subtract, O(2^n * n) overall.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def ryser_permanent(cnp.ndarray[cnp.complex128_t, ndim=2] a not None):
    """Permanent of the square complex matrix ``a``."""
    cdef Py_ssize_t n = a.shape[0]
    if a.shape[1] != n:
        raise ValueError("permanent needs a square matrix")
    if n == 0:
        return 1.0 + 0.0j
    if n > 30:
        raise ValueError("matrix too large for subset enumeration")
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] rowsum = np.zeros(n, dtype=np.complex128)
    cdef double complex total = 0
    cdef double complex prod
    cdef unsigned long long k, gray, prev = 0, diff
    cdef unsigned long long top = (<unsigned long long> 1) << n
    cdef Py_ssize_t i, col
    cdef int parity = 1
    for k in range(1, top):
        gray = k ^ (k >> 1)
        diff = gray ^ prev
        col = 0
        while not (diff & 1):
            diff >>= 1
            col += 1
        if gray & ((<unsigned long long> 1) << col):
            for i in range(n):
                rowsum[i] = rowsum[i] + a[i, col]
        else:
            for i in range(n):
                rowsum[i] = rowsum[i] - a[i, col]
        parity = -parity
        prod = rowsum[0]
        for i in range(1, n):
            prod = prod * rowsum[i]
        total = total + parity * prod
        prev = gray
    if n % 2:
        return -total
    return total
