# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled brute-force conjugator search over small integer 2x2 matrices."""


def find_conjugator(tuple m, tuple r, int bound):
    """Some P with entries in [-bound, bound], det P = +-1 and P m = r P, or None.

    ``m`` and ``r`` are flat 4-tuples (row major).
    """
    cdef int m0 = m[0], m1 = m[1], m2 = m[2], m3 = m[3]
    cdef int r0 = r[0], r1 = r[1], r2 = r[2], r3 = r[3]
    cdef int a, b, c, d, dt
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            for c in range(-bound, bound + 1):
                for d in range(-bound, bound + 1):
                    dt = a * d - b * c
                    if dt != 1 and dt != -1:
                        continue
                    if (a * m0 + b * m2 == r0 * a + r1 * c
                            and a * m1 + b * m3 == r0 * b + r1 * d
                            and c * m0 + d * m2 == r2 * a + r3 * c
                            and c * m1 + d * m3 == r2 * b + r3 * d):
                        return (a, b, c, d)
    return None


def count_unimodular(int bound):
    """Number of integer 2x2 matrices with entries in [-bound, bound] and det +-1."""
    cdef int a, b, c, d, dt
    cdef long n = 0
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            for c in range(-bound, bound + 1):
                for d in range(-bound, bound + 1):
                    dt = a * d - b * c
                    if dt == 1 or dt == -1:
                        n += 1
    return n
