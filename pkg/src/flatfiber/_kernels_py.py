"""Pure-Python versions of the routines in ``_kernels.pyx``."""

from itertools import product


def find_conjugator(m: tuple, r: tuple, bound: int):
    m0, m1, m2, m3 = m
    r0, r1, r2, r3 = r
    rng = range(-bound, bound + 1)
    for a, b, c, d in product(rng, repeat=4):
        if a * d - b * c not in (1, -1):
            continue
        if (a * m0 + b * m2 == r0 * a + r1 * c
                and a * m1 + b * m3 == r0 * b + r1 * d
                and c * m0 + d * m2 == r2 * a + r3 * c
                and c * m1 + d * m3 == r2 * b + r3 * d):
            return (a, b, c, d)
    return None


def count_unimodular(bound: int) -> int:
    rng = range(-bound, bound + 1)
    return sum(1 for a, b, c, d in product(rng, repeat=4) if a * d - b * c in (1, -1))
