"""Compiled inner loops for matching m(f) against factors of a binary word.

Words are uint8 arrays of 0/1. A pattern f is described by its letters and
the index of its first 0 and first 1; an occurrence of m(f) with
|m(0)| = a, |m(1)| = b starting at `start` reads m(0) and m(1) off the
positions where f's first 0 and first 1 land, then checks every letter.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numba import njit


@njit(cache=True)
def _match(f, i0, i1, w, start, a, b):
    x = start + i0 * b
    y = start + i1 * a
    if a == 1 and b == 1 and w[x] == 0 and w[y] == 1:
        return False  # identity
    pos = start
    for ch in f:
        if ch == 0:
            for k in range(a):
                if w[pos + k] != w[x + k]:
                    return False
            pos += a
        else:
            for k in range(b):
                if w[pos + k] != w[y + k]:
                    return False
            pos += b
    return True


@njit(cache=True)
def suffix_match(f, n0, n1, i0, i1, w, n, min_sum):
    """Whether some suffix of w[:n] is m(f) with |m(0)| + |m(1)| >= min_sum."""
    m = len(f)
    for length in range(m, n + 1):
        a = 1
        while n0 * a + n1 <= length:
            rest = length - n0 * a
            if rest % n1 == 0:
                b = rest // n1
                if a + b >= min_sum and _match(f, i0, i1, w, n - length, a, b):
                    return True
            a += 1
    return False


@njit(cache=True)
def first_match(f, n0, n1, i0, i1, w, n):
    """(start, a, b) of the shortest, then leftmost, admissible m(f) in w[:n]; start -1 if none."""
    m = len(f)
    for length in range(m, n + 1):
        for start in range(n - length + 1):
            a = 1
            while n0 * a + n1 <= length:
                rest = length - n0 * a
                if rest % n1 == 0:
                    b = rest // n1
                    if _match(f, i0, i1, w, start, a, b):
                        return start, a, b
                a += 1
    return -1, 0, 0


@lru_cache(maxsize=1 << 16)
def pattern(f: str):
    """Kernel arguments for a binary word f containing both letters."""
    arr = np.frombuffer(f.encode(), dtype=np.uint8) - 48
    n0 = f.count("0")
    return arr, n0, len(f) - n0, f.index("0"), f.index("1")


def as_array(w: str) -> np.ndarray:
    return np.frombuffer(w.encode(), dtype=np.uint8) - 48
