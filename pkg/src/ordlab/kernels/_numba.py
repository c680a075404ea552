"""Numba-compiled versions of the hot loops (same contracts as _numpy)."""

from math import factorial

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _pattern_counts(x, tup, weights, out):
    k = tup.shape[0]
    vals = np.empty(k)
    sigma = np.empty(k, dtype=np.int64)
    for row in range(x.shape[0]):
        for a in range(k):
            vals[a] = x[row, tup[a]]
            sigma[a] = a
        # insertion sort of positions by (value, vertex index)
        for i in range(1, k):
            p = sigma[i]
            j = i - 1
            while j >= 0:
                q = sigma[j]
                if vals[q] > vals[p] or (vals[q] == vals[p] and tup[q] > tup[p]):
                    sigma[j + 1] = q
                    j -= 1
                else:
                    break
            sigma[j + 1] = p
        code = 0
        for r in range(k):
            c = 0
            for s in range(r + 1, k):
                if sigma[s] < sigma[r]:
                    c += 1
            code += c * weights[r]
        out[code] += 1


def pattern_counts(x, tup):
    tup = np.ascontiguousarray(tup, dtype=np.int64)
    k = len(tup)
    weights = np.array([factorial(k - 1 - r) for r in range(k)], dtype=np.int64)
    out = np.zeros(factorial(k), dtype=np.int64)
    _pattern_counts(np.ascontiguousarray(x, dtype=np.float64), tup, weights, out)
    return out


@njit(cache=True, nogil=True)
def _below_counts(a, b, out):
    for row in range(a.shape[0]):
        sa = np.sort(a[row])
        for j in range(b.shape[1]):
            out[row, j] = np.searchsorted(sa, b[row, j])


def below_counts(a, b):
    out = np.empty(b.shape, dtype=np.int64)
    _below_counts(np.ascontiguousarray(a, dtype=np.float64), np.ascontiguousarray(b, dtype=np.float64), out)
    return out
