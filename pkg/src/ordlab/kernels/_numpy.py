"""Pure-numpy implementations of the hot loops."""

from math import factorial

import numpy as np


def _lehmer_weights(k):
    return np.array([factorial(k - 1 - r) for r in range(k)], dtype=np.int64)


def pattern_counts(x, tup):
    """Histogram of relative-order patterns of columns ``tup`` over rows of x.

    Pattern index is the lexicographic rank (itertools.permutations order) of
    the argsort of the tuple's values; ties go to the smaller vertex index.
    """
    tup = np.asarray(tup, dtype=np.int64)
    k = len(tup)
    vals = x[:, tup]
    # rank of each tuple position, with vertex-index tie-break
    ranks = np.zeros(vals.shape, dtype=np.int64)
    for a in range(k):
        for b in range(k):
            if a == b:
                continue
            below = vals[:, b] < vals[:, a]
            if tup[b] < tup[a]:
                below |= vals[:, b] == vals[:, a]
            ranks[:, a] += below
    # sigma[r] = tuple position holding rank r
    sigma = np.empty_like(ranks)
    rows = np.arange(len(ranks))[:, None]
    sigma[rows, ranks] = np.arange(k)[None, :]
    code = np.zeros(len(ranks), dtype=np.int64)
    w = _lehmer_weights(k)
    for r in range(k):
        smaller_after = (sigma[:, r + 1:] < sigma[:, r:r + 1]).sum(axis=1)
        code += smaller_after * w[r]
    return np.bincount(code, minlength=factorial(k)).astype(np.int64)


def below_counts(a, b):
    """For each row, the number of entries of a[row] strictly below each b[row, j]."""
    mb = b.shape[1]
    # b before a in a stable sort, so ties are not counted as below
    both = np.concatenate([b, a], axis=1)
    order = np.argsort(both, axis=1, kind="stable")
    is_a = order >= mb
    seen_a = np.cumsum(is_a, axis=1) - is_a
    out = np.empty(b.shape, dtype=np.int64)
    r, pos = np.nonzero(~is_a)
    out[r, order[r, pos]] = seen_a[r, pos]
    return out
