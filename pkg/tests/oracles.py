"""Independent reference computations for the test-suite."""
import itertools

import numpy as np


def count_below(a, x):
    """Eigenvalues of symmetric ``a`` below ``x``: negative pivots of a - xI.

    Leading principal minors of a - xI via elimination without pivoting; by
    Sylvester's law the number of sign changes in the minor sequence equals the
    number of negative pivots.
    """
    m = np.array(a, dtype=float) - x * np.eye(len(a))
    n = len(m)
    negatives = 0
    for k in range(n):
        pivot = m[k, k]
        if pivot == 0.0:
            pivot = 1e-300
        if pivot < 0:
            negatives += 1
        if k + 1 < n:
            m[k + 1:, k + 1:] -= np.outer(m[k + 1:, k], m[k, k + 1:]) / pivot
    return negatives


def bisection_eigenvalues(a, tol=1e-12):
    a = np.asarray(a, dtype=float)
    n = len(a)
    radius = np.max(np.sum(np.abs(a), axis=1))
    out = []
    for k in range(n):
        lo, hi = -radius - 1.0, radius + 1.0
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if count_below(a, mid) > k:
                hi = mid
            else:
                lo = mid
        out.append(0.5 * (lo + hi))
    return np.array(out)


def subset_sums(weights):
    return np.sort([sum(w for w, b in zip(weights, bits) if b)
                    for bits in itertools.product([0, 1], repeat=len(weights))])
