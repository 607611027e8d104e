"""
Sampling Kernels

numba kernels for the two edge samplers. Both seed numba's internal
generator themselves, so a call is a pure function of its arguments.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _grow(buffer, size):
    grown = np.empty(buffer.shape[0] * 2, dtype=buffer.dtype)
    grown[:size] = buffer[:size]
    return grown


@njit(cache=True, nogil=True)
def skip_sample_edges(sorted_weights, total, seed, capacity):
    """
    Skip sampling of p_uv = min(w_u w_v / total, 1) over all pairs u < v.

    ``sorted_weights`` must be non-increasing, so along a row the probability
    only decreases and each rejected stretch can be jumped with one geometric
    draw. Expected work is proportional to n plus the number of edges.
    Returns positions in the sorted order.
    """
    np.random.seed(seed)
    n = sorted_weights.shape[0]
    left = np.empty(capacity, dtype=np.int64)
    right = np.empty(capacity, dtype=np.int64)
    size = 0

    for u in range(n - 1):
        v = u + 1
        p = min(sorted_weights[u] * sorted_weights[v] / total, 1.0)
        while v < n and p > 0.0:
            if p < 1.0:
                r = 1.0 - np.random.random()
                skip = math.log(r) / math.log1p(-p)
                if skip >= n - v:
                    break
                v += int(skip)
            if v >= n:
                break
            q = min(sorted_weights[u] * sorted_weights[v] / total, 1.0)
            if np.random.random() < q / p:
                if size == left.shape[0]:
                    left = _grow(left, size)
                    right = _grow(right, size)
                left[size] = u
                right[size] = v
                size += 1
            p = q
            v += 1

    return left[:size], right[:size]


@njit(cache=True, nogil=True)
def community_edges(weights, positions, scale, gamma, threshold_rule, factor, seed, capacity):
    """
    All community pairs, each drawn with its geometric probability.

    p_ij = factor * min(w_i w_j / (scale * dist^d), 1)^gamma, or for the
    threshold rule factor * 1{dist^d <= w_i w_j / scale}. Coincident
    positions get the capped value.
    """
    np.random.seed(seed)
    k = positions.shape[0]
    d = positions.shape[1]
    left = np.empty(capacity, dtype=np.int64)
    right = np.empty(capacity, dtype=np.int64)
    size = 0

    for i in range(k - 1):
        for j in range(i + 1, k):
            dist = 0.0
            for c in range(d):
                delta = abs(positions[i, c] - positions[j, c])
                delta = min(delta, 1.0 - delta)
                if delta > dist:
                    dist = delta
            volume = dist ** d
            reach = weights[i] * weights[j] / scale
            if volume <= reach:
                p = factor
            elif threshold_rule:
                p = 0.0
            else:
                p = factor * (reach / volume) ** gamma
            if p > 0.0 and np.random.random() < p:
                if size == left.shape[0]:
                    left = _grow(left, size)
                    right = _grow(right, size)
                left[size] = i
                right[size] = j
                size += 1

    return left[:size], right[:size]
