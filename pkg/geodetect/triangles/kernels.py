"""
Triangle Kernels

Degree orientation, forward-algorithm enumeration and the compensated
accumulation of the weighted statistics.

Every per-vertex kernel is compiled twice: a serial build for callers that
already run on worker threads and a parallel build driven by prange. Each
vertex writes only its own slot and sums in a fixed order, so both builds
return identical bits.
"""

import numpy as np
from numba import njit, prange


@njit(cache=True, inline="always")
def _is_forward(degrees, u, v):
    return degrees[v] > degrees[u] or (degrees[v] == degrees[u] and v > u)


def _count_forward(indptr, indices, degrees):
    n = indptr.shape[0] - 1
    counts = np.zeros(n, dtype=np.int64)
    for u in prange(n):
        found = 0
        for p in range(indptr[u], indptr[u + 1]):
            if _is_forward(degrees, u, indices[p]):
                found += 1
        counts[u] = found
    return counts


def _fill_forward(indptr, indices, degrees, out_indptr, out_indices):
    n = indptr.shape[0] - 1
    for u in prange(n):
        slot = out_indptr[u]
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            if _is_forward(degrees, u, v):
                out_indices[slot] = v
                slot += 1


count_forward_serial = njit(cache=True, nogil=True)(_count_forward)
count_forward_parallel = njit(cache=True, nogil=True, parallel=True)(_count_forward)
fill_forward_serial = njit(cache=True, nogil=True)(_fill_forward)
fill_forward_parallel = njit(cache=True, nogil=True, parallel=True)(_fill_forward)


def _count_per_source(out_indptr, out_indices):
    n = out_indptr.shape[0] - 1
    counts = np.zeros(n, dtype=np.int64)
    for u in prange(n):
        found = 0
        u_start, u_end = out_indptr[u], out_indptr[u + 1]
        for p in range(u_start, u_end):
            v = out_indices[p]
            i, j = u_start, out_indptr[v]
            j_end = out_indptr[v + 1]
            while i < u_end and j < j_end:
                a, b = out_indices[i], out_indices[j]
                if a == b:
                    found += 1
                    i += 1
                    j += 1
                elif a < b:
                    i += 1
                else:
                    j += 1
        counts[u] = found
    return counts


def _fill_triangles(out_indptr, out_indices, offsets, triangles):
    n = out_indptr.shape[0] - 1
    for u in prange(n):
        slot = offsets[u]
        u_start, u_end = out_indptr[u], out_indptr[u + 1]
        for p in range(u_start, u_end):
            v = out_indices[p]
            i, j = u_start, out_indptr[v]
            j_end = out_indptr[v + 1]
            while i < u_end and j < j_end:
                a, b = out_indices[i], out_indices[j]
                if a == b:
                    x, y, z = u, v, a
                    if x > y:
                        x, y = y, x
                    if y > z:
                        y, z = z, y
                    if x > y:
                        x, y = y, x
                    triangles[slot, 0] = x
                    triangles[slot, 1] = y
                    triangles[slot, 2] = z
                    slot += 1
                    i += 1
                    j += 1
                elif a < b:
                    i += 1
                else:
                    j += 1


count_per_source_serial = njit(cache=True, nogil=True)(_count_per_source)
count_per_source_parallel = njit(cache=True, nogil=True, parallel=True)(_count_per_source)
fill_triangles_serial = njit(cache=True, nogil=True)(_fill_triangles)
fill_triangles_parallel = njit(cache=True, nogil=True, parallel=True)(_fill_triangles)


@njit(cache=True, inline="always")
def _neumaier_add(total, compensation, term):
    result = total + term
    if abs(total) >= abs(term):
        compensation += (total - result) + term
    else:
        compensation += (term - result) + total
    return result, compensation


@njit(cache=True, nogil=True)
def compensated_total(values):
    """Neumaier sum of ``values`` in index order."""
    total = 0.0
    comp = 0.0
    for i in range(values.shape[0]):
        total, comp = _neumaier_add(total, comp, values[i])
    return total + comp


def _block_sums(triangles, starts, weights):
    # block a holds the rows whose smallest corner is a, already in (b, c) order
    n = starts.shape[0] - 1
    blocks = np.zeros(n, dtype=np.float64)
    for a in prange(n):
        total = 0.0
        comp = 0.0
        for t in range(starts[a], starts[a + 1]):
            term = 1.0 / (weights[triangles[t, 0]] * weights[triangles[t, 1]] * weights[triangles[t, 2]])
            total, comp = _neumaier_add(total, comp, term)
        blocks[a] = total + comp
    return blocks


@njit(cache=True, nogil=True)
def vertex_pair_sum(indptr, indices, weights, a):
    """
    Compensated sum of 1/(w_b w_c) over edges {b, c} inside N(a), b < c,
    in lexicographic (b, c) order.

    For fixed a this is the lexicographic order of the sorted triangles
    {a, b, c}, so the result equals a pass over the canonical triangle list.
    """
    total = 0.0
    comp = 0.0
    start, end = indptr[a], indptr[a + 1]
    for p in range(start, end):
        b = indices[p]
        # N(a) and N(b) are sorted; walk both from the entries above b
        i = p + 1
        j = indptr[b]
        j_end = indptr[b + 1]
        while i < end and j < j_end:
            x, y = indices[i], indices[j]
            if x == y:
                total, comp = _neumaier_add(total, comp, 1.0 / (weights[b] * weights[x]))
                i += 1
                j += 1
            elif x < y:
                i += 1
            else:
                j += 1
    return total + comp


def _corner_sums(indptr, indices, weights):
    n = indptr.shape[0] - 1
    corner = np.zeros(n, dtype=np.float64)
    for a in prange(n):
        corner[a] = vertex_pair_sum(indptr, indices, weights, a)
    return corner


block_sums_serial = njit(cache=True, nogil=True)(_block_sums)
block_sums_parallel = njit(cache=True, nogil=True, parallel=True)(_block_sums)
corner_sums_serial = njit(cache=True, nogil=True)(_corner_sums)
corner_sums_parallel = njit(cache=True, nogil=True, parallel=True)(_corner_sums)
