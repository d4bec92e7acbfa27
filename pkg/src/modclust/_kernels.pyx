# cython: language_level=3
"""Compiled enumeration kernels.

Bit-identical twins of :mod:`modclust._kernels_py`: same sweep orders, same
tie-breaks, same floating-point update sequence; only faster.
"""

import numpy as np

cimport cython
cimport numpy as cnp

BACKEND = "compiled"


@cython.boundscheck(False)
@cython.wraparound(False)
def partition_sweep(indptr, indices, weights, loops, degrees, total_weight):
    """Exhaustive max-modularity sweep over all set partitions (lex RGS order)."""
    cdef const cnp.int64_t[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const cnp.int64_t[::1] ind = np.ascontiguousarray(indices, dtype=np.int64)
    cdef const cnp.float64_t[::1] wts = np.ascontiguousarray(weights, dtype=np.float64)
    cdef const cnp.float64_t[::1] lp = np.ascontiguousarray(loops, dtype=np.float64)
    cdef const cnp.float64_t[::1] deg = np.ascontiguousarray(degrees, dtype=np.float64)
    cdef int n = deg.shape[0]
    cdef double m2 = total_weight
    cdef double inv_m = 1.0 / m2
    cdef double inv_4m2 = 1.0 / (4.0 * m2 * m2)

    # down-neighbor CSR: for each i, neighbors j < i
    cdef cnp.int64_t[::1] dptr = np.zeros(n + 1, dtype=np.int64)
    cdef int i, k
    cdef cnp.int64_t j
    for i in range(n):
        for k in range(ip[i], ip[i + 1]):
            if ind[k] < i:
                dptr[i + 1] += 1
    for i in range(n):
        dptr[i + 1] += dptr[i]
    cdef cnp.int64_t[::1] dind = np.empty(dptr[n], dtype=np.int64)
    cdef cnp.float64_t[::1] dwt = np.empty(dptr[n], dtype=np.float64)
    cdef cnp.int64_t[::1] cur = np.asarray(dptr[:n]).copy()
    for i in range(n):
        for k in range(ip[i], ip[i + 1]):
            j = ind[k]
            if j < i:
                dind[cur[i]] = j
                dwt[cur[i]] = wts[k]
                cur[i] += 1

    cdef cnp.int64_t[::1] assign = np.zeros(n, dtype=np.int64)
    best_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] best = best_arr
    cdef cnp.int64_t[::1] bcur = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] nblk = np.zeros(n + 1, dtype=np.int64)
    cdef cnp.float64_t[::1] se = np.zeros(n + 1, dtype=np.float64)
    cdef cnp.float64_t[::1] sv2 = np.zeros(n + 1, dtype=np.float64)
    cdef cnp.float64_t[::1] vol = np.zeros(n + 1, dtype=np.float64)
    cdef cnp.float64_t[::1] wb = np.zeros(n * (n + 1), dtype=np.float64)

    cdef double best_q = -np.inf
    cdef long long leaves = 0
    cdef int b, t
    cdef double q, d

    if n == 0:
        return float(best_q), best_arr, 0

    i = 0
    bcur[0] = -1
    while True:
        if bcur[i] >= 0:
            vol[bcur[i]] -= deg[i]
        bcur[i] += 1
        if bcur[i] > nblk[i]:
            if i == 0:
                break
            i -= 1
            continue
        b = <int> bcur[i]
        d = deg[i]
        se[i + 1] = se[i] + wb[i * (n + 1) + b] + lp[i]
        sv2[i + 1] = sv2[i] + 2.0 * vol[b] * d + d * d
        assign[i] = b
        vol[b] += d
        nblk[i + 1] = nblk[i] + (1 if b == nblk[i] else 0)
        if i + 1 == n:
            leaves += 1
            q = se[n] * inv_m - sv2[n] * inv_4m2
            if q > best_q:
                best_q = q
                for t in range(n):
                    best[t] = assign[t]
        else:
            i += 1
            for t in range(nblk[i] + 1):
                wb[i * (n + 1) + t] = 0.0
            for k in range(dptr[i], dptr[i + 1]):
                wb[i * (n + 1) + assign[dind[k]]] += dwt[k]
            bcur[i] = -1

    return float(best_q), best_arr, int(leaves)


@cython.boundscheck(False)
@cython.wraparound(False)
def two_split_sweep(indptr, indices, weights, degrees, total_weight):
    """Best modularity over all at-most-two-community divisions (Gray order)."""
    cdef const cnp.int64_t[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const cnp.int64_t[::1] ind = np.ascontiguousarray(indices, dtype=np.int64)
    cdef const cnp.float64_t[::1] wts = np.ascontiguousarray(weights, dtype=np.float64)
    cdef const cnp.float64_t[::1] deg = np.ascontiguousarray(degrees, dtype=np.float64)
    cdef int n = deg.shape[0]
    cdef double m2 = total_weight
    cdef double inv_4m2 = 1.0 / (4.0 * m2 * m2)

    cdef cnp.uint8_t[::1] in_s = np.zeros(n, dtype=np.uint8)
    cdef double vol_s = 0.0
    cdef double cut = 0.0
    cdef double best_q = 0.0
    cdef long long best_mask = 0
    cdef long long total = 1
    if n >= 1:
        total = (<long long> 1) << (n - 1)
    cdef long long it, low
    cdef int v, k
    cdef double delta, q

    for it in range(1, total):
        low = it & (-it)
        v = 1
        while low > 1:
            low >>= 1
            v += 1
        delta = 0.0
        for k in range(ip[v], ip[v + 1]):
            if in_s[ind[k]] != in_s[v]:
                delta -= wts[k]
            else:
                delta += wts[k]
        cut += delta
        if in_s[v]:
            in_s[v] = 0
            vol_s -= deg[v]
        else:
            in_s[v] = 1
            vol_s += deg[v]
        q = (2.0 * vol_s * (2.0 * m2 - vol_s) - 4.0 * m2 * cut) * inv_4m2
        if q > best_q:
            best_q = q
            best_mask = it ^ (it >> 1)

    return float(best_q), int(best_mask), int(total)


@cython.boundscheck(False)
@cython.wraparound(False)
def maxcut_sweep(indptr, indices):
    """Exact max-cut by exhaustive Gray-code sweep over 2^(n-1) sides."""
    cdef const cnp.int64_t[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const cnp.int64_t[::1] ind = np.ascontiguousarray(indices, dtype=np.int64)
    cdef int n = ip.shape[0] - 1

    cdef cnp.uint8_t[::1] in_s = np.zeros(n, dtype=np.uint8)
    cdef long long cut = 0
    cdef long long best_cut = 0
    cdef long long best_mask = 0
    cdef long long total = 1
    if n >= 1:
        total = (<long long> 1) << (n - 1)
    cdef long long it, low, delta
    cdef int v, k

    for it in range(1, total):
        low = it & (-it)
        v = 1
        while low > 1:
            low >>= 1
            v += 1
        delta = 0
        for k in range(ip[v], ip[v + 1]):
            if in_s[ind[k]] != in_s[v]:
                delta -= 1
            else:
                delta += 1
        cut += delta
        in_s[v] = 0 if in_s[v] else 1
        if cut > best_cut:
            best_cut = cut
            best_mask = it ^ (it >> 1)

    return int(best_cut), int(best_mask), int(total)
