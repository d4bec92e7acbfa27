"""Pure-Python twins of the compiled enumeration kernels.

Selected by :mod:`modclust._backend` when the extension is missing (or when
``MODCLUST_PURE_PYTHON=1``).  Every sweep visits candidates in exactly the
same order as the compiled version, so results are bit-identical across
backends; only speed differs (see ``benchmarks/bench_kernels.py``).
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def partition_sweep(indptr, indices, weights, loops, degrees, total_weight):
    """Exhaustive max-modularity sweep over all set partitions.

    Enumerates restricted-growth strings depth-first in lexicographic order,
    maintaining per-block volumes and intra-block weight incrementally.
    Returns ``(best_q, best_rgs, leaves_visited)``; the reported maximizer is
    the lexicographically smallest among ties (first strict improvement wins).
    """
    n = len(degrees)
    m2 = float(total_weight)
    inv_m = 1.0 / m2
    inv_4m2 = 1.0 / (4.0 * m2 * m2)

    # neighbors of i restricted to j < i, visited while assigning i
    down = [[] for _ in range(n)]
    for i in range(n):
        for k in range(indptr[i], indptr[i + 1]):
            j = indices[k]
            if j < i:
                down[i].append((int(j), float(weights[k])))

    assign = np.zeros(n, dtype=np.int64)
    best = np.zeros(n, dtype=np.int64)
    vol = [0.0] * (n + 1)
    wb = [[0.0] * (n + 1) for _ in range(n)]  # per-level scratch rows
    best_q = -np.inf
    leaves = 0

    loops_l = [float(x) for x in loops]
    deg_l = [float(x) for x in degrees]

    def rec(i, nblocks, s_e, s_v2):
        nonlocal best_q, leaves
        if i == n:
            leaves += 1
            q = s_e * inv_m - s_v2 * inv_4m2
            if q > best_q:
                best_q = q
                best[:] = assign
            return
        row = wb[i]
        for b in range(nblocks + 1):
            row[b] = 0.0
        for j, w in down[i]:
            row[assign[j]] += w
        d = deg_l[i]
        for b in range(nblocks + 1):  # existing blocks, then one fresh block
            assign[i] = b
            v = vol[b]
            vol[b] = v + d
            rec(
                i + 1,
                nblocks + 1 if b == nblocks else nblocks,
                s_e + row[b] + loops_l[i],
                s_v2 + 2.0 * v * d + d * d,
            )
            vol[b] = v

    rec(0, 0, 0.0, 0.0)
    return float(best_q), best, int(leaves)


def two_split_sweep(indptr, indices, weights, degrees, total_weight):
    """Best modularity over all divisions into at most two communities.

    Gray-code sweep over subsets S of {1..n-1} (vertex 0 stays on the other
    side); Q2 from the closed two-community form.  Returns
    ``(best_q, best_mask, subsets_visited)`` where bit ``v-1`` of the mask
    puts vertex ``v`` into S.
    """
    n = len(degrees)
    m2 = float(total_weight)
    inv_4m2 = 1.0 / (4.0 * m2 * m2)
    deg_l = [float(x) for x in degrees]
    nbr = [
        [(int(indices[k]), float(weights[k])) for k in range(indptr[i], indptr[i + 1])]
        for i in range(n)
    ]

    in_s = [False] * n
    vol_s = 0.0
    cut = 0.0
    best_q = 0.0  # empty S = single community
    best_mask = 0
    total = 1 << (n - 1) if n >= 1 else 1

    for it in range(1, total):
        v = ((it & -it).bit_length() - 1) + 1  # Gray code: flip vertex tz+1
        delta_cut = 0.0
        for u, w in nbr[v]:
            delta_cut += -w if in_s[u] != in_s[v] else w
        cut += delta_cut
        if in_s[v]:
            in_s[v] = False
            vol_s -= deg_l[v]
        else:
            in_s[v] = True
            vol_s += deg_l[v]
        q = (2.0 * vol_s * (2.0 * m2 - vol_s) - 4.0 * m2 * cut) * inv_4m2
        if q > best_q:
            best_q = q
            best_mask = _gray(it)
    return float(best_q), int(best_mask), int(total)


def _gray(i: int) -> int:
    return i ^ (i >> 1)


def maxcut_sweep(indptr, indices):
    """Exact max-cut by exhaustive Gray-code sweep (unweighted simple graph).

    Vertex 0 is fixed outside S.  Returns ``(best_cut, best_mask, visited)``
    where bit ``v-1`` of the mask puts vertex ``v`` into S.
    """
    n = len(indptr) - 1
    nbr = [list(map(int, indices[indptr[i]: indptr[i + 1]])) for i in range(n)]
    in_s = [False] * n
    cut = 0
    best_cut = 0
    best_mask = 0
    total = 1 << (n - 1) if n >= 1 else 1

    for it in range(1, total):
        v = ((it & -it).bit_length() - 1) + 1
        delta = 0
        for u in nbr[v]:
            delta += -1 if in_s[u] != in_s[v] else 1
        cut += delta
        in_s[v] = not in_s[v]
        if cut > best_cut:
            best_cut = cut
            best_mask = _gray(it)
    return int(best_cut), int(best_mask), int(total)
