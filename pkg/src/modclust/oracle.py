"""Brute-force ground-truth solvers.

Exact maximum-modularity clustering (all set partitions), exact best
two-community division, and exact max-cut, all at desk scale.  These anchor
the tests of every other module; the hot sweeps run on the kernel backend
(compiled extension or its pure-Python twin).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .graph import Clustering, Graph, modularity

__all__ = [
    "OracleResult",
    "MaxCutResult",
    "exact_max_modularity",
    "exact_max_modularity_two",
    "exact_max_cut",
    "greedy_cut_lower_bound",
    "bell_number",
]

MAX_PARTITION_N = 13   # Bell(13) ~ 2.7e7
MAX_TWO_SPLIT_N = 30   # 2^29 subsets
MAX_CUT_N = 24         # 2^23 subsets


def bell_number(n: int) -> int:
    """Number of set partitions of n elements (Bell triangle)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


@dataclass(frozen=True)
class OracleResult:
    """Exact optimum over the swept family of clusterings."""

    best_clustering: Clustering
    best_value: float
    partitions_examined: int


@dataclass(frozen=True)
class MaxCutResult:
    """A cut given by the vertex subset on one side and its size."""

    best_side: frozenset[int]
    cut_size: int

    def side_array(self, n: int) -> np.ndarray:
        out = np.zeros(n, dtype=bool)
        out[list(self.best_side)] = True
        return out


def exact_max_modularity(g: Graph, max_n: int = MAX_PARTITION_N) -> OracleResult:
    """Maximum modularity over every set partition of the vertices.

    Enumerates restricted-growth strings in lexicographic order; ties are
    broken toward the lexicographically smallest string.  Refuses graphs
    larger than ``max_n`` (Bell growth).
    """
    if g.n > max_n:
        raise ValueError(
            f"exact_max_modularity limited to n <= {max_n} (got n={g.n}); "
            f"Bell({g.n}) partitions would be enumerated"
        )
    if g.total_weight <= 0:
        raise ValueError("modularity undefined: graph has no edge weight")
    indptr, indices, weights = g.csr
    _, rgs, leaves = kernels.partition_sweep(
        indptr, indices, weights, g.loop_weights, g.degrees, g.total_weight
    )
    best = Clustering(rgs)
    return OracleResult(best, modularity(g, best), leaves)


def exact_max_modularity_two(g: Graph, max_n: int = MAX_TWO_SPLIT_N) -> OracleResult:
    """Best modularity over divisions into at most two communities (Q2)."""
    if g.n > max_n:
        raise ValueError(
            f"exact_max_modularity_two limited to n <= {max_n} (got n={g.n})"
        )
    if g.total_weight <= 0:
        raise ValueError("modularity undefined: graph has no edge weight")
    indptr, indices, weights = g.csr
    _, mask, examined = kernels.two_split_sweep(
        indptr, indices, weights, g.degrees, g.total_weight
    )
    assign = np.zeros(g.n, dtype=np.int64)
    for v in range(1, g.n):
        assign[v] = (mask >> (v - 1)) & 1
    best = Clustering(assign)
    return OracleResult(best, modularity(g, best), examined)


def _require_unweighted_simple(g: Graph):
    _, _, ew = g.edge_arrays
    if np.any(g.loop_weights != 0):
        raise ValueError("max-cut oracle requires a loop-free graph")
    if not np.all(ew == 1.0):
        raise ValueError("max-cut oracle requires unit edge weights")


def exact_max_cut(g: Graph, max_n: int = MAX_CUT_N) -> MaxCutResult:
    """Exact maximum cut of an unweighted simple graph, by full sweep."""
    if g.n > max_n:
        raise ValueError(f"exact_max_cut limited to n <= {max_n} (got n={g.n})")
    _require_unweighted_simple(g)
    indptr, indices, _ = g.csr
    cut, mask, _ = kernels.maxcut_sweep(indptr, indices)
    side = frozenset(v for v in range(1, g.n) if (mask >> (v - 1)) & 1)
    return MaxCutResult(side, int(cut))


def greedy_cut_lower_bound(g: Graph) -> MaxCutResult:
    """Locally optimal cut: no single vertex can switch sides and gain.

    Guarantees cut_size >= m/2 (each vertex ends with at least half of its
    edges crossing).  Deterministic: starts from alternating sides, sweeps
    vertices in id order.
    """
    _require_unweighted_simple(g)
    n = g.n
    indptr, indices, _ = g.csr
    side = np.fromiter((v % 2 for v in range(n)), dtype=np.int8, count=n)
    improved = True
    while improved:
        improved = False
        for v in range(n):
            nbrs = indices[indptr[v]: indptr[v + 1]]
            if len(nbrs) == 0:
                continue
            crossing = int(np.count_nonzero(side[nbrs] != side[v]))
            # switching makes the non-crossing edges cross and vice versa
            if len(nbrs) - crossing > crossing:
                side[v] = 1 - side[v]
                improved = True
    eu, ev, _ = g.edge_arrays
    cut = int(np.count_nonzero(side[eu] != side[ev]))
    return MaxCutResult(frozenset(np.nonzero(side == 1)[0].tolist()), cut)
