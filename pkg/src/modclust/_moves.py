"""Greedy single-vertex move passes shared by Louvain and the SDPM polish.

One pass visits vertices in the supplied order; each vertex takes the best
strictly-improving move into an adjacent community or out into a fresh
singleton.  Community volumes are maintained incrementally.  The adjacency
is materialized once per graph as plain Python lists (numpy scalar access
dominates the runtime otherwise).
"""

from __future__ import annotations

import numpy as np

from .graph import Graph

GAIN_EPS = 1e-14


def _py_adjacency(g: Graph):
    adj = getattr(g, "_move_adj", None)
    if adj is None:
        indptr, indices, weights = g.csr
        idx = indices.tolist()
        wts = weights.tolist()
        ptr = indptr.tolist()
        adj = [list(zip(idx[ptr[v]: ptr[v + 1]], wts[ptr[v]: ptr[v + 1]]))
               for v in range(g.n)]
        g._move_adj = adj
    return adj


class MoveState:
    """Mutable assignment + volume bookkeeping for greedy move passes."""

    __slots__ = ("g", "comm", "vol", "next_label", "m2", "deg", "adj")

    def __init__(self, g: Graph, assignment):
        self.g = g
        self.comm = [int(c) for c in assignment]
        self.m2 = g.total_weight
        self.deg = g.degrees.tolist()
        self.adj = _py_adjacency(g)
        top = max(self.comm) + 1
        self.next_label = top
        vol = [0.0] * (top + g.n + 1)
        for v, c in enumerate(self.comm):
            vol[c] += self.deg[v]
        self.vol = vol

    def run_pass(self, order) -> int:
        """One greedy pass; returns the number of moves made."""
        comm, vol, deg, adj = self.comm, self.vol, self.deg, self.adj
        m2 = self.m2
        half_inv = 1.0 / (2.0 * m2 * m2)
        inv_m = 1.0 / m2
        moved = 0
        for v in order:
            cv = comm[v]
            dv = deg[v]
            link: dict[int, float] = {}
            for u, w in adj[v]:
                cu = comm[u]
                if cu in link:
                    link[cu] += w
                else:
                    link[cu] = w
            base = link.get(cv, 0.0) * inv_m - dv * (vol[cv] - dv) * half_inv
            best_gain = 0.0
            best_c = cv
            if -base > GAIN_EPS:  # escape into a fresh singleton
                best_gain = -base
                best_c = -1
            for cu in sorted(link):  # ascending labels: ties keep the smallest
                if cu == cv:
                    continue
                gain = link[cu] * inv_m - dv * vol[cu] * half_inv - base
                if gain > best_gain + GAIN_EPS:
                    best_gain = gain
                    best_c = cu
            if best_c != cv:
                if best_c == -1:
                    best_c = self.next_label
                    self.next_label += 1
                    if best_c >= len(vol):
                        vol.extend([0.0] * (self.g.n + 1))
                vol[cv] -= dv
                vol[best_c] += dv
                comm[v] = best_c
                moved += 1
        return moved

    def assignment(self) -> np.ndarray:
        return np.asarray(self.comm, dtype=np.int64)


def greedy_local_optimum(g: Graph, assignment) -> np.ndarray:
    """Drive an assignment to a single-vertex-move local optimum.

    Deterministic: vertices are visited in id order until a full pass makes
    no move.  Returns a fresh (non-canonical) assignment array.
    """
    state = MoveState(g, assignment)
    order = range(g.n)
    while state.run_pass(order):
        pass
    return state.assignment()
